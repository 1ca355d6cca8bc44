#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlfree/gibbs.hpp"

using namespace tlfree;

namespace {

Potential quartic_potential() {
    return Potential({{"t1", TLElement(cable2(TLDiagram(2, {{1, 2}, {3, 4}})))}});
}

PAElement xvar() { return include_up(cup_gr0()); }

std::vector<PAElement> basis(int n) {
    std::vector<PAElement> out;
    for (auto& d : enumerate_tl(n + 1)) out.push_back(PAElement::single(1, n, d));
    return out;
}

}  // namespace

TEST_CASE("potential ingestion symmetrizes") {
    auto V = quartic_potential();
    REQUIRE(V.couplings.size() == 1);
    auto& W = V.couplings[0].W;
    CHECK(V.couplings[0].strands == 4);
    // half of each doubled TL(2) diagram
    PAElement expect(0);
    expect.add(4, cable2(TLDiagram(2, {{1, 2}, {3, 4}})), Laurent(Rational(1, 2)));
    expect.add(4, cable2(TLDiagram(2, {{1, 4}, {2, 3}})), Laurent(Rational(1, 2)));
    CHECK(W == expect);
    CHECK(W == dagger(W));
    CHECK(W == symmetrizer(W));
}

TEST_CASE("formal series bookkeeping") {
    FormalSeries f({"t1"}, 2);
    CHECK(f.is_zero());
    f.add({1}, Laurent(3));
    f.add({1}, Laurent(-3));
    CHECK(f.is_zero());  // zero coefficients are dropped
    f.add({2}, Laurent::delta_pow(1));
    CHECK(f.at({2}) == Laurent::delta_pow(1));
    CHECK(f.at({0}).is_zero());
    CHECK_THROWS_AS(f.add({3}, Laurent(1)), resource_limit_error);
    CHECK_THROWS_AS(f.add({1, 1}, Laurent(1)), domain_error);
}

TEST_CASE("gibbs trace type invariants") {
    auto G = voiculescu_trace({"t1"}, 4, 2);
    CHECK(G.depth({0}) == 4);
    CHECK(G.T({1}, 3).is_zero());  // beyond stored orders: zero
    CHECK_THROWS_AS(G.T({0}, 5), resource_limit_error);
    // order 0 must be the Voiculescu series
    auto bad = G.orders;
    bad[{0}][2] = TLElement(TLDiagram(2, {{1, 2}, {3, 4}}));
    CHECK_THROWS_AS(GibbsTrace(4, 2, {"t1"}, bad), domain_error);
    // stored elements must be rho^2 invariant
    auto bad2 = G.orders;
    TLElement t3(3);
    t3.add(TLDiagram(3, {{1, 2}, {3, 6}, {4, 5}}), Laurent(1));
    bad2[{1}] = {TLElement(0), TLElement(1), TLElement(2), t3};
    CHECK_THROWS_AS(GibbsTrace(4, 2, {"t1"}, bad2), domain_error);
}

TEST_CASE("sd_residual vanishes for the quadratic potential") {
    Potential V0;
    auto G = solve_sd(V0, 6, 2);
    CHECK(G.orders.size() == 1);  // no coupling orders at all
    for (int m = 1; m <= 6; ++m) CHECK(G.T({}, m) == semicircle_T(6).at(m));
    for (int n = 0; n <= 4; ++n) CHECK(sd_residual(G, V0, wedge_power(xvar(), n)).is_zero());
    for (int n = 0; n <= 2; ++n)
        for (auto& a : basis(n)) CHECK(sd_residual(G, V0, a).is_zero());
}

TEST_CASE("quartic defect against the Voiculescu trace") {
    auto V = quartic_potential();
    auto G = voiculescu_trace(V.names(), 6, 2);
    auto r = sd_residual(G, V, xvar());
    CHECK(r.at({0}).is_zero());
    CHECK(r.at({1}) == Laurent::delta_pow(2) * Laurent(4) + Laurent(4));
}

TEST_CASE("solve_sd for the 2-cabled quartic potential") {
    auto V = quartic_potential();
    auto G = solve_sd(V, 6, 2);
    CHECK(G.depth({0}) == 6);
    CHECK(G.depth({1}) == 4);  // the cubic gradient costs two strands per order
    CHECK(G.depth({2}) == 2);

    TLDiagram dbl(2, {{1, 4}, {2, 3}});
    TLElement t12(2), t22(2);
    t12.add(dbl, Laurent::delta_pow(2) * Laurent(-4) + Laurent(-4));
    t22.add(dbl, Laurent::delta_pow(4) * Laurent(32) + Laurent::delta_pow(2) * Laurent(72) +
                     Laurent(40));
    CHECK(G.T({1}, 2) == t12);
    CHECK(G.T({2}, 2) == t22);
    for (int m : {1, 3}) {
        CHECK(G.T({1}, m).is_zero());
        CHECK(G.T({1}, m).is_zero());
    }
    auto s = G.series_T(2, dbl);
    CHECK(s.at({1}) == t12.terms.at(dbl));
    CHECK(s.at({0}) == Laurent(1));

    // the solved trace satisfies the full SD system within depth
    CHECK(sd_residual(G, V, PAElement::unit(1)).is_zero());
    for (int n = 0; n <= 1; ++n)
        for (auto& a : basis(n)) CHECK(sd_residual(G, V, a).is_zero());
    CHECK_THROWS_AS(sd_residual(G, V, wedge_power(xvar(), 3)), resource_limit_error);
}

TEST_CASE("conjugate variable identity order by order") {
    // xi = Lambda + DW pairs like the difference quotient against every test
    // element, evaluated without going through sd_residual
    auto V = quartic_potential();
    auto G = solve_sd(V, 6, 2);
    auto DW = cyclic_gradient(V.couplings[0].W);
    for (int n = 0; n <= 1; ++n)
        for (auto& a : basis(n)) {
            auto da = diff_quotient(a);
            for (auto& al : detail::multi_indices(1, 2)) {
                Laurent lhs = tau_order(G, wedge(lambda_gr1(), a), al);
                if (al[0] > 0) lhs += tau_order(G, wedge(DW, a), {al[0] - 1});
                Laurent rhs;
                for (auto& [b, g] : detail::mi_splits(al)) rhs += tau_box_order(G, da, b, g);
                CHECK(lhs == rhs * Laurent::delta_pow(1));
            }
        }
}

TEST_CASE("traciality order by order") {
    auto V = quartic_potential();
    auto G = solve_sd(V, 6, 2);
    for (int na = 0; na <= 1; ++na)
        for (auto& x : basis(na))
            for (int nb = 0; nb <= 1; ++nb)
                for (auto& y : basis(nb))
                    for (auto& al : detail::multi_indices(1, 2))
                        CHECK(tau_order(G, wedge(x, y), al) == tau_order(G, wedge(y, x), al));
}

TEST_CASE("zero coupling solves to zero at every order") {
    Potential V({{"t1", TLElement(2)}});
    auto G = solve_sd(V, 4, 2);
    for (int m = 1; m <= 4; ++m) {
        CHECK(G.T({1}, m).is_zero());
        CHECK(G.T({2}, m).is_zero());
    }
}

TEST_CASE("tangle oracle brute-force regime") {
    auto V = quartic_potential();
    // order 0 reproduces the Voiculescu coefficients
    auto sc = semicircle_T(3);
    for (int m = 1; m <= 3; ++m) CHECK(tangle_oracle_T(V, m, {0}) == sc.at(m));
    // no planar connected filling: parity kills every odd case
    CHECK(tangle_oracle_T(V, 1, {1}).is_zero());
    CHECK(tangle_oracle_T(V, 3, {1}).is_zero());
    CHECK(tangle_oracle(V, 1, {1}).is_zero());
    CHECK_THROWS_AS(tangle_oracle(V, 4, {1}), resource_limit_error);
    CHECK_THROWS_AS(tangle_oracle(V, 2, {3}), resource_limit_error);
}

TEST_CASE("oracle equivalence with the solver") {
    auto V = quartic_potential();
    auto G = solve_sd(V, 6, 2);
    for (int m = 1; m <= 3; ++m) CHECK(tangle_oracle_T(V, m, {1}) == G.T({1}, m));
    for (int m = 1; m <= 2; ++m) CHECK(tangle_oracle_T(V, m, {2}) == G.T({2}, m));
    // scalar view against the moment series of the squared cup
    auto ms = moment_series(G, wedge(cup_gr0(), cup_gr0()));
    CHECK(ms.at({1}) == tangle_oracle(V, 2, {1}));
    CHECK(ms.at({2}) == tangle_oracle(V, 2, {2}));
    // frozen value of the first correction
    CHECK(ms.at({1}) == Laurent::delta_pow(3) * Laurent(-4) + Laurent::delta_pow(1) * Laurent(-4));
}

TEST_CASE("connected cumulant reassembly") {
    auto V = quartic_potential();
    for (int m = 1; m <= 3; ++m)
        for (int o = 0; o <= 2; ++o) CHECK(connected_cumulant_check(V, m, {o}));
    Potential Vz({{"t1", TLElement(2)}});
    for (int o = 0; o <= 2; ++o) CHECK(connected_cumulant_check(Vz, 2, {o}));
}
