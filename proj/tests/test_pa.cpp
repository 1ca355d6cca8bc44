#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlfree/pa.hpp"

using namespace tlfree;

namespace {

std::vector<PAElement> basis(int n, int k) {
    std::vector<PAElement> out;
    for (auto& d : enumerate_tl(n + k)) out.push_back(PAElement::single(k, n, d));
    return out;
}

Laurent pair_against(const TLElement& A, const PAElement& a) {
    Laurent out;
    for (auto& [key, c] : a.terms) {
        if (key.n != A.m) throw domain_error("pair_against: size mismatch");
        for (auto& [dA, cA] : A.terms)
            out += c * cA * Laurent::delta_pow(detail::tau_loops(key.n, 0, key.d, dA));
    }
    return out;
}

}  // namespace

TEST_CASE("wedge basics") {
    for (int k = 0; k <= 2; ++k) {
        auto u = PAElement::unit(k);
        for (int n = 0; n <= 2; ++n)
            for (auto& x : basis(n, k)) {
                CHECK(wedge(u, x) == x);
                CHECK(wedge(x, u) == x);
            }
    }
    auto cup2 = wedge(cup_gr0(), cup_gr0());
    CHECK(cup2 == PAElement::single(0, 2, TLDiagram(2, {{1, 2}, {3, 4}})));
    auto ll = wedge(lambda_gr1(), lambda_gr1());
    CHECK(ll == PAElement::single(1, 2, TLDiagram(3, {{1, 2}, {3, 4}, {5, 6}})));
}

TEST_CASE("wedge associativity") {
    for (int k = 0; k <= 2; ++k)
        for (auto& x : basis(1, k))
            for (auto& y : basis(0, k))
                for (auto& z : basis(1, k))
                    CHECK(wedge(wedge(x, y), z) == wedge(x, wedge(y, z)));
}

TEST_CASE("dagger") {
    for (int k = 0; k <= 2; ++k) CHECK(dagger(PAElement::unit(k)) == PAElement::unit(k));
    CHECK(dagger(lambda_gr1()) == lambda_gr1());
    for (int k = 0; k <= 2; ++k)
        for (auto& x : basis(1, k)) {
            CHECK(dagger(dagger(x)) == x);
            for (auto& y : basis(1, k))
                CHECK(dagger(wedge(x, y)) == wedge(dagger(y), dagger(x)));
        }
}

TEST_CASE("include_up") {
    CHECK(include_up(PAElement::unit(1)) == PAElement::unit(2));
    CHECK(include_up(cup_gr0()) == PAElement::single(1, 1, TLDiagram(2, {{1, 4}, {2, 3}})));
    for (int k = 0; k <= 1; ++k)
        for (auto& x : basis(1, k))
            for (auto& y : basis(1, k))
                CHECK(include_up(wedge(x, y)) == wedge(include_up(x), include_up(y)));
}

TEST_CASE("build_T") {
    auto sc = semicircle_T(6);
    CHECK(sc.at(2) == TLElement(TLDiagram(2, {{1, 4}, {2, 3}})));
    CHECK(sc.at(1).is_zero());
    CHECK(sc.at(3).is_zero());
    CHECK(sc.at(5).is_zero());
    CHECK(sc.at(4).terms.size() == 2);
    auto fp = free_poisson_T(4);
    TLElement fp2(2);
    fp2.add(TLDiagram(2, {{1, 4}, {2, 3}}), Laurent(1));
    fp2.add(TLDiagram(2, {{1, 2}, {3, 4}}), Laurent(1));
    CHECK(fp.at(2) == fp2);
    CHECK(fp.at(3).terms.size() == 5);
    CHECK_THROWS_AS(sc.at(7), resource_limit_error);
}

TEST_CASE("TSeries rejects non-tracial data") {
    // a single non-rotation-invariant TL(3) diagram
    std::vector<TLElement> T(4);
    T[1] = TLElement(1);
    T[2] = TLElement(2);
    T[3] = TLElement(TLDiagram(3, {{1, 4}, {2, 3}, {5, 6}}));
    CHECK_THROWS_AS(TSeries(3, T), domain_error);
    T[3] = TLElement(3);
    CHECK_NOTHROW(TSeries(3, T));
}

TEST_CASE("tau_k on cups") {
    auto sc = semicircle_T(10);
    CHECK(tau_k(wedge(cup_gr0(), cup_gr0()), sc) == Laurent::delta_pow(1));
    CHECK(tau_k(cup_gr0(), sc).is_zero());
    CHECK(tau_k(wedge_power(cup_gr0(), 4), sc) == Laurent::delta_pow(2) * Laurent(2));
    for (int p = 0; p <= 5; ++p) {
        CHECK(tau_k(wedge_power(cup_gr0(), 2 * p), sc) ==
              Laurent::delta_pow(p, catalan(p)));
        if (2 * p + 1 <= 10) CHECK(tau_k(wedge_power(cup_gr0(), 2 * p + 1), sc).is_zero());
    }
    CHECK_THROWS_AS(tau_k(wedge_power(cup_gr0(), 11), semicircle_T(6)), resource_limit_error);
}

TEST_CASE("tau_k unit normalization") {
    auto sc = semicircle_T(4);
    for (int k = 0; k <= 3; ++k) CHECK(tau_k(PAElement::unit(k), sc) == Laurent(1));
}

TEST_CASE("traciality") {
    for (auto& T : {semicircle_T(4), free_poisson_T(4)})
        for (int k = 0; k <= 2; ++k)
            for (int nx = 0; nx <= 2; ++nx)
                for (int ny = 0; ny + nx <= 4; ++ny)
                    for (auto& x : basis(nx, k))
                        for (auto& y : basis(ny, k))
                            CHECK(tau_k(wedge(x, y), T) == tau_k(wedge(y, x), T));
}

TEST_CASE("cond_exp") {
    auto sc = semicircle_T(4);
    for (int k = 0; k <= 2; ++k)
        CHECK(cond_exp(PAElement::unit(k), sc) == PAElement::unit(k));
    CHECK(cond_exp(lambda_gr1(), sc).is_zero());
    CHECK(cond_exp(include_up(cup_gr0()), sc).is_zero());
    for (auto& T : {semicircle_T(4), free_poisson_T(4)})
        for (int k = 0; k <= 2; ++k)
            for (int n = 0; n + k <= 4; ++n)
                for (auto& x : basis(n, k))
                    CHECK(tau_k(x, T) == tau_k(cond_exp(x, T), T));
}

TEST_CASE("cond_exp bimodule property") {
    auto fp = free_poisson_T(4);
    for (auto& z : basis(0, 2))
        for (auto& x : basis(1, 2))
            for (auto& zp : basis(0, 2))
                CHECK(cond_exp(wedge(wedge(z, x), zp), fp) ==
                      wedge(wedge(z, cond_exp(x, fp)), zp));
}

TEST_CASE("include_up preserves the trace") {
    for (auto& T : {semicircle_T(4), free_poisson_T(4)})
        for (int k = 0; k <= 2; ++k)
            for (int n = 0; n + k <= 4; ++n)
                for (auto& x : basis(n, k))
                    CHECK(tau_k(include_up(x), T) == tau_k(x, T));
}

TEST_CASE("side-cap moments match convolution roots") {
    // moments of delta^{-1} Lambda are the moments of nu^{boxplus 1/delta}
    auto lam = lambda_gr1();
    for (auto& [nu, D] : std::vector<std::pair<CumulantSeq, int>>{
             {semicircle_law(8), 8}, {free_poisson_law(8), 8}}) {
        auto T = build_T(nu, D);
        CumulantSeqT<Laurent> kl;
        kl.D = 8;
        for (auto& v : nu.k) kl.k.push_back(Laurent(v));
        auto mom = cumulants_to_moments(convolution_power(kl, Laurent::delta_pow(-1)));
        for (int p = 1; p <= 4; ++p)
            CHECK(tau_k(wedge_power(lam, p), T) * Laurent::delta_pow(-p) == mom.m[p - 1]);
    }
}

TEST_CASE("tensor embed and tau_box") {
    CHECK(box_unit(1) == [] {
        BoxElement u(1);
        u.add(0, 0, TLDiagram(2, {{2, 3}, {1, 4}}), Laurent(1));
        return u;
    }());
    auto sc = semicircle_T(6);
    CHECK(tau_box(box_unit(1), sc) == Laurent(1));
    CHECK(tau_box(box_unit(2), sc) == Laurent(1));
    for (auto& T : {semicircle_T(6), free_poisson_T(6)})
        for (int k = 1; k <= 2; ++k)
            for (int nx = 0; nx <= 3 - k; ++nx)
                for (int ny = 0; ny <= 3 - k; ++ny)
                    for (auto& x : basis(nx, k))
                        for (auto& y : basis(ny, k))
                            CHECK(tau_box(tensor_embed(x, y), T) ==
                                  tau_k(x, T) * tau_k(y, T));
}

TEST_CASE("box_dagger and box_wedge") {
    CHECK(box_dagger(box_unit(1)) == box_unit(1));
    for (auto& x : basis(1, 1))
        for (auto& y : basis(1, 1)) {
            auto q = tensor_embed(x, y);
            CHECK(box_dagger(box_dagger(q)) == q);
            CHECK(box_wedge(box_unit(1), q) == q);
            CHECK(box_wedge(q, box_unit(1)) == q);
            for (auto& z : basis(1, 1)) {
                auto p = tensor_embed(z, z);
                // (a⊗b)(c⊗d) = ac ⊗ (db)^op
                CHECK(box_wedge(q, p) == tensor_embed(wedge(x, z), wedge(z, y)));
            }
        }
}

TEST_CASE("pa_cumulants") {
    auto sc = semicircle_T(5);
    CHECK(pa_cumulants(sc, 2) == TLElement(TLDiagram(2, {{1, 4}, {2, 3}})));
    CHECK(pa_cumulants(sc, 1).is_zero());
    CHECK(pa_cumulants(sc, 3).is_zero());
    auto fp = free_poisson_T(5);
    for (auto& T : {sc, fp})
        for (int m = 1; m <= 5; ++m) {
            TLElement sum(m);
            for (auto& pi : enumerate_nc(m))
                sum += assemble_partition(pi, [&](int j) { return pa_cumulants(T, j); });
            CHECK(sum == T.at(m));
        }
}

TEST_CASE("eval_distribution") {
    auto sc = semicircle_T(8);
    auto lam = lambda_gr1();
    for (int n = 0; n <= 3; ++n)
        for (auto& a : basis(n, 0)) CHECK(eval_distribution(lam, a, sc) == tau_k(a, sc));
    PAElement zero(1);
    CHECK(eval_distribution(zero, wedge_power(cup_gr0(), 2), sc).is_zero());
    auto c = Laurent::delta_pow(1) + Laurent(3);
    for (int n = 1; n <= 4; ++n) {
        Laurent cn(1);
        for (int i = 0; i < n; ++i) cn *= c;
        CHECK(eval_distribution(lam * c, wedge_power(cup_gr0(), n), sc) ==
              cn * tau_k(wedge_power(cup_gr0(), n), sc));
    }
    // the cup-on-top element closes each slot with a loop and a fresh cup
    auto xvar = include_up(cup_gr0());
    for (int n = 1; n <= 4; ++n)
        CHECK(eval_distribution(xvar, wedge_power(cup_gr0(), n), sc) ==
              Laurent::delta_pow(n) * tau_k(wedge_power(cup_gr0(), n), sc));
}

TEST_CASE("gram_psd") {
    auto sc = semicircle_T(8);
    auto [G1, ok1] = gram_psd({PAElement::unit(0)}, sc, Rational(2));
    CHECK(G1 == Matrix<Rational>{{1}});
    CHECK(ok1);
    auto [G2, ok2] = gram_psd({PAElement::unit(0), cup_gr0()}, sc, Rational(2));
    CHECK(G2 == Matrix<Rational>{{1, 0}, {0, 2}});
    CHECK(ok2);
    auto [G3, ok3] = gram_psd(
        {PAElement::unit(0), cup_gr0(), wedge_power(cup_gr0(), 2)}, sc, Rational(2));
    CHECK(G3 == Matrix<Rational>{{1, 0, 2}, {0, 2, 0}, {2, 0, 8}});
    CHECK(ok3);
    CHECK_THROWS_AS(gram_psd({PAElement::unit(0)}, sc, Rational(0)), domain_error);
}

TEST_CASE("product formula for free cumulants") {
    auto rhs = [](const std::vector<PAElement>& xs, const TSeries& T) {
        int m = 0;
        std::vector<int> sizes;
        for (auto& x : xs) {
            int n = x.max_n();
            sizes.push_back(n);
            m += n;
        }
        PAElement prod = PAElement::unit(0);
        for (auto& x : xs) prod = wedge(prod, x);
        auto hat = hat_embed(NCPartition::singletons(int(xs.size())), sizes);
        auto one = NCPartition::one_block(m);
        Laurent out;
        for (auto& pi : enumerate_nc(m)) {
            if (!(nc_join(pi, hat) == one)) continue;
            out += pair_against(
                assemble_partition(pi, [&](int j) { return pa_cumulants(T, j); }), prod);
        }
        return out;
    };
    for (auto& T : {semicircle_T(10), free_poisson_T(10)})
        for (auto& x : {cup_gr0(), wedge_power(cup_gr0(), 2)}) {
            int deg = x.max_n();
            std::vector<Laurent> mom;
            for (int n = 1; n <= 3; ++n) mom.push_back(tau_k(wedge_power(x, n), T));
            auto kappa = moments_to_cumulants(MomentSeqT<Laurent>(mom));
            for (int n = 1; n <= 3; ++n)
                CHECK(kappa.k[n - 1] == rhs(std::vector<PAElement>(n, x), T));
            (void)deg;
        }
}
