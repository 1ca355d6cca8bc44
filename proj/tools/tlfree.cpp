#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "tlfree/free_calc.hpp"
#include "tlfree/json_io.hpp"

using namespace tlfree;

namespace {

constexpr int kDiagramDepthCap = 6;
constexpr int kTDegreeCap = 2;
constexpr int kJWCap = 6;
constexpr int kCutoffCap = 4;

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw domain_error(path + ": " + e.what());
    }
}

void emit(const Json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream os(out);
    if (!os) throw domain_error("cannot write " + out);
    os << j.dump(2) << "\n";
}

CumulantSeq law_cumulants(const std::string& law, const std::string& cumulant_path, int D) {
    if (law == "semicircle") return semicircle_law(D);
    if (law == "free-poisson") return free_poisson_law(D);
    if (law == "custom") {
        if (cumulant_path.empty()) throw domain_error("custom law needs --cumulants");
        auto nu = cumulants_of(read_json(cumulant_path));
        if (nu.D < D) throw domain_error("custom law: fewer cumulants than the requested depth");
        nu.k.resize(D);
        nu.D = D;
        return nu;
    }
    throw domain_error("unknown law: " + law);
}

TSeries law_series(const std::string& law, const std::string& cumulant_path, int D) {
    return build_T(law_cumulants(law, cumulant_path, D), D);
}

Json json_of_rf_element(const TLElementRF& x) {
    Json terms = Json::array();
    for (auto& [d, c] : x.terms)
        terms.push_back({{"pairs", json_of_pairs(d.pairs)},
                         {"coeff", {{"num", json_of(c.num())}, {"den", json_of(c.den())}}}});
    return {{"m", x.m}, {"terms", terms}};
}

bool verify_row(const char* name, bool ok) {
    std::printf("%-44s %s\n", name, ok ? "pass" : "FAIL");
    return ok;
}

bool verify_core() {
    bool all = true;

    bool kr = true;
    for (int n = 1; n <= 5 && kr; ++n)
        for (auto& pi : enumerate_nc(n))
            if (fatten(kreweras(pi)) != rotate(fatten(pi), 1)) kr = false;
    all &= verify_row("kreweras complement vs rotation", kr);

    bool rt = true;
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20 && rt; ++trial) {
        std::vector<Rational> k;
        for (int i = 0; i < 6; ++i)
            k.push_back(Rational(int(rng() % 19) - 9, int(rng() % 9) + 1));
        CumulantSeq c{k};
        if (moments_to_cumulants(cumulants_to_moments(c)).k != c.k) rt = false;
    }
    all &= verify_row("moment/cumulant roundtrip", rt);

    bool cup = true;
    auto sc = semicircle_T(8);
    for (int p = 1; p <= 4; ++p) {
        auto even = tau_k(wedge_power(cup_gr0(), 2 * p), sc);
        if (even != Laurent::delta_pow(p, Rational(catalan(p)))) cup = false;
        if (!tau_k(wedge_power(cup_gr0(), 2 * p - 1), sc).is_zero()) cup = false;
    }
    all &= verify_row("cup moments are Catalan numbers", cup);

    bool tr = true;
    for (int k = 0; k <= 1 && tr; ++k)
        for (int na = 1; na <= 2; ++na)
            for (auto& da : enumerate_tl(na + k))
                for (int nb = 1; nb <= 3 - na; ++nb)
                    for (auto& db : enumerate_tl(nb + k)) {
                        auto x = PAElement::single(k, na, da), y = PAElement::single(k, nb, db);
                        if (tau_k(wedge(x, y), sc) != tau_k(wedge(y, x), sc)) tr = false;
                    }
    all &= verify_row("traciality of the diagram trace", tr);

    auto jw = jones_wenzl(2);
    bool jok = compose(jw, jw) == jw &&
               compose(TLElementRF(cap_generator(2, 1)), jw).is_zero();
    all &= verify_row("Jones-Wenzl idempotent", jok);

    bool gw = true;
    BipartiteGraph G({"v"}, {"w"}, {{"v", "w"}}, {{"v", 1.0}, {"w", 1.0}}, 1.0);
    auto word = [&](int len) {
        return LoopWord(G, std::vector<std::pair<int, int>>(len, {0, 0}));
    };
    gw &= wick_expectation(word(2), G) == 1.0;
    gw &= wick_expectation(word(4), G) == 2.0;
    gw &= wick_expectation(word(3), G) == 0.0;
    all &= verify_row("graph model Wick values", gw);

    return all;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Exact diagrammatic free probability on Temperley-Lieb planar algebras"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker cap (current build is single-threaded)");
    std::string out_path;
    app.add_option("--out", out_path, "write JSON output to a file instead of stdout");

    // nc
    auto* nc = app.add_subcommand("nc", "non-crossing partition lattice");
    auto* nc_enum = nc->add_subcommand("enumerate", "list NC(n)");
    int nc_n = 0;
    nc_enum->add_option("n", nc_n, "number of points")->required();
    nc_enum->callback([&] {
        if (nc_n < 0 || nc_n > nc_default_max())
            throw resource_limit_error("nc enumerate: n exceeds the cap");
        Json arr = Json::array();
        for (auto& pi : enumerate_nc(nc_n)) arr.push_back(json_of(pi));
        emit(arr, out_path);
    });
    auto* nc_kr = nc->add_subcommand("kreweras", "Kreweras complement of a partition");
    std::string nc_file;
    nc_kr->add_option("--partition", nc_file, "partition JSON file")->required();
    nc_kr->callback([&] { emit(json_of(kreweras(partition_of(read_json(nc_file)))), out_path); });

    // tl
    auto* tl = app.add_subcommand("tl", "Temperley-Lieb diagram algebra");
    auto* tl_enum = tl->add_subcommand("enumerate", "list TL(m) diagrams");
    int tl_m = 0;
    tl_enum->add_option("m", tl_m, "number of strands")->required();
    tl_enum->callback([&] {
        if (tl_m < 0 || tl_m > kDiagramDepthCap)
            throw resource_limit_error("tl enumerate: m exceeds the cap");
        Json arr = Json::array();
        for (auto& d : enumerate_tl(tl_m)) arr.push_back({{"pairs", json_of_pairs(d.pairs)}});
        emit(arr, out_path);
    });
    auto* tl_comp = tl->add_subcommand("compose", "stack two TL elements");
    std::string tl_a, tl_b;
    tl_comp->add_option("--a", tl_a, "first element JSON file")->required();
    tl_comp->add_option("--b", tl_b, "second element JSON file")->required();
    tl_comp->callback([&] {
        emit(json_of(compose(tl_element_of(read_json(tl_a)), tl_element_of(read_json(tl_b)))),
             out_path);
    });
    auto* tl_jw = tl->add_subcommand("jw", "Jones-Wenzl idempotent");
    int jw_n = 0;
    tl_jw->add_option("n", jw_n, "number of strands")->required();
    tl_jw->callback([&] { emit(json_of_rf_element(jones_wenzl(jw_n, kJWCap)), out_path); });

    // law
    auto* law = app.add_subcommand("law", "scalar moment/cumulant calculus");
    std::string law_name = "semicircle", law_cums, law_moms;
    int law_depth = 8;
    auto* law_m = law->add_subcommand("moments", "moments of a bundled or custom law");
    law_m->add_option("--law", law_name, "semicircle | free-poisson | custom");
    law_m->add_option("--cumulants", law_cums, "cumulant JSON array (custom law)");
    law_m->add_option("--depth", law_depth, "truncation depth");
    law_m->callback([&] {
        if (law_depth < 1 || law_depth > nc_default_max())
            throw resource_limit_error("law moments: depth exceeds the cap");
        emit(json_of(cumulants_to_moments(law_cumulants(law_name, law_cums, law_depth))),
             out_path);
    });
    auto* law_c = law->add_subcommand("cumulants", "free cumulants of a moment list");
    law_c->add_option("--moments", law_moms, "moment JSON array")->required();
    law_c->callback([&] {
        auto m = moments_of(read_json(law_moms));
        if (m.D > nc_default_max()) throw resource_limit_error("law cumulants: depth cap");
        emit(json_of(moments_to_cumulants(m)), out_path);
    });

    // trace
    auto* trace = app.add_subcommand("trace", "planar-algebra traces");
    auto* tr_eval = trace->add_subcommand("eval", "evaluate tau_k on an element");
    std::string tr_law = "semicircle", tr_cums, tr_elem;
    int tr_k = -1, tr_depth = 0;
    tr_eval->add_option("--law", tr_law, "semicircle | free-poisson | custom");
    tr_eval->add_option("--cumulants", tr_cums, "cumulant JSON array (custom law)");
    tr_eval->add_option("--element", tr_elem, "element JSON file")->required();
    tr_eval->add_option("--k", tr_k, "grading (defaults to the element's k)");
    tr_eval->add_option("--depth", tr_depth, "capping depth (defaults to what the element needs)");
    tr_eval->callback([&] {
        auto x = pa_element_of(read_json(tr_elem));
        if (tr_k >= 0 && tr_k != x.k) throw domain_error("trace eval: --k contradicts the element");
        int D = tr_depth > 0 ? tr_depth : std::max(1, x.max_n() + x.k);
        if (D > 2 * kDiagramDepthCap) throw resource_limit_error("trace eval: depth cap");
        emit(json_of(tau_k(x, law_series(tr_law, tr_cums, D))), out_path);
    });

    // calc
    auto* calc = app.add_subcommand("calc", "free differential calculus");
    std::string cc_law = "semicircle", cc_cums, cc_delta = "2";
    int cc_cutoff = 3;
    auto add_calc_opts = [&](CLI::App* c) {
        c->add_option("--law", cc_law, "semicircle | free-poisson | custom");
        c->add_option("--cumulants", cc_cums, "cumulant JSON array (custom law)");
        c->add_option("--cutoff", cc_cutoff, "degree cutoff");
        c->add_option("--delta", cc_delta, "loop parameter as a rational \"p/q\"");
    };
    auto* cc_conj = calc->add_subcommand("conjugate", "conjugate variable solver");
    add_calc_opts(cc_conj);
    cc_conj->callback([&] {
        if (cc_cutoff < 1 || cc_cutoff > kCutoffCap)
            throw resource_limit_error("calc conjugate: cutoff cap");
        auto T = law_series(cc_law, cc_cums, 2 * cc_cutoff + 2);
        auto cv = conjugate_variable(T, cc_cutoff, rational_from_string(cc_delta));
        emit({{"xi", json_of(cv.xi)}, {"residual", json_of(cv.residual_norm)}}, out_path);
    });
    auto* cc_fish = calc->add_subcommand("fisher", "free Fisher information");
    add_calc_opts(cc_fish);
    cc_fish->callback([&] {
        if (cc_cutoff < 1 || cc_cutoff > kCutoffCap)
            throw resource_limit_error("calc fisher: cutoff cap");
        auto T = law_series(cc_law, cc_cums, 2 * cc_cutoff + 2);
        auto f = fisher(T, cc_cutoff, rational_from_string(cc_delta));
        Json j = {{"finite", f.finite}};
        if (f.finite) j["value"] = json_of(f.value);
        emit(j, out_path);
    });

    // gibbs
    auto* gibbs = app.add_subcommand("gibbs", "free Gibbs states");
    auto* gb_solve = gibbs->add_subcommand("solve", "Schwinger-Dyson solver");
    std::string gb_pot, gb_report;
    int gb_depth = 6, gb_tdeg = 2;
    gb_solve->add_option("--potential", gb_pot, "potential JSON file")->required();
    gb_solve->add_option("--depth", gb_depth, "diagram depth");
    gb_solve->add_option("--t-degree", gb_tdeg, "coupling truncation degree");
    gb_solve->add_option("--report", gb_report, "write the moment report to a file");
    gb_solve->callback([&] {
        if (gb_depth < 1 || gb_depth > kDiagramDepthCap)
            throw resource_limit_error("gibbs solve: depth cap");
        if (gb_tdeg < 0 || gb_tdeg > kTDegreeCap)
            throw resource_limit_error("gibbs solve: t-degree cap");
        auto V = potential_of(read_json(gb_pot));
        auto G = solve_sd(V, gb_depth, gb_tdeg);
        Json orders = Json::array();
        for (auto& [a, T] : G.orders) {
            Json elems = Json::array();
            for (int m = 1; m < int(T.size()); ++m) {
                TLElement el = T[m];
                if (el.is_zero()) continue;
                Json terms = Json::array();
                for (auto& [d, c] : el.terms)
                    terms.push_back({{"pairs", json_of_pairs(d.pairs)}, {"coeff", json_of(c)}});
                elems.push_back({{"m", m}, {"terms", terms}});
            }
            orders.push_back({{"order", a}, {"depth", G.depth(a)}, {"T", elems}});
        }
        Json moments = Json::array();
        auto xv = include_up(cup_gr0());
        for (int m = 1; m <= gb_depth; ++m) {
            auto x = wedge_power(xv, m);
            Json coeffs = Json::array();
            for (auto& a : detail::multi_indices(int(G.variables.size()), gb_tdeg)) {
                Laurent c;
                try {
                    c = tau_order(G, x, a);
                } catch (const resource_limit_error&) {
                    continue;  // moment not determined at this order's depth
                }
                if (!c.is_zero()) coeffs.push_back({{"order", a}, {"value", json_of(c)}});
            }
            moments.push_back({{"m", m}, {"series", coeffs}});
        }
        Json rep = {{"variables", G.variables},
                    {"depth", gb_depth},
                    {"t_degree", gb_tdeg},
                    {"orders", orders},
                    {"moments", moments}};
        emit(rep, gb_report.empty() ? out_path : gb_report);
    });

    // graph
    auto* graph = app.add_subcommand("graph", "bipartite graph model");
    std::string g_file, g_word;
    auto* g_wick = graph->add_subcommand("wick", "exact Wick value of a loop word");
    g_wick->add_option("--graph", g_file, "graph JSON file")->required();
    g_wick->add_option("--word", g_word, "word JSON file")->required();
    g_wick->callback([&] {
        auto G = graph_of(read_json(g_file));
        LoopWord w(G, letters_of(read_json(g_word)));
        auto [raw, norm] = loop_vs_diagram(w, G);
        emit({{"value", raw}, {"rescaled", norm}}, out_path);
    });
    auto* g_mc = graph->add_subcommand("mc", "Monte Carlo block-matrix estimate");
    int g_dim = 200, g_samples = 500;
    std::uint64_t g_seed = 0;
    g_mc->add_option("--graph", g_file, "graph JSON file")->required();
    g_mc->add_option("--word", g_word, "word JSON file")->required();
    g_mc->add_option("--dim", g_dim, "target dimension");
    g_mc->add_option("--samples", g_samples, "number of samples");
    g_mc->add_option("--seed", g_seed, "RNG seed");
    g_mc->callback([&] {
        if (g_dim > 2000 || g_samples > 100000) throw resource_limit_error("graph mc: size cap");
        auto G = graph_of(read_json(g_file));
        LoopWord w(G, letters_of(read_json(g_word)));
        auto [mean, err] = mc_estimate(w, G, {g_dim, g_samples, g_seed});
        emit({{"mean", mean}, {"stderr", err}, {"exact", wick_expectation(w, G)}}, out_path);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    std::string suite = "core";
    verify->add_option("--suite", suite, "suite name (core)");
    bool verify_ok = true;
    verify->callback([&] {
        if (suite != "core") throw domain_error("unknown suite: " + suite);
        verify_ok = verify_core();
    });

    // report
    auto* report = app.add_subcommand("report", "closed-form quantities");
    auto* rep_lf = report->add_subcommand("lf", "interpolated free group factor parameter");
    double lf_delta = 0, lf_index = 0;
    int lf_k = 0;
    rep_lf->add_option("--delta", lf_delta, "loop parameter")->required();
    rep_lf->add_option("--index", lf_index, "global index")->required();
    rep_lf->add_option("--k", lf_k, "relative commutant depth")->required();
    rep_lf->callback([&] { std::cout << lf_parameter(lf_delta, lf_index, lf_k) << "\n"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }
    return verify_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const solver_rank_error& e) {
        std::cerr << "solver rank: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
