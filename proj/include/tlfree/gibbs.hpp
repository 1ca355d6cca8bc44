#pragma once

#include <numeric>
#include <string>

#include "tlfree/free_calc.hpp"

namespace tlfree {

using MultiIndex = std::vector<int>;

namespace detail {

inline int mi_total(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

inline std::string mi_str(const MultiIndex& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

// All multi-indices on nv variables with total degree <= max_total, graded.
inline std::vector<MultiIndex> multi_indices(int nv, int max_total) {
    std::vector<MultiIndex> out{MultiIndex(nv, 0)};
    if (nv == 0) return out;
    MultiIndex cur(nv, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == nv - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            cur[pos] = 0;
            return;
        }
        for (int v = rem; v >= 0; --v) {
            cur[pos] = v;
            rec(pos + 1, rem - v);
        }
        cur[pos] = 0;
    };
    for (int tot = 1; tot <= max_total; ++tot) rec(0, tot);
    return out;
}

// All splits a = b + c with b, c componentwise nonnegative.
inline std::vector<std::pair<MultiIndex, MultiIndex>> mi_splits(const MultiIndex& a) {
    std::vector<std::pair<MultiIndex, MultiIndex>> out;
    MultiIndex b(a.size(), 0);
    while (true) {
        MultiIndex c(a.size());
        for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
        out.push_back({b, c});
        size_t i = 0;
        while (i < a.size() && ++b[i] > a[i]) b[i++] = 0;
        if (i == a.size()) break;
    }
    return out;
}

}  // namespace detail

// V = ½·(doubled cup) + Σ tᵢ Wᵢ; each Wᵢ is cyclically symmetrized and
// †-symmetrized on ingestion.
struct Potential {
    struct Coupling {
        std::string name;
        int strands = 0;
        PAElement W{0};
    };
    std::vector<Coupling> couplings;

    Potential() = default;
    explicit Potential(const std::vector<std::pair<std::string, TLElement>>& in) {
        for (auto& [name, Wtl] : in) {
            PAElement W(0);
            for (auto& [d, c] : Wtl.terms) W.add(Wtl.m, d, c);
            W = symmetrizer((W + dagger(W)) * Laurent(Rational(1, 2)));
            couplings.push_back({name, Wtl.m, W});
        }
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (auto& c : couplings) out.push_back(c.name);
        return out;
    }
};

// Formal power series in the coupling variables, truncated in total degree.
struct FormalSeries {
    std::vector<std::string> variables;
    int truncation = 0;
    std::map<MultiIndex, Laurent> coefficients;

    FormalSeries() = default;
    FormalSeries(std::vector<std::string> vars, int trunc)
        : variables(std::move(vars)), truncation(trunc) {}

    void add(const MultiIndex& a, const Laurent& c) {
        if (a.size() != variables.size()) throw domain_error("FormalSeries: index size mismatch");
        if (detail::mi_total(a) > truncation)
            throw resource_limit_error("FormalSeries: truncation exceeded");
        auto it = coefficients.find(a);
        if (it == coefficients.end()) {
            if (!c.is_zero()) coefficients.emplace(a, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coefficients.erase(it);
        }
    }
    Laurent at(const MultiIndex& a) const {
        auto it = coefficients.find(a);
        return it == coefficients.end() ? Laurent() : it->second;
    }
    bool is_zero() const { return coefficients.empty(); }
    friend bool operator==(const FormalSeries& x, const FormalSeries& y) {
        return x.coefficients == y.coefficients;
    }
};

// Trace data order by order: T^(α)_m for m up to a per-order depth.  Order 0
// is the 2-cabled Voiculescu series; every stored element is ρ²-invariant.
struct GibbsTrace {
    int D = 0;
    int Dt = 0;
    std::vector<std::string> variables;
    std::map<MultiIndex, std::vector<TLElement>> orders;

    GibbsTrace() = default;
    GibbsTrace(int D_, int Dt_, std::vector<std::string> vars,
               std::map<MultiIndex, std::vector<TLElement>> ord)
        : D(D_), Dt(Dt_), variables(std::move(vars)), orders(std::move(ord)) {
        auto sc = semicircle_T(D);
        MultiIndex zero(variables.size(), 0);
        auto it = orders.find(zero);
        if (it == orders.end() || int(it->second.size()) != D + 1)
            throw domain_error("GibbsTrace: missing order-0 data");
        for (int m = 1; m <= D; ++m)
            if (!(it->second[m] == sc.at(m)))
                throw domain_error("GibbsTrace: order 0 is not the Voiculescu trace");
        for (auto& [a, T] : orders) {
            if (a.size() != variables.size()) throw domain_error("GibbsTrace: index size mismatch");
            if (detail::mi_total(a) > Dt)
                throw domain_error("GibbsTrace: order beyond truncation");
            for (int m = 1; m < int(T.size()); ++m) {
                if (T[m].m != m) throw domain_error("GibbsTrace: strand mismatch");
                for (auto& [d, c] : T[m].terms) {
                    auto r = rotate(d, 2);
                    auto jt = T[m].terms.find(r);
                    if (jt == T[m].terms.end() || !(jt->second == c))
                        throw domain_error("GibbsTrace: T_m not rho^2 invariant");
                }
            }
        }
    }

    int depth(const MultiIndex& a) const {
        auto it = orders.find(a);
        return it == orders.end() ? 0 : int(it->second.size()) - 1;
    }
    // Zero beyond the truncation; throws when a solved order is queried past
    // its depth.
    TLElement T(const MultiIndex& a, int m) const {
        auto it = orders.find(a);
        if (it == orders.end()) return TLElement(m);
        if (m >= int(it->second.size()))
            throw resource_limit_error("GibbsTrace: depth exceeded");
        return it->second[m];
    }
    FormalSeries series_T(int m, const TLDiagram& d) const {
        FormalSeries out(variables, Dt);
        for (auto& [a, T] : orders) {
            if (m >= int(T.size())) continue;
            auto it = T[m].terms.find(d);
            if (it != T[m].terms.end()) out.add(a, it->second);
        }
        return out;
    }
};

inline GibbsTrace voiculescu_trace(const std::vector<std::string>& variables, int D, int Dt) {
    std::map<MultiIndex, std::vector<TLElement>> orders;
    orders[MultiIndex(variables.size(), 0)] = semicircle_T(D).T;
    return GibbsTrace(D, Dt, variables, std::move(orders));
}

// τ^(α): the order-α coefficient of the trace of x ∈ Gr_k.
inline Laurent tau_order(const GibbsTrace& G, const PAElement& x, const MultiIndex& alpha) {
    Laurent out;
    bool zero_order = detail::mi_total(alpha) == 0;
    for (auto& [key, c] : x.terms) {
        if (key.n == 0) {
            if (!zero_order) continue;
            Pairing edges = key.d.pairs;
            for (int j = 1; j <= x.k; ++j) edges.push_back({x.k + 1 - j, x.k + j});
            out += c * Laurent::delta_pow(trace_strings(edges, {}).loops - x.k);
            continue;
        }
        for (auto& [dT, cT] : G.T(alpha, key.n).terms)
            out += c * cT * Laurent::delta_pow(detail::tau_loops(key.n, x.k, key.d, dT) - x.k);
    }
    return out;
}

// (τ^(β) ⊗ τ^(γ)) on a box element: order β caps the top, order γ the bottom.
inline Laurent tau_box_order(const GibbsTrace& G, const BoxElement& q, const MultiIndex& beta,
                             const MultiIndex& gamma) {
    Laurent out;
    int k = q.k;
    auto caps = [&](int m, const MultiIndex& a) {
        std::vector<std::pair<TLDiagram, Laurent>> v;
        if (m == 0) {
            if (detail::mi_total(a) == 0) v.push_back({TLDiagram(0, {}), Laurent(1)});
        } else {
            for (auto& [d, c] : G.T(a, m).terms) v.push_back({d, c});
        }
        return v;
    };
    for (auto& [key, c] : q.terms) {
        int s = key.s, t = key.t, N = 2 * s + 2 * t + 4 * k;
        for (auto& [ds, cs] : caps(s, beta))
            for (auto& [dt, ct] : caps(t, gamma)) {
                Pairing edges;
                for (auto& [a, b] : key.d.pairs) edges.push_back({a, b});
                int offS = N, offT = N + 2 * s;
                for (auto& [a, b] : ds.pairs) edges.push_back({a + offS, b + offS});
                for (auto& [a, b] : dt.pairs) edges.push_back({a + offT, b + offT});
                for (int i = 1; i <= 2 * s; ++i) edges.push_back({2 * k + i, offS + i});
                for (int i = 1; i <= 2 * t; ++i)
                    edges.push_back({4 * k + 2 * s + (2 * t + 1 - i), offT + i});
                for (int j = 1; j <= 2 * k; ++j)
                    edges.push_back({2 * k + 1 - j, 2 * k + 2 * s + j});
                int loops = trace_strings(edges, {}).loops;
                out += c * cs * ct * Laurent::delta_pow(loops - 2 * k);
            }
    }
    return out;
}

inline FormalSeries moment_series(const GibbsTrace& G, const PAElement& x) {
    FormalSeries out(G.variables, G.Dt);
    for (auto& a : detail::multi_indices(int(G.variables.size()), G.Dt))
        out.add(a, tau_order(G, x, a));
    return out;
}

// LHS minus RHS of τ_V[(Λ + 𝒟W)∧a] = (τ_V ⊗ τ_V)[∂a], order by order.
inline FormalSeries sd_residual(const GibbsTrace& G, const Potential& V, const PAElement& a) {
    if (a.k != 1) throw domain_error("sd_residual: expects Gr1");
    if (V.couplings.size() != G.variables.size())
        throw domain_error("sd_residual: potential/trace variable mismatch");
    auto da = diff_quotient(a);
    auto la = wedge(lambda_gr1(), a);
    std::vector<PAElement> wa;
    for (auto& c : V.couplings) wa.push_back(wedge(cyclic_gradient(c.W), a));
    FormalSeries out(G.variables, G.Dt);
    for (auto& alpha : detail::multi_indices(int(G.variables.size()), G.Dt)) {
        Laurent lhs = tau_order(G, la, alpha);
        for (size_t i = 0; i < wa.size(); ++i)
            if (alpha[i] > 0) {
                MultiIndex am = alpha;
                --am[i];
                lhs += tau_order(G, wa[i], am);
            }
        Laurent rhs;
        for (auto& [beta, gamma] : detail::mi_splits(alpha))
            rhs += tau_box_order(G, da, beta, gamma);
        out.add(alpha, lhs - rhs * Laurent::delta_pow(1));
    }
    return out;
}

// Order-by-order exact solve of the Schwinger-Dyson equation.  Unknowns at
// order α are the coefficients of T^(α)_m; equations are the SD instances
// against every diagram a one degree below, plus ρ²-invariance rows.  The
// depth available at order α shrinks by Σ αᵢ·max(0, nᵢ−2) because the 𝒟W
// term raises degree.
inline GibbsTrace solve_sd(const Potential& V, int D = 6, int Dt = 2) {
    if (D < 1 || D > 8 || Dt < 0 || Dt > 4) throw resource_limit_error("solve_sd: caps exceeded");
    int nv = int(V.couplings.size());
    std::map<MultiIndex, std::vector<TLElement>> orders;
    orders[MultiIndex(nv, 0)] = semicircle_T(D).T;
    GibbsTrace G(D, Dt, V.names(), orders);
    std::vector<PAElement> DW;
    for (auto& c : V.couplings) DW.push_back(cyclic_gradient(c.W));
    auto idx = detail::multi_indices(nv, Dt);
    for (auto& alpha : idx) {
        if (detail::mi_total(alpha) == 0) continue;
        int shrink = 0;
        for (int i = 0; i < nv; ++i)
            shrink += alpha[i] * std::max(0, V.couplings[i].strands - 2);
        int depth = std::max(0, D - shrink);
        std::vector<TLElement> Ta(depth + 1);
        for (int m = 0; m <= depth; ++m) Ta[m] = TLElement(m);
        G.orders[alpha] = Ta;
        for (int m = 1; m <= depth; ++m) {
            int n = m - 1;
            auto diags = enumerate_tl(m);
            size_t nu = diags.size();
            std::map<TLDiagram, size_t> pos;
            for (size_t j = 0; j < nu; ++j) pos[diags[j]] = j;
            Matrix<RationalFunction> A;
            std::vector<RationalFunction> b;
            for (auto& dA : enumerate_tl(n + 1)) {
                auto ae = PAElement::single(1, n, dA);
                auto la = wedge(lambda_gr1(), ae);
                std::vector<RationalFunction> row(nu);
                for (auto& [key, c] : la.terms) {
                    if (key.n != m) throw domain_error("solve_sd: degree drift");
                    for (size_t j = 0; j < nu; ++j)
                        row[j] = row[j] +
                                 RationalFunction(c * Laurent::delta_pow(
                                                          detail::tau_loops(m, 1, key.d, diags[j]) - 1));
                }
                Laurent rhs;
                for (auto& [beta, gamma] : detail::mi_splits(alpha))
                    rhs += tau_box_order(G, diff_quotient(ae), beta, gamma);
                rhs = rhs * Laurent::delta_pow(1);
                for (int i = 0; i < nv; ++i)
                    if (alpha[i] > 0) {
                        MultiIndex am = alpha;
                        --am[i];
                        rhs -= tau_order(G, wedge(DW[i], ae), am);
                    }
                A.push_back(std::move(row));
                b.push_back(RationalFunction(rhs));
            }
            for (size_t j = 0; j < nu; ++j) {
                size_t r = pos.at(rotate(diags[j], 2));
                if (r == j) continue;
                std::vector<RationalFunction> row(nu);
                row[j] = RationalFunction(Laurent(1));
                row[r] = RationalFunction(Laurent(-1));
                A.push_back(std::move(row));
                b.push_back(RationalFunction());
            }
            auto res = solve_linear(A, b);
            if (!res.consistent || !res.unique)
                throw solver_rank_error("solve_sd: order " + detail::mi_str(alpha) + " m=" +
                                        std::to_string(m) +
                                        (res.consistent ? " under-determined, nullity " +
                                                              std::to_string(int(nu) - res.rank)
                                                        : " inconsistent"));
            TLElement Tm(m);
            for (size_t j = 0; j < nu; ++j) {
                if (res.solution[j].is_zero()) continue;
                try {
                    Tm.add(diags[j], res.solution[j].to_laurent());
                } catch (const domain_error&) {
                    throw solver_rank_error("solve_sd: non-polynomial solution at order " +
                                            detail::mi_str(alpha));
                }
            }
            G.orders[alpha][m] = Tm;
        }
    }
    return GibbsTrace(D, Dt, G.variables, std::move(G.orders));
}

namespace detail {

// Pooled boundary points of an m-tangle with internal boxes: outer points get
// ids 0..2m-1, box b's points follow.  Cables are the doubled half-strings:
// consecutive point pairs of each disc.
struct TangleContext {
    int m = 0;
    std::vector<int> box_type;  // box instance -> coupling index
    std::vector<int> box_pts;   // boundary points of that box
    std::vector<int> box_off;   // pooled id offset
    int total = 0;
    std::vector<int> cable_of;   // pooled id -> cable id
    std::vector<int> cable_mate; // pooled id -> other id of its cable
    std::vector<int> disc_of;    // cable id -> disc (-1 outer, else box index)
};

inline TangleContext tangle_context(const Potential& V, int m, const MultiIndex& order) {
    TangleContext C;
    C.m = m;
    C.total = 2 * m;
    for (size_t i = 0; i < order.size(); ++i)
        for (int r = 0; r < order[i]; ++r) {
            C.box_type.push_back(int(i));
            C.box_pts.push_back(2 * V.couplings[i].strands);
            C.box_off.push_back(C.total);
            C.total += 2 * V.couplings[i].strands;
        }
    C.cable_of.resize(C.total);
    C.cable_mate.resize(C.total);
    auto add_disc = [&](int off, int pts, int disc) {
        for (int p = 0; p < pts; p += 2) {
            int cid = int(C.disc_of.size());
            C.disc_of.push_back(disc);
            C.cable_of[off + p] = C.cable_of[off + p + 1] = cid;
            C.cable_mate[off + p] = off + p + 1;
            C.cable_mate[off + p + 1] = off + p;
        }
    };
    add_disc(0, 2 * m, -1);
    for (size_t b = 0; b < C.box_type.size(); ++b)
        add_disc(C.box_off[b], C.box_pts[b], int(b));
    return C;
}

// Linearize: cut every box to the boundary.  Box blocks enter the word in
// reversed circular order (inner boundaries read backwards), at any position
// and any starting rotation; nesting a block inside an earlier one routes its
// cut through that box's corridor.
inline void tangle_words(const TangleContext& C,
                         const std::function<void(const std::vector<int>&)>& visit) {
    int nb = int(C.box_type.size());
    std::vector<int> perm(nb);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> base(2 * C.m);
    std::iota(base.begin(), base.end(), 0);
    do {
        std::function<void(const std::vector<int>&, int)> rec = [&](const std::vector<int>& word,
                                                                    int idx) {
            if (idx == nb) {
                visit(word);
                return;
            }
            int b = perm[idx], P = C.box_pts[b];
            for (size_t p = 0; p <= word.size(); ++p)
                for (int rot = 0; rot < P; ++rot) {
                    std::vector<int> w2(word.begin(), word.begin() + p);
                    for (int j = 0; j < P; ++j)
                        w2.push_back(C.box_off[b] + ((rot - j) % P + P) % P);
                    w2.insert(w2.end(), word.begin() + p, word.end());
                    rec(w2, idx + 1);
                }
        };
        rec(base, 0);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

// Non-crossing matchings of the word whose quotient to cables is a perfect
// matching of cables (the doubling condition), collected as pooled pairings.
inline void cabled_matchings(const TangleContext& C, const std::vector<int>& word,
                             std::set<Pairing>& found) {
    if (word.size() % 2) return;
    std::vector<int> match(C.total, -1);
    auto ok = [&](int u, int v) {
        if (C.cable_of[u] == C.cable_of[v]) return false;
        int mu = C.cable_mate[u], mv = C.cable_mate[v];
        if (match[mu] == v || match[mv] == u) return false;
        if (match[mu] != -1 && C.cable_of[match[mu]] != C.cable_of[v]) return false;
        if (match[mv] != -1 && C.cable_of[match[mv]] != C.cable_of[u]) return false;
        return true;
    };
    std::function<void(std::vector<std::pair<int, int>>)> rec =
        [&](std::vector<std::pair<int, int>> segs) {
            while (!segs.empty() && segs.back().first > segs.back().second) segs.pop_back();
            if (segs.empty()) {
                Pairing pr;
                for (int u = 0; u < C.total; ++u)
                    if (u < match[u]) pr.push_back({u + 1, match[u] + 1});
                found.insert(canonical_pairs(std::move(pr)));
                return;
            }
            auto [l, r] = segs.back();
            segs.pop_back();
            int u = word[l];
            for (int j = l + 1; j <= r; j += 2) {
                int v = word[j];
                if (!ok(u, v)) continue;
                match[u] = v;
                match[v] = u;
                auto s2 = segs;
                s2.push_back({j + 1, r});
                s2.push_back({l + 1, j - 1});
                rec(std::move(s2));
                match[u] = match[v] = -1;
            }
        };
    rec({{0, int(word.size()) - 1}});
}

// Connectivity of the underlying half-tangle: with the outer disc, or after
// removing it (boxes must hang together through box-to-box strings).
inline bool tangle_connected(const TangleContext& C, const Pairing& pr, bool after_removal) {
    int nb = int(C.box_type.size());
    std::set<std::pair<int, int>> strings;
    for (auto& [u, v] : pr) {
        int a = C.cable_of[u - 1], b = C.cable_of[v - 1];
        strings.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<int> par(nb + 1);
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
    auto unite = [&](int x, int y) { par[find(x)] = find(y); };
    if (after_removal) {
        if (nb == 0) return strings.size() == 1;
        for (auto& [a, b] : strings) {
            int da = C.disc_of[a], db = C.disc_of[b];
            if (da == -1 && db == -1) return false;  // stray arc with no box
            if (da != -1 && db != -1) unite(da, db);
        }
        for (int b = 1; b < nb; ++b)
            if (find(b) != find(0)) return false;
        return true;
    }
    for (auto& [a, b] : strings) unite(C.disc_of[a] + 1, C.disc_of[b] + 1);
    for (int b = 1; b <= nb; ++b)
        if (find(b) != find(0)) return false;
    return true;
}

inline TLElement eval_tangles(const Potential& V, const TangleContext& C,
                              const std::vector<Pairing>& tangles) {
    TLElement out(C.m);
    int nb = int(C.box_type.size());
    std::vector<std::vector<std::pair<TLDiagram, Laurent>>> opts;
    for (int b = 0; b < nb; ++b) {
        std::vector<std::pair<TLDiagram, Laurent>> o;
        for (auto& [key, c] : V.couplings[C.box_type[b]].W.terms) o.push_back({key.d, c});
        if (o.empty()) return out;
        opts.push_back(o);
    }
    std::set<int> boundary;
    for (int i = 1; i <= 2 * C.m; ++i) boundary.insert(i);
    for (auto& pr : tangles) {
        std::vector<size_t> pick(nb, 0);
        while (true) {
            Pairing edges = pr;
            Laurent coeff(1);
            for (int b = 0; b < nb; ++b) {
                auto& [d, c] = opts[b][pick[b]];
                coeff *= c;
                for (auto& [p, q] : d.pairs)
                    edges.push_back({C.box_off[b] + p, C.box_off[b] + q});
            }
            auto res = trace_strings(edges, boundary);
            out.add(TLDiagram(C.m, res.pairs), coeff * Laurent::delta_pow(res.loops));
            int b = 0;
            while (b < nb && ++pick[b] == opts[b].size()) pick[b++] = 0;
            if (b == nb) break;
        }
    }
    return out;
}

}  // namespace detail

// Brute-force enumeration of labelled 2-cabled m-tangles at one coupling
// order: the order-α coefficient of T^(t)_m as a TL(m) element.
inline TLElement tangle_oracle_T(const Potential& V, int m, const MultiIndex& order,
                                 bool connected_after_removal = false) {
    if (order.size() != V.couplings.size()) throw domain_error("tangle_oracle: index size mismatch");
    for (int v : order)
        if (v < 0) throw domain_error("tangle_oracle: negative order");
    if (detail::mi_total(order) > 2 || m < 1 || m > 3)
        throw resource_limit_error("tangle_oracle: brute-force regime exceeded");
    auto C = detail::tangle_context(V, m, order);
    std::set<Pairing> found;
    detail::tangle_words(C, [&](const std::vector<int>& w) { detail::cabled_matchings(C, w, found); });
    std::vector<Pairing> tangles;
    for (auto& pr : found)
        if (detail::tangle_connected(C, pr, connected_after_removal)) tangles.push_back(pr);
    Rational w(1);
    for (int v : order)
        for (int f = 2; f <= v; ++f) w /= f;
    if (detail::mi_total(order) % 2) w = -w;  // e^{-Tr V} expansion: each box carries -t_i
    return detail::eval_tangles(V, C, tangles) * Laurent(w);
}

// Scalar view: the oracle element closed against the m-fold cup pattern,
// matching the order-α coefficient of τ_V(∪^∧m).
inline Laurent tangle_oracle(const Potential& V, int m, const MultiIndex& order) {
    auto el = tangle_oracle_T(V, m, order);
    Pairing cups;
    for (int i = 1; i <= m; ++i) cups.push_back({2 * i - 1, 2 * i});
    TLDiagram cupd(m, cups);
    Laurent out;
    for (auto& [d, c] : el.terms)
        out += c * Laurent::delta_pow(detail::tau_loops(m, 0, cupd, d));
    return out;
}

namespace detail {

// assemble_partition with one element per block (blocks in canonical order).
inline TLElement assemble_labeled(const NCPartition& pi, const std::vector<TLElement>& vals) {
    if (pi.n() == 0) return TLElement(TLDiagram(0, {}), Laurent(1));
    auto& blocks = pi.blocks();
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        auto& blk = blocks[bi];
        bool interval = true;
        for (size_t i = 1; i < blk.size(); ++i)
            if (blk[i] != blk[i - 1] + 1) interval = false;
        if (!interval) continue;
        int l = blk[0] - 1, s = int(blk.size());
        std::vector<std::vector<int>> rest;
        std::vector<TLElement> rest_vals;
        for (size_t bj = 0; bj < blocks.size(); ++bj) {
            if (bj == bi) continue;
            std::vector<int> nb;
            for (int e : blocks[bj]) nb.push_back(e > l ? e - s : e);
            rest.push_back(nb);
            rest_vals.push_back(vals[bj]);
        }
        auto outer = assemble_labeled(NCPartition(pi.n() - s, rest), rest_vals);
        return splice(outer, vals[bi], l);
    }
    throw domain_error("assemble_labeled: no interval block");
}

}  // namespace detail

// T^(t)_m == Σ_{π∈NC(m)} κ_π(t) at the given order, with κ built from the
// connected-after-removal enumeration.
inline bool connected_cumulant_check(const Potential& V, int m, const MultiIndex& order) {
    TLElement lhs = tangle_oracle_T(V, m, order);
    std::map<std::pair<int, MultiIndex>, TLElement> kappa;
    auto kap = [&](int j, const MultiIndex& beta) -> const TLElement& {
        auto key = std::make_pair(j, beta);
        auto it = kappa.find(key);
        if (it == kappa.end())
            it = kappa.emplace(key, tangle_oracle_T(V, j, beta, true)).first;
        return it->second;
    };
    TLElement rhs(m);
    for (auto& pi : enumerate_nc(m)) {
        auto& blocks = pi.blocks();
        int nbk = int(blocks.size());
        std::vector<TLElement> vals(nbk);
        std::function<void(int, const MultiIndex&)> rec = [&](int bi, const MultiIndex& rem) {
            if (bi == nbk - 1) {
                vals[bi] = kap(int(blocks[bi].size()), rem);
                if (!vals[bi].is_zero()) rhs += detail::assemble_labeled(pi, vals);
                return;
            }
            for (auto& [beta, rest] : detail::mi_splits(rem)) {
                vals[bi] = kap(int(blocks[bi].size()), beta);
                if (vals[bi].is_zero()) continue;
                rec(bi + 1, rest);
            }
        };
        rec(0, order);
    }
    return lhs == rhs;
}

}  // namespace tlfree
