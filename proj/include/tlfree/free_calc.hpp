#pragma once

#include "tlfree/pa.hpp"

namespace tlfree {

// Free difference quotient on Gr₁: each split of a (n,1) term relabels the
// boundary one step (the marked corner moves past the old right point) and
// reads the j-th top string pair as the inner legs.
inline BoxElement diff_quotient(const PAElement& x) {
    if (x.k != 1) throw domain_error("diff_quotient: expects Gr1");
    BoxElement out(1);
    for (auto& [key, c] : x.terms) {
        int n = key.n, N = 2 * n + 2;
        Pairing shifted;
        for (auto& [a, b] : key.d.pairs) shifted.push_back({a % N + 1, b % N + 1});
        TLDiagram d(n + 1, shifted);
        for (int j = 1; j <= n; ++j) out.add(j - 1, n - j, d, c);
    }
    return out;
}

// Cyclic gradient Gr₀ → Gr₁: open the j-th string pair to the side boundary
// and rotate the remaining pairs to the top.
inline PAElement cyclic_gradient(const PAElement& x) {
    if (x.k != 0) throw domain_error("cyclic_gradient: expects Gr0");
    PAElement out(1);
    for (auto& [key, c] : x.terms) {
        int n = key.n;
        for (int j = 1; j <= n; ++j) {
            auto relabel = [&](int q) {
                if (q == 2 * j) return 1;
                if (q == 2 * j - 1) return 2 * n;
                if (q > 2 * j) return q - 2 * j + 1;
                return q + 2 * (n - j) + 1;
            };
            Pairing p;
            for (auto& [a, b] : key.d.pairs) p.push_back({relabel(a), relabel(b)});
            out.add(n - 1, TLDiagram(n, p), c);
        }
    }
    return out;
}

// a # b: insert b ∈ Gr₁ between a's top and bottom halves.
inline PAElement hash_op(const BoxElement& a, const PAElement& b) {
    if (a.k != 1 || b.k != 1) throw domain_error("hash_op: expects k=1");
    PAElement out(1);
    for (auto& [ka, ca] : a.terms)
        for (auto& [kb, cb] : b.terms) {
            int s = ka.s, t = ka.t, m = kb.n, off = 2 * s + 2 * t + 4;
            Pairing edges;
            for (auto& [p, q] : ka.d.pairs) edges.push_back({p, q});
            for (auto& [p, q] : kb.d.pairs) edges.push_back({p + off, q + off});
            edges.push_back({2 * s + 3, off + 1});           // UR meets b's left
            edges.push_back({2 * s + 4, off + 2 * m + 2});   // LR meets b's right
            std::set<int> boundary{1, 2};
            for (int i = 1; i <= 2 * s; ++i) boundary.insert(2 + i);
            for (int i = 1; i <= 2 * t; ++i) boundary.insert(2 * s + 4 + i);
            for (int i = 1; i <= 2 * m; ++i) boundary.insert(off + 1 + i);
            int n = s + m + t;
            auto relabel = [&](int p) {
                if (p == 2) return 1;
                if (p == 1) return 2 * n + 2;
                if (p <= 2 + 2 * s) return p - 1;                   // a's top
                if (p > off) return (p - off - 1) + 1 + 2 * s;      // b's top
                return (p - 2 * s - 4) + 1 + 2 * s + 2 * m;         // a's bottom
            };
            auto res = trace_strings(edges, boundary);
            Pairing pairs;
            for (auto [p, q] : res.pairs) pairs.push_back({relabel(p), relabel(q)});
            out.add(n, TLDiagram(n + 1, pairs), ca * cb * Laurent::delta_pow(res.loops));
        }
    return out;
}

// a · b: join a's right to b's left and a's left to b's right, landing in Gr₀.
inline PAElement dot_op(const PAElement& a, const PAElement& b) {
    if (a.k != 1 || b.k != 1) throw domain_error("dot_op: expects k=1");
    PAElement out(0);
    for (auto& [ka, ca] : a.terms)
        for (auto& [kb, cb] : b.terms) {
            int na = ka.n, nb = kb.n, off = 2 * na + 2;
            Pairing edges;
            for (auto& [p, q] : ka.d.pairs) edges.push_back({p, q});
            for (auto& [p, q] : kb.d.pairs) edges.push_back({p + off, q + off});
            edges.push_back({2 * na + 2, off + 1});
            edges.push_back({1, off + 2 * nb + 2});
            std::set<int> boundary;
            for (int i = 1; i <= 2 * na; ++i) boundary.insert(1 + i);
            for (int i = 1; i <= 2 * nb; ++i) boundary.insert(off + 1 + i);
            auto relabel = [&](int p) { return p > off ? (p - off - 1) + 2 * na : p - 1; };
            auto res = trace_strings(edges, boundary);
            Pairing pairs;
            for (auto [p, q] : res.pairs) pairs.push_back({relabel(p), relabel(q)});
            out.add(na + nb, TLDiagram(na + nb, pairs),
                    ca * cb * Laurent::delta_pow(res.loops));
        }
    return out;
}

// Projection dropping the constant (n = 0) part.
inline PAElement project_constantless(const PAElement& x) {
    PAElement out(x.k);
    for (auto& [key, c] : x.terms)
        if (key.n > 0) out.add(key.n, key.d, c);
    return out;
}

// Cyclic symmetrizer on Gr₀: average of the n rotations of each P_n term.
inline PAElement symmetrizer(const PAElement& x) {
    if (x.k != 0) throw domain_error("symmetrizer: expects Gr0");
    PAElement out(0);
    for (auto& [key, c] : x.terms) {
        if (key.n == 0) continue;
        for (int r = 0; r < key.n; ++r)
            out.add(key.n, rotate(key.d, 2 * r), c * Laurent(Rational(1, key.n)));
    }
    return out;
}

inline PAElement number_op(const PAElement& x) {
    PAElement out(x.k);
    for (auto& [key, c] : x.terms) out.add(key.n, key.d, c * Laurent(key.n));
    return out;
}

inline PAElement sigma_op(const PAElement& x) {
    PAElement out(x.k);
    for (auto& [key, c] : x.terms)
        if (key.n > 0) out.add(key.n, key.d, c * Laurent(Rational(1, key.n)));
    return out;
}

struct ConjugateVariable {
    PAElement xi{1};
    Rational residual_norm = 0;  // squared l2 residual of the defining system
};

namespace detail {

inline std::vector<std::pair<int, TLDiagram>> gr1_basis(int cutoff) {
    std::vector<std::pair<int, TLDiagram>> out;
    for (int n = 0; n <= cutoff; ++n)
        for (auto& d : enumerate_tl(n + 1)) out.push_back({n, d});
    return out;
}

inline std::pair<Matrix<Laurent>, std::vector<Laurent>> conjugate_system(const TSeries& T,
                                                                         int cutoff) {
    if (2 * cutoff > T.D) throw resource_limit_error("conjugate_variable: depth exceeded");
    auto B = gr1_basis(cutoff);
    size_t N = B.size();
    Matrix<Laurent> M(N, std::vector<Laurent>(N));
    std::vector<Laurent> rhs(N);
    for (size_t i = 0; i < N; ++i) {
        auto xi = PAElement::single(1, B[i].first, B[i].second);
        // pairing against ∂: the split legs join the two closure strings, so
        // the tensor-product trace is δ times the boxed trace
        rhs[i] = tau_box(diff_quotient(xi), T) * Laurent::delta_pow(1);
        for (size_t j = 0; j < N; ++j) {
            auto bj = PAElement::single(1, B[j].first, B[j].second);
            M[i][j] = tau_k(wedge(bj, xi), T);
        }
    }
    return {M, rhs};
}

}  // namespace detail

// Exact solve at a rational specialization of δ; falls back to least squares
// (normal equations) when the system is inconsistent, reporting the squared
// residual.
inline ConjugateVariable conjugate_variable(const TSeries& T, int cutoff,
                                            const Rational& delta_value) {
    if (delta_value <= 0) throw domain_error("conjugate_variable: delta must be positive");
    auto [M, rhs] = detail::conjugate_system(T, cutoff);
    auto B = detail::gr1_basis(cutoff);
    size_t N = B.size();
    Matrix<Rational> A(N, std::vector<Rational>(N));
    std::vector<Rational> b(N);
    for (size_t i = 0; i < N; ++i) {
        b[i] = rhs[i].eval(delta_value);
        for (size_t j = 0; j < N; ++j) A[i][j] = M[i][j].eval(delta_value);
    }
    ConjugateVariable cv;
    auto res = solve_linear(A, b);
    std::vector<Rational> c;
    if (res.consistent) {
        c = res.solution;
    } else {
        Matrix<Rational> G(N, std::vector<Rational>(N));
        std::vector<Rational> g(N);
        for (size_t i = 0; i < N; ++i) {
            for (size_t j = 0; j < N; ++j)
                for (size_t l = 0; l < N; ++l) G[i][j] += A[l][i] * A[l][j];
            for (size_t l = 0; l < N; ++l) g[i] += A[l][i] * b[l];
        }
        auto ls = solve_linear(G, g);
        if (!ls.consistent) throw solver_rank_error("conjugate_variable: normal equations failed");
        c = ls.solution;
        for (size_t i = 0; i < N; ++i) {
            Rational ri = -b[i];
            for (size_t j = 0; j < N; ++j) ri += A[i][j] * c[j];
            cv.residual_norm += ri * ri;
        }
    }
    for (size_t j = 0; j < N; ++j)
        if (c[j] != 0) cv.xi.add(B[j].first, B[j].second, Laurent(c[j]));
    return cv;
}

// Formal-δ solve over the field of rational functions; requires a unique
// solution with Laurent-polynomial entries.
inline ConjugateVariable conjugate_variable_formal(const TSeries& T, int cutoff) {
    auto [M, rhs] = detail::conjugate_system(T, cutoff);
    auto B = detail::gr1_basis(cutoff);
    size_t N = B.size();
    Matrix<RationalFunction> A(N, std::vector<RationalFunction>(N));
    std::vector<RationalFunction> b(N);
    for (size_t i = 0; i < N; ++i) {
        b[i] = RationalFunction(rhs[i]);
        for (size_t j = 0; j < N; ++j) A[i][j] = RationalFunction(M[i][j]);
    }
    auto res = solve_linear(A, b);
    if (!res.consistent || !res.unique)
        throw solver_rank_error("conjugate_variable: formal system is rank deficient");
    ConjugateVariable cv;
    for (size_t j = 0; j < N; ++j) {
        if (res.solution[j].is_zero()) continue;
        try {
            cv.xi.add(B[j].first, B[j].second, res.solution[j].to_laurent());
        } catch (const domain_error&) {
            throw solver_rank_error("conjugate_variable: formal solution is not polynomial");
        }
    }
    return cv;
}

struct FisherResult {
    bool finite = false;
    Rational value = 0;  // squared Fisher information tau_1(xi ∧ xi) when finite
};

inline FisherResult fisher(const TSeries& T, int cutoff, const Rational& delta_value) {
    auto cv = conjugate_variable(T, cutoff, delta_value);
    if (cv.residual_norm != 0) return {false, 0};
    return {true, tau_k(wedge(cv.xi, cv.xi), T).eval(delta_value)};
}

// Adjoint of ∂: the ξ insertion minus the T-capped correction sums.
inline PAElement partial_star(const BoxElement& Q, const TSeries& T, const PAElement& xi) {
    if (Q.k != 1) throw domain_error("partial_star: expects k=1 box");
    PAElement out = hash_op(Q, xi);
    auto caps = [&](int m) {
        std::vector<std::pair<Pairing, Laurent>> v;
        if (m == 0) {
            v.push_back({Pairing{}, Laurent(1)});
        } else {
            for (auto& [d, c] : T.at(m).terms) v.push_back({d.pairs, c});
        }
        return v;
    };
    for (auto& [key, c] : Q.terms) {
        int s = key.s, t = key.t;
        int UR = 2 * s + 3, LR = 2 * s + 4;
        auto top_pt = [&](int i) { return 2 + i; };
        auto bot_pt = [&](int i) { return 2 * s + 4 + i; };
        // top corrections: cap the last s-l top pairs, reroute the split pair
        for (int l = 1; l <= s; ++l) {
            for (auto& [cap, cT] : caps(s - l)) {
                Pairing edges = key.d.pairs;
                int off = 2 * s + 2 * t + 4;
                for (auto& [p, q] : cap) edges.push_back({p + off, q + off});
                for (int i = 1; i <= 2 * (s - l); ++i)
                    edges.push_back({top_pt(2 * l + i), off + i});
                edges.push_back({top_pt(2 * l), UR});
                edges.push_back({top_pt(2 * l - 1), LR});
                std::set<int> boundary{1, 2};
                for (int i = 1; i <= 2 * (l - 1); ++i) boundary.insert(top_pt(i));
                for (int i = 1; i <= 2 * t; ++i) boundary.insert(bot_pt(i));
                int n = (l - 1) + t;
                auto relabel = [&](int p) {
                    if (p == 2) return 1;
                    if (p == 1) return 2 * n + 2;
                    if (p <= 2 + 2 * (l - 1)) return p - 1;
                    return (p - 2 * s - 4) + 1 + 2 * (l - 1);
                };
                auto res = trace_strings(edges, boundary);
                Pairing pairs;
                for (auto [p, q] : res.pairs) pairs.push_back({relabel(p), relabel(q)});
                out += -PAElement::single(
                    1, n, TLDiagram(n + 1, pairs),
                    c * cT * Laurent::delta_pow(res.loops));
            }
        }
        // bottom corrections: cap the first l-1 bottom pairs
        for (int l = 1; l <= t; ++l) {
            for (auto& [cap, cT] : caps(l - 1)) {
                Pairing edges = key.d.pairs;
                int off = 2 * s + 2 * t + 4;
                for (auto& [p, q] : cap) edges.push_back({p + off, q + off});
                for (int i = 1; i <= 2 * (l - 1); ++i) edges.push_back({bot_pt(i), off + i});
                edges.push_back({LR, bot_pt(2 * l - 1)});
                edges.push_back({UR, bot_pt(2 * l)});
                std::set<int> boundary{1, 2};
                for (int i = 1; i <= 2 * s; ++i) boundary.insert(top_pt(i));
                for (int i = 2 * l + 1; i <= 2 * t; ++i) boundary.insert(bot_pt(i));
                int n = s + (t - l);
                auto relabel = [&](int p) {
                    if (p == 2) return 1;
                    if (p == 1) return 2 * n + 2;
                    if (p <= 2 + 2 * s) return p - 1;
                    return (p - 2 * s - 4 - 2 * l) + 1 + 2 * s;
                };
                auto res = trace_strings(edges, boundary);
                Pairing pairs;
                for (auto [p, q] : res.pairs) pairs.push_back({relabel(p), relabel(q)});
                out += -PAElement::single(
                    1, n, TLDiagram(n + 1, pairs),
                    c * cT * Laurent::delta_pow(res.loops));
            }
        }
    }
    return out;
}

// ∂ followed by the Jones-Wenzl idempotent on the two inner legs.
inline BoxElement partial_prime(const PAElement& x) {
    auto d = diff_quotient(x);
    BoxElement out = d;
    for (auto& [key, c] : d.terms) {
        int UR = 2 * key.s + 3, LR = 2 * key.s + 4;
        Pairing edges = key.d.pairs;
        edges.push_back({UR, LR});
        std::set<int> boundary;
        for (int p = 1; p <= 2 * key.s + 2 * key.t + 4; ++p)
            if (p != UR && p != LR) boundary.insert(p);
        auto res = trace_strings(edges, boundary);
        Pairing pairs = res.pairs;
        pairs.push_back({UR, LR});
        out.add(key.s, key.t, TLDiagram(key.d.m, pairs),
                -c * Laurent::delta_pow(res.loops - 1));
    }
    return out;
}

}  // namespace tlfree
