#pragma once

#include <functional>

#include "tlfree/law.hpp"
#include "tlfree/linalg.hpp"
#include "tlfree/tl.hpp"

namespace tlfree {

// Element of Gr_k = ⊕_n P_{n,k}.  A term (n, d) is a diagram on 2n+2k points:
// positions 1..k left side (bottom to top), k+1..k+2n top (left to right),
// k+2n+1..2n+2k right side (top to bottom); that listing is the circular
// order, with the marked corner between the left-top and the first top point.
struct PAKey {
    int n = 0;
    TLDiagram d;
    friend bool operator==(const PAKey&, const PAKey&) = default;
    friend auto operator<=>(const PAKey&, const PAKey&) = default;
};

struct PAElement {
    int k = 0;
    std::map<PAKey, Laurent> terms;

    explicit PAElement(int k_ = 0) : k(k_) {}

    static PAElement single(int k, int n, const TLDiagram& d, const Laurent& c = Laurent(1)) {
        if (d.m != n + k) throw domain_error("PAElement: diagram size mismatch");
        PAElement x(k);
        x.add(n, d, c);
        return x;
    }
    // 1_k: k parallel through strings.
    static PAElement unit(int k) {
        Pairing p;
        for (int j = 1; j <= k; ++j) p.push_back({k + 1 - j, k + j});
        return single(k, 0, TLDiagram(k, p));
    }

    void add(int n, const TLDiagram& d, const Laurent& c) {
        if (d.m != n + k) throw domain_error("PAElement: diagram size mismatch");
        PAKey key{n, d};
        auto it = terms.find(key);
        if (it == terms.end()) {
            if (!c.is_zero()) terms.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    PAElement& operator+=(const PAElement& o) {
        if (o.k != k) throw domain_error("PAElement: k mismatch");
        for (auto& [key, c] : o.terms) add(key.n, key.d, c);
        return *this;
    }
    friend PAElement operator+(PAElement a, const PAElement& b) { return a += b; }
    PAElement operator*(const Laurent& c) const {
        PAElement out(k);
        for (auto& [key, v] : terms) out.add(key.n, key.d, v * c);
        return out;
    }
    PAElement operator-() const { return *this * Laurent(-1); }
    friend PAElement operator-(PAElement a, const PAElement& b) { return a += -b; }
    friend bool operator==(const PAElement& a, const PAElement& b) {
        return a.k == b.k && a.terms == b.terms;
    }
    bool is_zero() const { return terms.empty(); }
    int max_n() const {
        int n = 0;
        for (auto& [key, c] : terms) n = std::max(n, key.n);
        return n;
    }
};

// ∪ ∈ P_{1,0} and the Λ generator of Gr₁ (left↔top1, top2↔right).
inline PAElement cup_gr0() { return PAElement::single(0, 1, TLDiagram(1, {{1, 2}})); }
inline PAElement lambda_gr1() { return PAElement::single(1, 1, TLDiagram(2, {{1, 2}, {3, 4}})); }

// Horizontal concatenation with side fusion.
inline PAElement wedge(const PAElement& x, const PAElement& y) {
    if (x.k != y.k) throw domain_error("wedge: k mismatch");
    int k = x.k;
    PAElement out(k);
    for (auto& [kx, cx] : x.terms)
        for (auto& [ky, cy] : y.terms) {
            int nx = kx.n, ny = ky.n, off = 2 * nx + 2 * k;
            Pairing edges;
            for (auto& [a, b] : kx.d.pairs) edges.push_back({a, b});
            for (auto& [a, b] : ky.d.pairs) edges.push_back({a + off, b + off});
            // x's right depth j meets y's left depth j
            for (int j = 1; j <= k; ++j) edges.push_back({k + 2 * nx + j, off + k + 1 - j});
            std::set<int> boundary;
            for (int p = 1; p <= k + 2 * nx; ++p) boundary.insert(p);
            for (int p = k + 1; p <= k + 2 * ny; ++p) boundary.insert(off + p);
            for (int j = 1; j <= k; ++j) boundary.insert(off + k + 2 * ny + j);
            auto res = trace_strings(edges, boundary);
            int n = nx + ny;
            auto relabel = [&](int p) {
                if (p <= k + 2 * nx) return p;                    // x left + x top
                if (p <= off + k) throw domain_error("wedge internal");
                if (p <= off + k + 2 * ny) return (p - off - k) + k + 2 * nx;  // y top
                return (p - off - k - 2 * ny) + k + 2 * n;        // y right
            };
            Pairing pairs;
            for (auto [a, b] : res.pairs) pairs.push_back({relabel(a), relabel(b)});
            out.add(n, TLDiagram(n + k, pairs), cx * cy * Laurent::delta_pow(res.loops));
        }
    return out;
}

inline PAElement wedge_power(const PAElement& x, int p) {
    PAElement out = PAElement::unit(x.k);
    for (int i = 0; i < p; ++i) out = wedge(out, x);
    return out;
}

// Left-right reflection; rational coefficients are self-conjugate.
inline PAElement dagger(const PAElement& x) {
    PAElement out(x.k);
    for (auto& [key, c] : x.terms) {
        int N = 2 * key.n + 2 * x.k;
        Pairing p;
        for (auto& [a, b] : key.d.pairs) p.push_back({N + 1 - a, N + 1 - b});
        out.add(key.n, TLDiagram(key.d.m, p), c);
    }
    return out;
}

// Gr_k → Gr_{k+1}: one extra horizontal through string at the bottom.
inline PAElement include_up(const PAElement& x) {
    PAElement out(x.k + 1);
    for (auto& [key, c] : x.terms) {
        Pairing p;
        for (auto& [a, b] : key.d.pairs) p.push_back({a + 1, b + 1});
        p.push_back({1, 2 * key.n + 2 * x.k + 2});
        out.add(key.n, TLDiagram(key.d.m + 1, p), c);
    }
    return out;
}

// The trace data: T_m ∈ TL(m) for m ≤ D; traciality requires each T_m to be
// invariant under rotation by two clicks.
struct TSeries {
    int D = 0;
    std::vector<TLElement> T;  // index m; T[0] unused (empty cap evaluates to 1)

    TSeries() = default;
    TSeries(int D_, std::vector<TLElement> T_) : D(D_), T(std::move(T_)) {
        if (int(T.size()) != D + 1) throw domain_error("TSeries: length mismatch");
        for (int m = 1; m <= D; ++m) {
            if (T[m].m != m) throw domain_error("TSeries: strand mismatch");
            for (auto& [d, c] : T[m].terms) {
                auto r = rotate(d, 2);
                auto it = T[m].terms.find(r);
                if (it == T[m].terms.end() || !(it->second == c))
                    throw domain_error("TSeries: T_m not rho^2 invariant");
            }
        }
    }

    const TLElement& at(int m) const {
        if (m < 1 || m > D) throw resource_limit_error("TSeries: depth exceeded");
        return T[m];
    }
};

inline TSeries build_T(const CumulantSeq& nu, int D) {
    if (D > nu.D) throw domain_error("build_T: depth exceeds cumulant data");
    std::vector<TLElement> T(D + 1);
    for (int m = 1; m <= D; ++m) {
        TLElement Tm(m);
        for (auto& pi : enumerate_nc(m)) {
            Rational kappa = 1;
            for (auto& blk : pi.blocks()) kappa *= nu.k[blk.size() - 1];
            if (kappa != 0) Tm.add(fatten(pi), Laurent(kappa));
        }
        T[m] = Tm;
    }
    return TSeries(D, std::move(T));
}

inline TSeries semicircle_T(int D) { return build_T(semicircle_law(D), D); }
inline TSeries free_poisson_T(int D) { return build_T(free_poisson_law(D), D); }

namespace detail {

// Loop count of one (n,k)-term capped on top by dT ∈ TL(n) with the sides
// closed around; the whole picture is closed.
inline int tau_loops(int n, int k, const TLDiagram& d, const TLDiagram& dT) {
    int off = 2 * n + 2 * k;
    Pairing edges;
    for (auto& [a, b] : d.pairs) edges.push_back({a, b});
    for (auto& [a, b] : dT.pairs) edges.push_back({a + off, b + off});
    for (int i = 1; i <= 2 * n; ++i) edges.push_back({k + i, off + i});
    for (int j = 1; j <= k; ++j) edges.push_back({k + 1 - j, k + 2 * n + j});
    return trace_strings(edges, {}).loops;
}

}  // namespace detail

inline Laurent tau_k(const PAElement& x, const TSeries& T) {
    Laurent out;
    for (auto& [key, c] : x.terms) {
        if (key.n == 0) {
            int loops = trace_strings(
                [&] {
                    Pairing edges = key.d.pairs;
                    for (int j = 1; j <= x.k; ++j) edges.push_back({x.k + 1 - j, x.k + j});
                    return edges;
                }(),
                {}).loops;
            out += c * Laurent::delta_pow(loops - x.k);
            continue;
        }
        for (auto& [dT, cT] : T.at(key.n).terms)
            out += c * cT * Laurent::delta_pow(detail::tau_loops(key.n, x.k, key.d, dT) - x.k);
    }
    return out;
}

// E_k: cap tops, leave the side strings open; lands in P_k (n = 0 terms).
inline PAElement cond_exp(const PAElement& x, const TSeries& T) {
    PAElement out(x.k);
    int k = x.k;
    auto close_term = [&](const PAKey& key, const TLDiagram& dT, const Laurent& w) {
        int n = key.n, off = 2 * n + 2 * k;
        Pairing edges;
        for (auto& [a, b] : key.d.pairs) edges.push_back({a, b});
        for (auto& [a, b] : dT.pairs) edges.push_back({a + off, b + off});
        for (int i = 1; i <= 2 * n; ++i) edges.push_back({k + i, off + i});
        std::set<int> boundary;
        for (int j = 1; j <= k; ++j) {
            boundary.insert(j);
            boundary.insert(k + 2 * n + j);
        }
        auto res = trace_strings(edges, boundary);
        auto relabel = [&](int p) { return p <= k ? p : p - 2 * n; };
        Pairing pairs;
        for (auto [a, b] : res.pairs) pairs.push_back({relabel(a), relabel(b)});
        out.add(0, TLDiagram(k, pairs), w * Laurent::delta_pow(res.loops));
    };
    for (auto& [key, c] : x.terms) {
        if (key.n == 0) {
            out.add(0, key.d, c);
            continue;
        }
        for (auto& [dT, cT] : T.at(key.n).terms) close_term(key, dT, c * cT);
    }
    return out;
}

// Element of ⊕_{s,t} V_k(s,t).  A term (s,t,d) is a diagram on 2s+2t+4k
// points: positions 1..2k left (bottom to top), 2k+1..2k+2s top (left to
// right), 2k+2s+1..4k+2s right (top to bottom), 4k+2s+1..4k+2s+2t bottom
// (right to left); the listing is the circular order.
struct BoxKey {
    int s = 0, t = 0;
    TLDiagram d;
    friend bool operator==(const BoxKey&, const BoxKey&) = default;
    friend auto operator<=>(const BoxKey&, const BoxKey&) = default;
};

struct BoxElement {
    int k = 0;
    std::map<BoxKey, Laurent> terms;

    explicit BoxElement(int k_ = 0) : k(k_) {}

    void add(int s, int t, const TLDiagram& d, const Laurent& c) {
        if (2 * d.m != 2 * s + 2 * t + 4 * k) throw domain_error("BoxElement: size mismatch");
        BoxKey key{s, t, d};
        auto it = terms.find(key);
        if (it == terms.end()) {
            if (!c.is_zero()) terms.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    BoxElement& operator+=(const BoxElement& o) {
        if (o.k != k) throw domain_error("BoxElement: k mismatch");
        for (auto& [key, c] : o.terms) add(key.s, key.t, key.d, c);
        return *this;
    }
    friend BoxElement operator+(BoxElement a, const BoxElement& b) { return a += b; }
    BoxElement operator*(const Laurent& c) const {
        BoxElement out(k);
        for (auto& [key, v] : terms) out.add(key.s, key.t, key.d, v * c);
        return out;
    }
    BoxElement operator-() const { return *this * Laurent(-1); }
    friend BoxElement operator-(BoxElement a, const BoxElement& b) { return a += -b; }
    friend bool operator==(const BoxElement& a, const BoxElement& b) {
        return a.k == b.k && a.terms == b.terms;
    }
    bool is_zero() const { return terms.empty(); }
};

// x ⊗ y^op ∈ ⊕ V_k(s,t): x on top, y rotated by a half turn below.
inline BoxElement tensor_embed(const PAElement& x, const PAElement& y) {
    if (x.k != y.k) throw domain_error("tensor_embed: k mismatch");
    int k = x.k;
    BoxElement out(k);
    for (auto& [kx, cx] : x.terms)
        for (auto& [ky, cy] : y.terms) {
            int s = kx.n, t = ky.n;
            // composite position of x's point p
            auto from_x = [&](int p) {
                if (p <= k) return k + p;             // x left (bottom→top keeps order above y's)
                if (p <= k + 2 * s) return 2 * k + (p - k);  // top
                return 2 * k + 2 * s + (p - k - 2 * s);      // right, depth preserved
            };
            auto from_y = [&](int p) {
                if (p <= k) return 3 * k + 2 * s + p;  // y left → lower right
                if (p <= k + 2 * t) return 4 * k + 2 * s + (p - k);  // y top → bottom (R→L)
                return p - k - 2 * t;                                 // y right → lower left
            };
            Pairing pairs;
            for (auto& [a, b] : kx.d.pairs) pairs.push_back({from_x(a), from_x(b)});
            for (auto& [a, b] : ky.d.pairs) pairs.push_back({from_y(a), from_y(b)});
            out.add(s, t, TLDiagram(s + t + 2 * k, pairs), cx * cy);
        }
    return out;
}

inline BoxElement box_unit(int k) { return tensor_embed(PAElement::unit(k), PAElement::unit(k)); }

inline BoxElement box_dagger(const BoxElement& q) {
    BoxElement out(q.k);
    int k = q.k;
    for (auto& [key, c] : q.terms) {
        int s = key.s, t = key.t;
        auto reflect = [&](int p) {
            if (p <= 2 * k) return 2 * k + 2 * s + (2 * k + 1 - p);      // left → right
            if (p <= 2 * k + 2 * s) return 2 * k + (2 * s + 1 - (p - 2 * k));  // top reversed
            if (p <= 4 * k + 2 * s) return 2 * k + 1 - (p - 2 * k - 2 * s);    // right → left
            return 4 * k + 2 * s + (2 * t + 1 - (p - 4 * k - 2 * s));    // bottom reversed
        };
        Pairing pairs;
        for (auto& [a, b] : key.d.pairs) pairs.push_back({reflect(a), reflect(b)});
        out.add(s, t, TLDiagram(key.d.m, pairs), c);
    }
    return out;
}

// Product in ⊕ V_k(s,t): side-by-side with the 2k-string side fusion.
inline BoxElement box_wedge(const BoxElement& P, const BoxElement& Q) {
    if (P.k != Q.k) throw domain_error("box_wedge: k mismatch");
    int k = P.k;
    BoxElement out(k);
    for (auto& [kp, cp] : P.terms)
        for (auto& [kq, cq] : Q.terms) {
            int sP = kp.s, tP = kp.t, sQ = kq.s, tQ = kq.t;
            int offQ = 2 * sP + 2 * tP + 4 * k;
            int S = sP + sQ, Tt = tP + tQ;
            Pairing edges;
            for (auto& [a, b] : kp.d.pairs) edges.push_back({a, b});
            for (auto& [a, b] : kq.d.pairs) edges.push_back({a + offQ, b + offQ});
            for (int j = 1; j <= 2 * k; ++j)
                edges.push_back({2 * k + 2 * sP + j, offQ + 2 * k + 1 - j});
            std::set<int> boundary;
            for (int p = 1; p <= 2 * k + 2 * sP; ++p) boundary.insert(p);
            for (int p = 4 * k + 2 * sP + 1; p <= 4 * k + 2 * sP + 2 * tP; ++p)
                boundary.insert(p);
            for (int p = 2 * k + 1; p <= 2 * k + 2 * sQ; ++p) boundary.insert(offQ + p);
            for (int p = 2 * k + 2 * sQ + 1; p <= 4 * k + 2 * sQ + 2 * tQ; ++p)
                boundary.insert(offQ + p);
            auto relabel = [&](int p) {
                if (p > offQ) {
                    int q = p - offQ;
                    if (q <= 2 * k + 2 * sQ) return 2 * k + 2 * sP + (q - 2 * k);  // Q top
                    if (q <= 4 * k + 2 * sQ) return 2 * k + 2 * S + (q - 2 * k - 2 * sQ);  // Q right
                    return 4 * k + 2 * S + (q - 4 * k - 2 * sQ);  // Q bottom, R→L first
                }
                if (p <= 2 * k + 2 * sP) return p;  // P left + top
                return 4 * k + 2 * S + 2 * tQ + (p - 4 * k - 2 * sP);  // P bottom after Q's
            };
            auto res = trace_strings(edges, boundary);
            Pairing pairs;
            for (auto [a, b] : res.pairs) pairs.push_back({relabel(a), relabel(b)});
            out.add(S, Tt, TLDiagram(S + Tt + 2 * k, pairs),
                    cp * cq * Laurent::delta_pow(res.loops));
        }
    return out;
}

inline Laurent tau_box(const BoxElement& q, const TSeries& T) {
    Laurent out;
    int k = q.k;
    auto caps = [&](int m) {
        std::vector<std::pair<TLDiagram, Laurent>> v;
        if (m == 0) {
            v.push_back({TLDiagram(0, {}), Laurent(1)});
        } else {
            for (auto& [d, c] : T.at(m).terms) v.push_back({d, c});
        }
        return v;
    };
    for (auto& [key, c] : q.terms) {
        int s = key.s, t = key.t, N = 2 * s + 2 * t + 4 * k;
        for (auto& [ds, cs] : caps(s))
            for (auto& [dt, ct] : caps(t)) {
                Pairing edges;
                for (auto& [a, b] : key.d.pairs) edges.push_back({a, b});
                int offS = N, offT = N + 2 * s;
                for (auto& [a, b] : ds.pairs) edges.push_back({a + offS, b + offS});
                for (auto& [a, b] : dt.pairs) edges.push_back({a + offT, b + offT});
                for (int i = 1; i <= 2 * s; ++i) edges.push_back({2 * k + i, offS + i});
                // bottom cap: T_t's point i meets the i-th bottom point left→right
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

// Insert `inner` (on 2s points) into `outer` after outer's point 2l.
inline TLElement splice(const TLElement& outer, const TLElement& inner, int l) {
    int s = inner.m;
    TLElement out(outer.m + s);
    for (auto& [dout, cout] : outer.terms)
        for (auto& [din, cin] : inner.terms) {
            Pairing p;
            for (auto& [a, b] : dout.pairs)
                p.push_back({a <= 2 * l ? a : a + 2 * s, b <= 2 * l ? b : b + 2 * s});
            for (auto& [a, b] : din.pairs) p.push_back({a + 2 * l, b + 2 * l});
            out.add(TLDiagram(outer.m + s, p), cout * cin);
        }
    return out;
}

// Assemble the partition-indexed product element by recursively inserting the
// single-block element of an interval block.
inline TLElement assemble_partition(const NCPartition& pi,
                                    const std::function<TLElement(int)>& single_block) {
    if (pi.n() == 0) return TLElement(TLDiagram(0, {}), Laurent(1));
    // find an interval block {l+1..l+s}
    for (auto& blk : pi.blocks()) {
        bool interval = true;
        for (size_t i = 1; i < blk.size(); ++i)
            if (blk[i] != blk[i - 1] + 1) interval = false;
        if (!interval) continue;
        int l = blk[0] - 1, s = int(blk.size());
        // remove the block, relabel the rest
        std::vector<std::vector<int>> rest;
        for (auto& b : pi.blocks()) {
            if (&b == &blk) continue;
            std::vector<int> nb;
            for (int e : b) nb.push_back(e > l ? e - s : e);
            rest.push_back(nb);
        }
        auto outer = assemble_partition(NCPartition(pi.n() - s, rest), single_block);
        return splice(outer, single_block(s), l);
    }
    throw domain_error("assemble_partition: no interval block (impossible for NC)");
}

inline TLElement pa_cumulants(const TSeries& T, int m) {
    if (m < 1 || m > T.D) throw resource_limit_error("pa_cumulants: depth exceeded");
    auto one = NCPartition::one_block(m);
    TLElement out(m);
    for (auto& sigma : enumerate_nc(m)) {
        Int mu = mobius_nc(sigma, one);
        if (mu == 0) continue;
        auto Ts = assemble_partition(sigma, [&](int j) { return T.at(j); });
        out += Ts * Laurent(Rational(mu));
    }
    return out;
}

// ev_Y(a): substitute Y ∈ Gr₁ into every top string pair of a ∈ Gr₀.
inline Laurent eval_distribution(const PAElement& Y, const PAElement& a, const TSeries& T) {
    if (Y.k != 1 || a.k != 0) throw domain_error("eval_distribution: expects Y in Gr1, a in Gr0");
    Laurent out;
    std::vector<std::pair<PAKey, Laurent>> yterms(Y.terms.begin(), Y.terms.end());
    for (auto& [ka, ca] : a.terms) {
        int n = ka.n;
        if (n == 0) {
            out += ca;  // tau_0 of the empty diagram
            continue;
        }
        // assign a Y-term to each of the n slots
        std::vector<int> choice(n, 0);
        while (true) {
            // build the substituted Gr0 element for this assignment
            Pairing edges;
            for (auto& [p, q] : ka.d.pairs) edges.push_back({p, q});
            int off = 2 * n;
            std::vector<int> tops;  // composite top labels, in order
            Laurent coeff = ca;
            bool dead = false;
            for (int i = 0; i < n && !dead; ++i) {
                if (yterms.empty()) {
                    dead = true;
                    break;
                }
                auto& [ky, cy] = yterms[choice[i]];
                int ni = ky.n;
                coeff *= cy;
                // Y_i occupies labels off+1 .. off+2ni+2
                for (auto& [p, q] : ky.d.pairs) edges.push_back({p + off, q + off});
                edges.push_back({2 * i + 1, off + 1});            // a's 2i+1 ↔ Y left
                edges.push_back({2 * i + 2, off + 2 * ni + 2});   // a's 2i+2 ↔ Y right
                for (int j = 1; j <= 2 * ni; ++j) tops.push_back(off + 1 + j);
                off += 2 * ni + 2;
            }
            if (dead) break;
            std::set<int> boundary(tops.begin(), tops.end());
            auto res = trace_strings(edges, boundary);
            std::map<int, int> pos;
            for (size_t i = 0; i < tops.size(); ++i) pos[tops[i]] = int(i) + 1;
            Pairing pairs;
            for (auto [p, q] : res.pairs) pairs.push_back({pos[p], pos[q]});
            int nn = int(tops.size()) / 2;
            PAElement sub = PAElement::single(0, nn, TLDiagram(nn, pairs),
                                              coeff * Laurent::delta_pow(res.loops));
            out += tau_k(sub, T);
            // next assignment
            int i = 0;
            while (i < n && ++choice[i] == int(yterms.size())) choice[i++] = 0;
            if (i == n) break;
        }
    }
    return out;
}

inline std::pair<Matrix<Rational>, bool> gram_psd(const std::vector<PAElement>& basis,
                                                  const TSeries& T,
                                                  const Rational& delta_value) {
    if (delta_value <= 0) throw domain_error("gram_psd: delta must be positive");
    size_t n = basis.size();
    Matrix<Rational> G(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            G[i][j] = tau_k(wedge(basis[i], dagger(basis[j])), T).eval(delta_value);
    return {G, psd_rational(G)};
}

}  // namespace tlfree
