#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "tlfree/laurent.hpp"
#include "tlfree/nc.hpp"

namespace tlfree {

using Pairing = std::vector<std::pair<int, int>>;

inline Pairing canonical_pairs(Pairing p) {
    for (auto& [a, b] : p)
        if (a > b) std::swap(a, b);
    std::sort(p.begin(), p.end());
    return p;
}

// Strings over arbitrary integer node labels.  Boundary nodes must have
// degree 1, interior nodes degree 2.  Paths between boundary nodes become the
// induced pairing; every closed cycle is one loop.
struct ClosureResult {
    Pairing pairs;
    int loops = 0;
};

inline ClosureResult trace_strings(const Pairing& edges, const std::set<int>& boundary) {
    std::map<int, std::vector<int>> adj;  // node -> incident edge ids
    for (size_t i = 0; i < edges.size(); ++i) {
        adj[edges[i].first].push_back(int(i));
        adj[edges[i].second].push_back(int(i));
    }
    for (auto& [node, inc] : adj) {
        size_t want = boundary.count(node) ? 1 : 2;
        if (inc.size() != want) throw domain_error("trace_strings: bad node degree");
    }
    for (int b : boundary)
        if (!adj.count(b)) throw domain_error("trace_strings: boundary node has no string");
    std::vector<char> used(edges.size(), 0);
    ClosureResult res;
    auto walk = [&](int start, int first_edge) {
        int node = start, eid = first_edge;
        while (true) {
            used[eid] = 1;
            int next = edges[eid].first == node ? edges[eid].second : edges[eid].first;
            if (boundary.count(next) || next == start) return next;
            auto& inc = adj[next];
            eid = (inc[0] == eid) ? inc[1] : inc[0];
            node = next;
        }
    };
    for (int b : boundary) {
        int eid = adj[b][0];
        if (used[eid]) continue;
        res.pairs.push_back({b, walk(b, eid)});
    }
    res.pairs = canonical_pairs(res.pairs);
    for (size_t i = 0; i < edges.size(); ++i) {
        if (used[i]) continue;
        // close the cycle through interior nodes
        int start = edges[i].first;
        walk(start, int(i));
        ++res.loops;
    }
    return res;
}

// Loop count of the union of two perfect matchings on the same point set.
inline int close_pair(const Pairing& d1, const Pairing& d2) {
    auto points = [](const Pairing& d) {
        std::set<int> s;
        for (auto& [a, b] : d) {
            if (!s.insert(a).second || !s.insert(b).second)
                throw domain_error("close_pair: not a matching");
        }
        return s;
    };
    if (points(d1) != points(d2)) throw domain_error("close_pair: point sets differ");
    Pairing edges = d1;
    edges.insert(edges.end(), d2.begin(), d2.end());
    return trace_strings(edges, {}).loops;
}

// Non-crossing perfect matching of {1..2m} on the disc; marked point sits
// between 2m and 1.  Pairs join points of opposite parity.
struct TLDiagram {
    int m = 0;
    Pairing pairs;

    TLDiagram() = default;
    TLDiagram(int m_, Pairing p) : m(m_), pairs(canonical_pairs(std::move(p))) { validate(); }

    static TLDiagram identity(int m) {
        Pairing p;
        for (int i = 1; i <= m; ++i) p.push_back({i, 2 * m + 1 - i});
        return TLDiagram(m, p);
    }

    friend bool operator==(const TLDiagram& a, const TLDiagram& b) = default;
    friend auto operator<=>(const TLDiagram& a, const TLDiagram& b) = default;

  private:
    void validate() const {
        std::vector<int> seen(2 * m + 1, 0);
        if (int(pairs.size()) != m) throw domain_error("TLDiagram: wrong pair count");
        for (auto& [a, b] : pairs) {
            if (a < 1 || b < 1 || a > 2 * m || b > 2 * m)
                throw domain_error("TLDiagram: point out of range");
            if (seen[a]++ || seen[b]++) throw domain_error("TLDiagram: repeated point");
            if ((a + b) % 2 == 0) throw domain_error("TLDiagram: pair joins equal parity");
        }
        for (auto& [a, b] : pairs)
            for (auto& [c, d] : pairs)
                if (a < c && c < b && b < d) throw domain_error("TLDiagram: crossing pairs");
    }
};

// One click of (counter-clockwise) rotation moves the marked point past one
// boundary point: labels shift down by one.
inline TLDiagram rotate(const TLDiagram& d, int clicks) {
    int n = 2 * d.m;
    auto shift = [&](int p) { return (p - 1 - clicks % n + n) % n + 1; };
    Pairing out;
    for (auto& [a, b] : d.pairs) out.push_back({shift(a), shift(b)});
    return TLDiagram(d.m, out);
}

inline TLDiagram fatten(const NCPartition& pi) {
    Pairing out;
    for (auto& blk : pi.blocks()) {
        int s = int(blk.size());
        out.push_back({2 * blk[0] - 1, 2 * blk[s - 1]});
        for (int i = 0; i + 1 < s; ++i) out.push_back({2 * blk[i], 2 * blk[i + 1] - 1});
    }
    return TLDiagram(pi.n(), out);
}

inline TLDiagram cable2(const TLDiagram& d) {
    Pairing out;
    for (auto& [i, j] : d.pairs) {
        out.push_back({2 * i - 1, 2 * j});
        out.push_back({2 * i, 2 * j - 1});
    }
    return TLDiagram(2 * d.m, out);
}

// Linear combination of TL(m) diagrams over a ring scalar.
template <class Coeff>
struct TLElementT {
    int m = 0;
    std::map<TLDiagram, Coeff> terms;

    TLElementT() = default;
    explicit TLElementT(int m_) : m(m_) {}
    TLElementT(const TLDiagram& d, const Coeff& c = Coeff(1)) : m(d.m) { add(d, c); }

    void add(const TLDiagram& d, const Coeff& c) {
        if (d.m != m) throw domain_error("TLElement: strand mismatch");
        auto it = terms.find(d);
        if (it == terms.end()) {
            if (!(c == Coeff())) terms.emplace(d, c);
        } else {
            it->second = it->second + c;
            if (it->second == Coeff()) terms.erase(it);
        }
    }
    TLElementT& operator+=(const TLElementT& o) {
        if (o.m != m) throw domain_error("TLElement: strand mismatch");
        for (auto& [d, c] : o.terms) add(d, c);
        return *this;
    }
    TLElementT operator*(const Coeff& c) const {
        TLElementT out(m);
        for (auto& [d, v] : terms) out.add(d, v * c);
        return out;
    }
    TLElementT operator-() const { return *this * Coeff(-1); }
    friend bool operator==(const TLElementT& a, const TLElementT& b) {
        return a.m == b.m && a.terms == b.terms;
    }
    bool is_zero() const { return terms.empty(); }
};

using TLElement = TLElementT<Laurent>;
using TLElementRF = TLElementT<RationalFunction>;

// Algebra convention inside TL_m: points 1..m on top (left to right), points
// m+1..2m on the bottom (right to left, continuing around the disc).  The
// bottom point at horizontal position i is 2m+1-i.

// Stack a over b: fuse a's bottom with b's top position-wise.
template <class Coeff>
TLElementT<Coeff> compose(const TLElementT<Coeff>& a, const TLElementT<Coeff>& b) {
    if (a.m != b.m) throw domain_error("compose: strand mismatch");
    int m = a.m;
    TLElementT<Coeff> out(m);
    // labels: a's points 1..2m; b's points offset by 2m
    for (auto& [da, ca] : a.terms)
        for (auto& [db, cb] : b.terms) {
            Pairing edges;
            for (auto& [x, y] : da.pairs) edges.push_back({x, y});
            for (auto& [x, y] : db.pairs) edges.push_back({x + 2 * m, y + 2 * m});
            for (int i = 1; i <= m; ++i) edges.push_back({2 * m + 1 - i, i + 2 * m});
            std::set<int> boundary;
            for (int i = 1; i <= m; ++i) {
                boundary.insert(i);                  // a's top
                boundary.insert(2 * m + 2 * m + 1 - i);  // b's bottom
            }
            auto res = trace_strings(edges, boundary);
            Pairing relabeled;
            for (auto [x, y] : res.pairs) {
                auto fix = [&](int p) { return p <= 2 * m ? p : p - 2 * m; };
                relabeled.push_back({fix(x), fix(y)});
            }
            Coeff weight = ca * cb;
            for (int l = 0; l < res.loops; ++l) weight = weight * Coeff(Laurent::delta_pow(1));
            out.add(TLDiagram(m, relabeled), weight);
        }
    return out;
}

// Cap generator E_i in TL_m: cups (i,i+1) on top and bottom, rest through.
inline TLDiagram cap_generator(int m, int i) {
    if (i < 1 || i >= m) throw domain_error("cap_generator: index out of range");
    Pairing p;
    p.push_back({i, i + 1});
    p.push_back({2 * m - i, 2 * m + 1 - i});
    for (int j = 1; j <= m; ++j)
        if (j != i && j != i + 1) p.push_back({j, 2 * m + 1 - j});
    return TLDiagram(m, p);
}

// x ⊗ 1: add one through strand on the right.
template <class Coeff>
TLElementT<Coeff> tensor_id(const TLElementT<Coeff>& a) {
    int m = a.m;
    TLElementT<Coeff> out(m + 1);
    for (auto& [d, c] : a.terms) {
        auto fix = [&](int p) { return p <= m ? p : p + 2; };
        Pairing q;
        for (auto& [x, y] : d.pairs) q.push_back({fix(x), fix(y)});
        q.push_back({m + 1, m + 2});
        out.add(TLDiagram(m + 1, q), c);
    }
    return out;
}

// All TL(m) diagrams (non-crossing matchings of 2m points), sorted.
inline std::vector<TLDiagram> enumerate_tl(int m) {
    std::vector<TLDiagram> out;
    // Recursion over a worklist of point segments still to be matched.
    std::function<void(std::vector<std::vector<int>>, Pairing&)> fill =
        [&](std::vector<std::vector<int>> segs, Pairing& cur) {
            while (!segs.empty() && segs.back().empty()) segs.pop_back();
            if (segs.empty()) {
                out.emplace_back(m, cur);
                return;
            }
            auto pts = segs.back();
            segs.pop_back();
            for (size_t j = 1; j < pts.size(); j += 2) {
                cur.push_back({pts[0], pts[j]});
                auto next = segs;
                next.push_back(std::vector<int>(pts.begin() + j + 1, pts.end()));
                next.push_back(std::vector<int>(pts.begin() + 1, pts.begin() + j));
                fill(next, cur);
                cur.pop_back();
            }
        };
    std::vector<int> all;
    for (int i = 1; i <= 2 * m; ++i) all.push_back(i);
    Pairing cur;
    fill({all}, cur);
    std::sort(out.begin(), out.end());
    return out;
}

inline Laurent quantum_integer(int n) {
    // [1]=1, [2]=δ, [n+1] = δ[n] − [n−1]
    Laurent prev = Laurent(Rational(0)), cur = Laurent(Rational(1));
    for (int i = 1; i < n; ++i) {
        Laurent next = Laurent::delta_pow(1) * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline constexpr int kJonesWenzlCap = 6;

inline TLElementRF jones_wenzl(int n, int cap = kJonesWenzlCap) {
    if (n < 1) throw domain_error("jones_wenzl: n must be positive");
    if (n > cap) throw resource_limit_error("jones_wenzl: n exceeds cap");
    TLElementRF jw(TLDiagram::identity(1), RationalFunction(1));
    for (int k = 1; k < n; ++k) {
        auto ext = tensor_id(jw);  // JW_k ⊗ 1 in TL_{k+1}
        RationalFunction ratio(quantum_integer(k), quantum_integer(k + 1));
        TLElementRF ek(cap_generator(k + 1, k), RationalFunction(1));
        auto corr = compose(compose(ext, ek), ext) * (-ratio);
        ext += corr;
        jw = ext;
    }
    return jw;
}

}  // namespace tlfree
