#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "tlfree/rational.hpp"

namespace tlfree {

// Bipartite graph with Perron-Frobenius data: mu is a positive eigenvector of
// the adjacency matrix with eigenvalue delta.
struct BipartiteGraph {
    std::vector<std::string> plus_vertices;
    std::vector<std::string> minus_vertices;
    std::vector<std::pair<std::string, std::string>> edges;  // (v+, v-)
    std::map<std::string, double> mu;
    double delta = 0;

    BipartiteGraph() = default;
    BipartiteGraph(std::vector<std::string> plus, std::vector<std::string> minus,
                   std::vector<std::pair<std::string, std::string>> edges_,
                   std::map<std::string, double> mu_, double delta_)
        : plus_vertices(std::move(plus)),
          minus_vertices(std::move(minus)),
          edges(std::move(edges_)),
          mu(std::move(mu_)),
          delta(delta_) {
        if (delta <= 0) throw domain_error("BipartiteGraph: delta must be positive");
        auto is_plus = [&](const std::string& v) {
            return std::find(plus_vertices.begin(), plus_vertices.end(), v) != plus_vertices.end();
        };
        auto is_minus = [&](const std::string& v) {
            return std::find(minus_vertices.begin(), minus_vertices.end(), v) !=
                   minus_vertices.end();
        };
        for (auto& v : plus_vertices)
            if (is_minus(v)) throw domain_error("BipartiteGraph: vertex on both sides");
        auto all = plus_vertices;
        all.insert(all.end(), minus_vertices.begin(), minus_vertices.end());
        for (auto& v : all) {
            auto it = mu.find(v);
            if (it == mu.end() || it->second <= 0)
                throw domain_error("BipartiteGraph: mu must be positive on every vertex");
        }
        for (auto& [a, b] : edges)
            if (!is_plus(a) || !is_minus(b)) throw domain_error("BipartiteGraph: edge not v+ to v-");
        // connectivity
        std::map<std::string, int> id;
        for (size_t i = 0; i < all.size(); ++i) id[all[i]] = int(i);
        std::vector<int> par(all.size());
        std::iota(par.begin(), par.end(), 0);
        std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
        for (auto& [a, b] : edges) par[find(id[a])] = find(id[b]);
        for (auto& v : all)
            if (find(id[v]) != find(0)) throw domain_error("BipartiteGraph: not connected");
        // eigen-relation sum_{w ~ v} mu_w == delta * mu_v
        for (auto& v : all) {
            double s = 0;
            for (auto& [a, b] : edges) {
                if (a == v) s += mu.at(b);
                if (b == v) s += mu.at(a);
            }
            if (std::abs(s - delta * mu.at(v)) > 1e-10)
                throw domain_error("BipartiteGraph: mu is not a delta-eigenvector");
        }
    }

    const std::string& source(int e) const { return edges.at(e).first; }
    const std::string& target(int e) const { return edges.at(e).second; }
};

// Word in the generators X_{e,f°} (e, f edges with a common target), closed
// into a loop at the base vertex.
struct LoopWord {
    std::vector<std::pair<int, int>> letters;  // (e, f) edge indices
    std::string base;

    LoopWord() = default;
    LoopWord(const BipartiteGraph& G, std::vector<std::pair<int, int>> letters_)
        : letters(std::move(letters_)) {
        for (auto& [e, f] : letters) {
            if (e < 0 || f < 0 || e >= int(G.edges.size()) || f >= int(G.edges.size()))
                throw domain_error("LoopWord: edge index out of range");
            if (G.target(e) != G.target(f)) throw domain_error("LoopWord: letter targets differ");
        }
        for (size_t i = 0; i + 1 < letters.size(); ++i)
            if (G.source(letters[i].second) != G.source(letters[i + 1].first))
                throw domain_error("LoopWord: consecutive sources incompatible");
        if (!letters.empty()) {
            if (G.source(letters.front().first) != G.source(letters.back().second))
                throw domain_error("LoopWord: word is not closed");
            base = G.source(letters.front().first);
        }
    }
};

struct MCConfig {
    int target_dim = 0;
    int samples = 0;
    std::uint64_t seed = 0;
};

// E[X_{e1,f1°} X_{f2,e2°}] = [ (e1,f1)==(e2,f2) ] · mu_{s(f1)} p_{s(e1)}: the
// operator-valued Wick rule, recursively; only non-crossing pairings survive.
inline double wick_expectation(const LoopWord& w, const BipartiteGraph& G) {
    // returns the coefficient of p at the subword's starting vertex
    std::function<double(int, int)> ev = [&](int l, int r) -> double {
        if (l > r) return 1.0;
        if ((r - l) % 2 == 0) return 0.0;
        auto [e1, f1] = w.letters[l];
        double out = 0;
        for (int j = l + 1; j <= r; j += 2) {
            auto [e2, f2] = w.letters[j];
            if (e2 != f1 || f2 != e1) continue;
            double inner = ev(l + 1, j - 1);
            if (inner == 0) continue;
            double outer = ev(j + 1, r);
            if (outer == 0) continue;
            out += inner * G.mu.at(G.source(f1)) * outer;
        }
        return out;
    };
    if (w.letters.empty()) return 1.0;
    return ev(0, int(w.letters.size()) - 1);
}

// Raw Wick value together with the value of the mu^{-1/4}-rescaled loop basis
// element the word corresponds to.
inline std::pair<double, double> loop_vs_diagram(const LoopWord& w, const BipartiteGraph& G) {
    double raw = wick_expectation(w, G);
    double scale = 1;
    for (auto& [e, f] : w.letters)
        scale *= std::pow(G.mu.at(G.source(e)) * G.mu.at(G.source(f)), -0.25);
    return {raw, raw * scale};
}

inline std::map<std::string, int> block_dims(const BipartiteGraph& G, int N) {
    double mumax = 0;
    for (auto& [v, m] : G.mu) mumax = std::max(mumax, m);
    std::map<std::string, int> d;
    for (auto& [v, m] : G.mu) d[v] = std::max(1, int(std::lround(N * m / mumax)));
    return d;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct GaussianSource {
    std::uint64_t state;
    explicit GaussianSource(std::uint64_t seed) : state(seed) {}
    double uniform() {  // in (0,1]
        state = splitmix64(state);
        return (double(state >> 11) + 1.0) * 0x1p-53;
    }
    // hand-rolled Box-Muller keeps the stream platform-independent
    std::pair<double, double> normal_pair() {
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
    }
};

using CMatrix = std::vector<std::vector<std::complex<double>>>;

inline CMatrix cmul(const CMatrix& A, const CMatrix& B) {
    size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    CMatrix C(n, std::vector<std::complex<double>>(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            auto a = A[i][l];
            if (a == std::complex<double>(0)) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += a * B[l][j];
        }
    return C;
}

inline CMatrix cadj(const CMatrix& A) {
    size_t n = A.size(), m = A.empty() ? 0 : A[0].size();
    CMatrix C(m, std::vector<std::complex<double>>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) C[j][i] = std::conj(A[i][j]);
    return C;
}

}  // namespace detail

// Finite-N block random matrix realization: one complex Gaussian block per
// generator pair, entry variance 1/(Σ_v d_v), with a symmetric mu-correction
// absorbing the block-rounding so the covariance matches the Wick rule.
inline std::pair<double, double> mc_estimate(const LoopWord& w, const BipartiteGraph& G,
                                             const MCConfig& cfg) {
    if (cfg.target_dim <= 0 || cfg.samples <= 0) throw domain_error("mc_estimate: bad config");
    auto d = block_dims(G, cfg.target_dim);
    double D = 0;
    for (auto& [v, dim] : d) D += dim;
    // distinct generator blocks, keyed by the ordered pair with e <= f
    std::vector<std::pair<int, int>> gens;
    for (auto& [e, f] : w.letters) {
        auto key = std::minmax(e, f);
        if (std::find(gens.begin(), gens.end(), std::pair<int, int>(key)) == gens.end())
            gens.push_back(key);
    }
    double mean = 0, sq = 0;
    int db = d.at(w.base);
    for (int s = 0; s < cfg.samples; ++s) {
        detail::GaussianSource rng(detail::splitmix64(cfg.seed) ^ detail::splitmix64(s + 1));
        std::map<std::pair<int, int>, detail::CMatrix> M;
        for (auto& [e, f] : gens) {
            int rows = d.at(G.source(e)), cols = d.at(G.source(f));
            detail::CMatrix A(rows, std::vector<std::complex<double>>(cols));
            if (e == f) {  // self-adjoint generator: GUE block
                for (int i = 0; i < rows; ++i)
                    for (int j = i; j < cols; ++j) {
                        auto [g1, g2] = rng.normal_pair();
                        if (i == j) {
                            A[i][j] = g1 / std::sqrt(D);
                        } else {
                            std::complex<double> z(g1, g2);
                            A[i][j] = z / std::sqrt(2 * D);
                            A[j][i] = std::conj(A[i][j]);
                        }
                    }
            } else {
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < cols; ++j) {
                        auto [g1, g2] = rng.normal_pair();
                        A[i][j] = std::complex<double>(g1, g2) / std::sqrt(2 * D);
                    }
            }
            double se = G.mu.at(G.source(e)) / d.at(G.source(e));
            double sf = G.mu.at(G.source(f)) / d.at(G.source(f));
            double scale = std::pow(se * sf * D * D, 0.25);
            for (auto& row : A)
                for (auto& z : row) z *= scale;
            M.emplace(std::pair<int, int>(e, f), std::move(A));
        }
        auto block = [&](int e, int f) {
            if (e <= f) return M.at({e, f});
            return detail::cadj(M.at({f, e}));
        };
        detail::CMatrix P = block(w.letters[0].first, w.letters[0].second);
        for (size_t i = 1; i < w.letters.size(); ++i)
            P = detail::cmul(P, block(w.letters[i].first, w.letters[i].second));
        double tr = 0;
        for (int i = 0; i < db; ++i) tr += P[i][i].real();
        double val = tr / db;
        mean += val;
        sq += val * val;
    }
    mean /= cfg.samples;
    double var = std::max(0.0, sq / cfg.samples - mean * mean);
    double stderr_ = cfg.samples > 1 ? std::sqrt(var / (cfg.samples - 1)) : 0;
    return {mean, stderr_};
}

// Interpolated free group factor parameter t_k = 1 + delta^{-2k} I (delta^2-1).
inline double lf_parameter(double delta, double global_index, int k) {
    if (delta <= 1 || global_index <= 0) throw domain_error("lf_parameter: needs delta>1, I>0");
    return 1 + std::pow(delta, -2 * k) * global_index * (delta * delta - 1);
}

}  // namespace tlfree
