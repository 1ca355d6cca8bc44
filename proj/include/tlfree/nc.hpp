#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "tlfree/rational.hpp"

namespace tlfree {

// Partition of {1..n} into blocks; canonical form sorts elements within a
// block and blocks by their minima. Non-crossing is validated on demand.
class NCPartition {
  public:
    NCPartition() : n_(0) {}
    NCPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
        canonicalize();
        validate();
    }

    static NCPartition singletons(int n) {
        std::vector<std::vector<int>> b;
        for (int i = 1; i <= n; ++i) b.push_back({i});
        return NCPartition(n, std::move(b));
    }
    static NCPartition one_block(int n) {
        std::vector<int> b(n);
        std::iota(b.begin(), b.end(), 1);
        return NCPartition(n, {b});
    }

    int n() const { return n_; }
    int num_blocks() const { return int(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    int block_index(int element) const {
        for (size_t i = 0; i < blocks_.size(); ++i)
            for (int e : blocks_[i])
                if (e == element) return int(i);
        throw domain_error("element out of range");
    }

    friend bool operator==(const NCPartition& a, const NCPartition& b) {
        return a.n_ == b.n_ && a.blocks_ == b.blocks_;
    }
    friend auto operator<=>(const NCPartition& a, const NCPartition& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.blocks_ <=> b.blocks_;
    }

    // sigma <= pi: every block of sigma is contained in a block of pi.
    bool refines(const NCPartition& pi) const {
        if (n_ != pi.n_) throw domain_error("refines: size mismatch");
        std::vector<int> owner(n_ + 1);
        for (size_t i = 0; i < pi.blocks_.size(); ++i)
            for (int e : pi.blocks_[i]) owner[e] = int(i);
        for (auto& b : blocks_)
            for (int e : b)
                if (owner[e] != owner[b[0]]) return false;
        return true;
    }

  private:
    void canonicalize() {
        for (auto& b : blocks_) std::sort(b.begin(), b.end());
        std::sort(blocks_.begin(), blocks_.end());
    }
    void validate() const {
        std::vector<int> seen(n_ + 1, 0);
        for (auto& b : blocks_) {
            if (b.empty()) throw domain_error("empty block");
            for (int e : b) {
                if (e < 1 || e > n_ || seen[e]) throw domain_error("not a partition of 1..n");
                seen[e] = 1;
            }
        }
        for (int i = 1; i <= n_; ++i)
            if (!seen[i]) throw domain_error("missing element");
        if (crossing()) throw domain_error("partition is crossing");
    }
    bool crossing() const {
        // Stack scan: a continuing block must always be the innermost open one.
        std::vector<int> owner(n_ + 1), remaining(blocks_.size());
        for (size_t i = 0; i < blocks_.size(); ++i) {
            remaining[i] = int(blocks_[i].size());
            for (int e : blocks_[i]) owner[e] = int(i);
        }
        std::vector<int> stack;
        for (int e = 1; e <= n_; ++e) {
            int b = owner[e];
            if (remaining[b] == int(blocks_[b].size()))
                stack.push_back(b);
            else if (stack.empty() || stack.back() != b)
                return true;
            if (--remaining[b] == 0) stack.pop_back();
        }
        return false;
    }

    int n_;
    std::vector<std::vector<int>> blocks_;
};

inline int nc_default_max() {
    if (const char* env = std::getenv("TLFREE_MAX_NC")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 12;
}

// All non-crossing partitions of {1..n}, deterministic order.
inline std::vector<NCPartition> enumerate_nc(int n) {
    if (n < 0) throw domain_error("enumerate_nc: negative n");
    if (n > nc_default_max())
        throw resource_limit_error("enumerate_nc: n exceeds cap (set TLFREE_MAX_NC to raise)");
    std::vector<NCPartition> out;
    std::vector<std::vector<int>> blocks;
    // Incremental build: adding max element i to block B is non-crossing iff
    // no other block straddles an element of B.
    auto can_add = [&](size_t bi) {
        for (int b : blocks[bi])
            for (size_t cj = 0; cj < blocks.size(); ++cj) {
                if (cj == bi) continue;
                if (blocks[cj].front() < b && blocks[cj].back() > b) return false;
            }
        return true;
    };
    auto rec =[&](auto&& self, int i) -> void {
        if (i > n) {
            out.emplace_back(n, blocks);
            return;
        }
        for (size_t bi = 0; bi < blocks.size(); ++bi) {
            if (!can_add(bi)) continue;
            blocks[bi].push_back(i);
            self(self, i + 1);
            blocks[bi].pop_back();
        }
        blocks.push_back({i});
        self(self, i + 1);
        blocks.pop_back();
    };
    rec(rec, 1);
    std::sort(out.begin(), out.end());
    return out;
}

// Join in the NC lattice: transitive closure of the union, then repeatedly
// merge any two blocks that cross until the result is non-crossing.  (The
// plain partition join of two NC partitions can cross; NC forces the merge.)
inline NCPartition nc_join(const NCPartition& a, const NCPartition& b) {
    if (a.n() != b.n()) throw domain_error("join: size mismatch");
    int n = a.n();
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
    for (auto* p : {&a, &b})
        for (auto& blk : p->blocks())
            for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    bool merged = true;
    while (merged) {
        merged = false;
        for (int x = 1; x <= n && !merged; ++x)
            for (int y = x + 1; y <= n && !merged; ++y)
                for (int z = y + 1; z <= n && !merged; ++z)
                    for (int w = z + 1; w <= n && !merged; ++w)
                        if (find(x) == find(z) && find(y) == find(w) && find(x) != find(y)) {
                            unite(x, y);
                            merged = true;
                        }
    }
    std::map<int, std::vector<int>> by_root;
    for (int i = 1; i <= n; ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<int>> blocks;
    for (auto& [r, blk] : by_root) blocks.push_back(blk);
    return NCPartition(n, blocks);
}

// Meet: common refinement (always non-crossing).
inline NCPartition nc_meet(const NCPartition& a, const NCPartition& b) {
    if (a.n() != b.n()) throw domain_error("meet: size mismatch");
    int n = a.n();
    std::map<std::pair<int, int>, std::vector<int>> cells;
    for (int i = 1; i <= n; ++i) cells[{a.block_index(i), b.block_index(i)}].push_back(i);
    std::vector<std::vector<int>> blocks;
    for (auto& [key, blk] : cells) blocks.push_back(blk);
    return NCPartition(n, blocks);
}

// Kreweras complement via the permutation model: blocks of Kr(pi) are the
// cycles of sigma_pi^{-1} composed with the long cycle (1 2 ... n).
inline NCPartition kreweras(const NCPartition& pi) {
    int n = pi.n();
    std::vector<int> next(n + 1);  // sigma_pi: element -> next in block, cyclic
    for (auto& b : pi.blocks())
        for (size_t i = 0; i < b.size(); ++i) next[b[i]] = b[(i + 1) % b.size()];
    std::vector<int> inv(n + 1);
    for (int i = 1; i <= n; ++i) inv[next[i]] = i;
    std::vector<int> f(n + 1);
    for (int i = 1; i <= n; ++i) f[i] = inv[i % n + 1];
    std::vector<int> seen(n + 1, 0);
    std::vector<std::vector<int>> blocks;
    for (int i = 1; i <= n; ++i) {
        if (seen[i]) continue;
        std::vector<int> cyc;
        for (int j = i; !seen[j]; j = f[j]) {
            seen[j] = 1;
            cyc.push_back(j);
        }
        blocks.push_back(cyc);
    }
    return NCPartition(n, blocks);
}

// Moebius function of the NC lattice interval [sigma, pi] via the defining
// recursion, memoized per n.
class MobiusCache {
  public:
    Int mobius(const NCPartition& sigma, const NCPartition& pi) {
        if (sigma.n() != pi.n()) throw domain_error("mobius: size mismatch");
        if (!sigma.refines(pi)) throw domain_error("mobius: sigma not <= pi");
        auto key = std::make_pair(sigma, pi);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Int val;
        if (sigma == pi) {
            val = 1;
        } else {
            val = 0;
            for (const auto& rho : all(sigma.n()))
                if (sigma.refines(rho) && rho.refines(pi) && !(rho == pi))
                    val -= mobius(sigma, rho);
        }
        memo_[key] = val;
        return val;
    }

  private:
    const std::vector<NCPartition>& all(int n) {
        auto it = all_.find(n);
        if (it == all_.end()) it = all_.emplace(n, enumerate_nc(n)).first;
        return it->second;
    }
    std::map<std::pair<NCPartition, NCPartition>, Int> memo_;
    std::map<int, std::vector<NCPartition>> all_;
};

inline Int mobius_nc(const NCPartition& sigma, const NCPartition& pi) {
    static MobiusCache cache;
    return cache.mobius(sigma, pi);
}

// hat-embedding: blow up element i of pi into m_i consecutive points.
inline NCPartition hat_embed(const NCPartition& pi, const std::vector<int>& sizes) {
    if (int(sizes.size()) != pi.n()) throw domain_error("hat_embed: sizes length mismatch");
    std::vector<int> start(sizes.size() + 1);
    start[0] = 1;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw domain_error("hat_embed: sizes must be positive");
        start[i + 1] = start[i] + sizes[i];
    }
    int m = start[sizes.size()] - 1;
    std::vector<std::vector<int>> blocks;
    for (auto& b : pi.blocks()) {
        std::vector<int> blk;
        for (int e : b)
            for (int j = 0; j < sizes[e - 1]; ++j) blk.push_back(start[e - 1] + j);
        blocks.push_back(blk);
    }
    return NCPartition(m, blocks);
}

}  // namespace tlfree
