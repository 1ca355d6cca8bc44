#pragma once

#include <vector>

#include "tlfree/linalg.hpp"
#include "tlfree/nc.hpp"

namespace tlfree {

// Truncated scalar laws: values[i] holds the (i+1)-st moment/cumulant.
template <class S>
struct MomentSeqT {
    int D = 0;
    std::vector<S> m;  // m_1..m_D
    MomentSeqT() = default;
    MomentSeqT(std::vector<S> v) : D(int(v.size())), m(std::move(v)) {}
    friend bool operator==(const MomentSeqT&, const MomentSeqT&) = default;
};

template <class S>
struct CumulantSeqT {
    int D = 0;
    std::vector<S> k;  // k_1..k_D
    CumulantSeqT() = default;
    CumulantSeqT(std::vector<S> v) : D(int(v.size())), k(std::move(v)) {}
    friend bool operator==(const CumulantSeqT&, const CumulantSeqT&) = default;
};

using MomentSeq = MomentSeqT<Rational>;
using CumulantSeq = CumulantSeqT<Rational>;

template <class S>
MomentSeqT<S> cumulants_to_moments(const CumulantSeqT<S>& k) {
    MomentSeqT<S> out;
    out.D = k.D;
    for (int n = 1; n <= k.D; ++n) {
        S mn = S();
        for (auto& pi : enumerate_nc(n)) {
            S prod = S(1);
            for (auto& blk : pi.blocks()) prod = prod * k.k[blk.size() - 1];
            mn = mn + prod;
        }
        out.m.push_back(mn);
    }
    return out;
}

// Inductive inversion: kappa_n = m_n - sum over pi != 1_n of kappa_pi.
template <class S>
CumulantSeqT<S> moments_to_cumulants(const MomentSeqT<S>& m) {
    CumulantSeqT<S> out;
    out.D = m.D;
    for (int n = 1; n <= m.D; ++n) {
        S kn = m.m[n - 1];
        for (auto& pi : enumerate_nc(n)) {
            if (pi.num_blocks() == 1) continue;
            S prod = S(1);
            for (auto& blk : pi.blocks()) prod = prod * out.k[blk.size() - 1];
            kn = kn - prod;
        }
        out.k.push_back(kn);
    }
    return out;
}

template <class S, class T>
CumulantSeqT<S> convolution_power(const CumulantSeqT<S>& k, const T& t) {
    CumulantSeqT<S> out;
    out.D = k.D;
    for (auto& v : k.k) out.k.push_back(v * t);
    return out;
}

inline CumulantSeq semicircle_law(int D) {
    std::vector<Rational> k(D, Rational(0));
    if (D >= 2) k[1] = 1;
    return CumulantSeq(k);
}

inline CumulantSeq free_poisson_law(int D) {
    return CumulantSeq(std::vector<Rational>(D, Rational(1)));
}

// Necessary finite check for t-fold free divisibility: the Hankel matrices of
// the moments of nu^{boxplus 1/t} up to `depth` must be PSD.
inline bool divisibility_check(const CumulantSeq& k, const Rational& t, int depth) {
    if (t <= 1) throw domain_error("divisibility_check: t must exceed 1");
    if (depth > k.D || depth < 2 || depth % 2 != 0)
        throw domain_error("divisibility_check: depth must be even and <= D");
    auto mom = cumulants_to_moments(convolution_power(k, Rational(1) / t));
    auto m = [&](int n) { return n == 0 ? Rational(1) : mom.m[n - 1]; };
    int q = depth / 2;
    Matrix<Rational> H(q + 1, std::vector<Rational>(q + 1));
    for (int i = 0; i <= q; ++i)
        for (int j = 0; j <= q; ++j) H[i][j] = m(i + j);
    return psd_rational(H);
}

}  // namespace tlfree
