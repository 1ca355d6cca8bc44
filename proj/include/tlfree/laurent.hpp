#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "tlfree/rational.hpp"

namespace tlfree {

// Laurent polynomial in the loop parameter delta, exact rational coefficients.
class Laurent {
  public:
    Laurent() = default;
    Laurent(const Rational& r) {
        if (r != 0) c_[0] = r;
    }
    Laurent(long long v) : Laurent(Rational(v)) {}

    static Laurent delta_pow(int e, const Rational& coeff = 1) {
        Laurent l;
        if (coeff != 0) l.c_[e] = coeff;
        return l;
    }

    const std::map<int, Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    Rational coeff(int e) const {
        auto it = c_.find(e);
        return it == c_.end() ? Rational(0) : it->second;
    }

    Laurent& operator+=(const Laurent& o) {
        for (auto& [e, v] : o.c_) {
            auto& c = c_[e];
            c += v;
            if (c == 0) c_.erase(e);
        }
        return *this;
    }
    Laurent& operator-=(const Laurent& o) { return *this += -o; }
    Laurent operator-() const {
        Laurent r;
        for (auto& [e, v] : c_) r.c_[e] = -v;
        return r;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [e1, v1] : a.c_)
            for (auto& [e2, v2] : b.c_) {
                auto& c = r.c_[e1 + e2];
                c += v1 * v2;
                if (c == 0) r.c_.erase(e1 + e2);
            }
        return r;
    }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.c_ == b.c_; }
    friend auto operator<=>(const Laurent& a, const Laurent& b) { return a.c_ <=> b.c_; }

    Rational eval(const Rational& delta) const {
        Rational acc = 0;
        for (auto& [e, v] : c_) {
            Rational p = 1;
            for (int i = 0; i < (e < 0 ? -e : e); ++i) p *= delta;
            acc += (e < 0) ? Rational(v / p) : Rational(v * p);
        }
        return acc;
    }

    int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
    int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    std::string str() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            const auto& [e, v] = *it;
            if (!first) os << (v > 0 ? " + " : " - ");
            else if (v < 0) os << "-";
            first = false;
            Rational a = abs(v);
            if (a != 1 || e == 0) os << rational_to_string(a);
            if (e != 0) {
                if (a != 1) os << "*";
                os << "d";
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

  private:
    std::map<int, Rational> c_;  // exponent -> nonzero coefficient
};

// Dense ordinary polynomial over Q, helper layer for rational functions.
namespace poly {

using Poly = std::vector<Rational>;  // coefficient of x^i at index i, trimmed

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

// a = q*b + r with deg r < deg b.
inline Poly divmod(Poly a, const Poly& b, Poly& q) {
    q.clear();
    if (b.empty()) throw domain_error("polynomial division by zero");
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    while (a.size() >= b.size()) {
        Rational f = a.back() / b.back();
        q[a.size() - b.size()] = f;
        for (size_t i = 0; i < b.size(); ++i) a[a.size() - b.size() + i] -= f * b[i];
        trim(a);
        if (!q.empty() && a.size() >= b.size() && q[a.size() - b.size()] != 0)
            throw domain_error("divmod internal");
    }
    return a;
}

inline Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly q, r = divmod(a, b, q);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

}  // namespace poly

// Element of Q(delta): ratio of Laurent polynomials, kept reduced.
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(Rational(1)) {}
    RationalFunction(const Laurent& l) : num_(l), den_(Rational(1)) {}
    RationalFunction(const Rational& r) : num_(r), den_(Rational(1)) {}
    RationalFunction(long long v) : num_(Rational(v)), den_(Rational(1)) {}
    RationalFunction(const Laurent& n, const Laurent& d) : num_(n), den_(d) {
        if (d.is_zero()) throw domain_error("rational function with zero denominator");
        normalize();
    }

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw domain_error("division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return (a - b).is_zero();
    }

    // Exact conversion back to a Laurent polynomial; throws if the division
    // leaves a remainder.
    Laurent to_laurent() const {
        if (num_.is_zero()) return Laurent();
        auto np = to_poly(num_);
        auto dp = to_poly(den_);
        poly::Poly q;
        poly::Poly r = poly::divmod(np, dp, q);
        if (!r.empty()) throw domain_error("rational function is not a Laurent polynomial");
        Laurent out;
        int shift = num_.min_exp() - den_.min_exp();
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0) out += Laurent::delta_pow(int(i) + shift, q[i]);
        return out;
    }

    Rational eval(const Rational& delta) const {
        Rational d = den_.eval(delta);
        if (d == 0) throw domain_error("rational function pole at given delta");
        return num_.eval(delta) / d;
    }

    std::string str() const {
        if (den_ == Laurent(Rational(1))) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    static poly::Poly to_poly(const Laurent& l) {
        poly::Poly p;
        if (l.is_zero()) return p;
        int base = l.min_exp();
        p.assign(l.max_exp() - base + 1, Rational(0));
        for (auto& [e, v] : l.coeffs()) p[e - base] = v;
        return p;
    }
    static Laurent from_poly(const poly::Poly& p, int shift) {
        Laurent l;
        for (size_t i = 0; i < p.size(); ++i)
            if (p[i] != 0) l += Laurent::delta_pow(int(i) + shift, p[i]);
        return l;
    }

    void normalize() {
        if (num_.is_zero()) {
            den_ = Laurent(Rational(1));
            return;
        }
        auto np = to_poly(num_), dp = to_poly(den_);
        auto g = poly::gcd(np, dp);
        if (g.size() > 1) {
            poly::Poly q1, q2;
            auto r1 = poly::divmod(np, g, q1);
            auto r2 = poly::divmod(dp, g, q2);
            if (!r1.empty() || !r2.empty()) throw domain_error("gcd normalize internal");
            np = q1;
            dp = q2;
        }
        // Pin the denominator: lowest exponent 0, leading coefficient 1.
        Rational lead = dp.back();
        for (auto& c : np) c /= lead;
        for (auto& c : dp) c /= lead;
        // Slide exponents so the denominator is an ordinary polynomial with
        // nonzero constant term whenever possible.
        int shift = num_.min_exp() - den_.min_exp();
        if (shift > 0) {
            num_ = from_poly(np, shift);
            den_ = from_poly(dp, 0);
        } else {
            num_ = from_poly(np, 0);
            den_ = from_poly(dp, -shift);
        }
    }

    Laurent num_, den_;
};

}  // namespace tlfree
