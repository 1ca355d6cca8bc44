#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tlfree {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long p, long long q = 1) { return Rational(p, q); }

// "p/q" or "p"; used by the JSON wire format.
inline std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline Int catalan(int n) {
    if (n < 0) throw std::invalid_argument("catalan: negative index");
    Int num = 1, den = 1;
    for (int i = 0; i < n; ++i) {
        num *= 2 * n - i;
        den *= i + 1;
    }
    return num / den / (n + 1);
}

// Domain/resource errors; the CLI maps these onto exit codes.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct solver_rank_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tlfree
