#pragma once

#include <optional>
#include <string>

#include "thompson/errors.hpp"
#include "thompson/rational.hpp"

namespace thompson {

inline void require_base(int n) {
    if (n < 2) throw invalid_parameters("base must be an integer >= 2, got " + std::to_string(n));
}

// n^p as an exact rational, any sign of p.
inline Rational pow_n(int n, int p) {
    require_base(n);
    Int v = boost::multiprecision::pow(Int(n), static_cast<unsigned>(p < 0 ? -p : p));
    return p >= 0 ? Rational(v) : Rational(Int(1), v);
}

// True iff q = a / n^r for some integer a and r >= 0, i.e. the reduced
// denominator's prime factors all divide n.
inline bool is_nadic(const Rational& q, int n) {
    require_base(n);
    Int d = q.den();
    const Int base(n);
    while (d > 1) {
        Int g = boost::multiprecision::gcd(d, base);
        if (g == 1) return false;
        while (d % g == 0) d /= g;
    }
    return true;
}

// Minimal r >= 0 with q * n^r integral.  Throws level_too_low when q is not
// N-adic at any level.
inline int nadic_level(const Rational& q, int n) {
    require_base(n);
    Int d = q.den();
    const Int base(n);
    int r = 0;
    while (d > 1) {
        Int g = boost::multiprecision::gcd(d, base);
        if (g == 1) {
            throw level_too_low("denominator of " + q.str() + " has a prime factor outside base " +
                                std::to_string(n));
        }
        d /= g;
        ++r;
    }
    return r;
}

// The integer q * n^level; throws level_too_low when q is not on that grid.
inline Int numerator_at_level(const Rational& q, int n, int level) {
    require_base(n);
    if (level < 0) throw invalid_parameters("grid level must be >= 0");
    Int scaled = q.num() * boost::multiprecision::pow(Int(n), static_cast<unsigned>(level));
    if (scaled % q.den() != 0) {
        throw level_too_low(q.str() + " is not on the 1/" + std::to_string(n) + "^" +
                            std::to_string(level) + " grid");
    }
    return scaled / q.den();
}

// p with q = n^p when one exists; q must be positive.
inline std::optional<int> power_of_n_exponent(const Rational& q, int n) {
    require_base(n);
    if (q.sign() <= 0) throw invalid_parameters("power_of_n_exponent requires a positive argument");
    const Int base(n);
    const auto exponent_of = [&](Int m) -> std::optional<int> {
        int p = 0;
        while (m % base == 0) {
            m /= base;
            ++p;
        }
        if (m != 1) return std::nullopt;
        return p;
    };
    if (q.den() == 1) return exponent_of(q.num());
    if (q.num() == 1) {
        auto p = exponent_of(q.den());
        if (!p) return std::nullopt;
        return -*p;
    }
    return std::nullopt;
}

} // namespace thompson
