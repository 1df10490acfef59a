#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "thompson/errors.hpp"

namespace thompson {

using Int = boost::multiprecision::cpp_int;

// Exact fraction over an integer type I, kept in lowest terms with a
// positive denominator; zero is stored as 0/1.  Equality is structural,
// which by the invariant coincides with numeric equality.
template <typename I>
class basic_rational {
public:
    basic_rational() : num_(0), den_(1) {}

    template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
    basic_rational(T n) : num_(n), den_(1) {}

    basic_rational(I n) : num_(std::move(n)), den_(1) {}

    basic_rational(I n, I d) : num_(std::move(n)), den_(std::move(d)) {
        normalize();
    }

    template <typename T, typename U,
              std::enable_if_t<std::is_integral_v<T> && std::is_integral_v<U>, int> = 0>
    basic_rational(T n, U d) : num_(n), den_(d) {
        normalize();
    }

    // Accepts "a" or "a/b" with an optional leading minus sign; b > 0.
    static basic_rational parse(std::string_view text) {
        const auto fail = [&](std::size_t pos, const std::string& what) -> void {
            throw parse_error("bad rational \"" + std::string(text) + "\": " + what +
                              " at position " + std::to_string(pos));
        };
        std::size_t i = 0;
        if (text.empty()) fail(0, "empty input");
        if (text[i] == '-') ++i;
        const std::size_t num_begin = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == num_begin) fail(i, "expected digit");
        I num = from_digits(text.substr(0, i));
        if (i == text.size()) return basic_rational(std::move(num), I(1));
        if (text[i] != '/') fail(i, "expected '/' or end");
        ++i;
        const std::size_t den_begin = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == den_begin) fail(i, "expected digit after '/'");
        if (i != text.size()) fail(i, "trailing characters");
        I den = from_digits(text.substr(den_begin));
        if (den == 0) fail(den_begin, "zero denominator");
        return basic_rational(std::move(num), std::move(den));
    }

    const I& num() const { return num_; }
    const I& den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    basic_rational operator-() const { return raw(-num_, den_); }

    friend basic_rational operator+(const basic_rational& a, const basic_rational& b) {
        return basic_rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend basic_rational operator-(const basic_rational& a, const basic_rational& b) {
        return basic_rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend basic_rational operator*(const basic_rational& a, const basic_rational& b) {
        return basic_rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend basic_rational operator/(const basic_rational& a, const basic_rational& b) {
        if (b.num_ == 0) throw invalid_parameters("rational division by zero");
        return basic_rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    basic_rational& operator+=(const basic_rational& o) { return *this = *this + o; }
    basic_rational& operator-=(const basic_rational& o) { return *this = *this - o; }
    basic_rational& operator*=(const basic_rational& o) { return *this = *this * o; }
    basic_rational& operator/=(const basic_rational& o) { return *this = *this / o; }

    basic_rational reciprocal() const {
        if (num_ == 0) throw invalid_parameters("reciprocal of zero");
        return num_ > 0 ? raw(den_, num_) : raw(-den_, -num_);
    }

    friend bool operator==(const basic_rational& a, const basic_rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const basic_rational& a, const basic_rational& b) {
        return !(a == b);
    }
    friend bool operator<(const basic_rational& a, const basic_rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const basic_rational& a, const basic_rational& b) { return b < a; }
    friend bool operator<=(const basic_rational& a, const basic_rational& b) { return !(b < a); }
    friend bool operator>=(const basic_rational& a, const basic_rational& b) { return !(a < b); }

    std::string str() const {
        std::ostringstream os;
        os << num_;
        if (den_ != 1) os << '/' << den_;
        return os.str();
    }

    // Lossy decimal approximation, for display only.
    double approx() const {
        if constexpr (std::is_integral_v<I>) {
            return static_cast<double>(num_) / static_cast<double>(den_);
        } else {
            return num_.template convert_to<double>() / den_.template convert_to<double>();
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const basic_rational& q) {
        return os << q.str();
    }

private:
    static basic_rational raw(I n, I d) {
        basic_rational q;
        q.num_ = std::move(n);
        q.den_ = std::move(d);
        return q;
    }

    static I from_digits(std::string_view s) {
        std::istringstream is{std::string(s)};
        I v;
        is >> v;
        return v;
    }

    static I gcd_of(I a, I b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            I r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    void normalize() {
        if (den_ == 0) throw invalid_parameters("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        I g = gcd_of(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    I num_;
    I den_;
};

using Rational = basic_rational<Int>;

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

} // namespace thompson
