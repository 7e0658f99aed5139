#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pivotal/errors.hpp"

namespace pivotal {

/// Exact rational number on 128-bit signed integers.
///
/// Always stored normalized (denominator > 0, gcd(|num|, den) = 1).
/// Every operation that could exceed 128 bits throws ArithmeticOverflow
/// instead of wrapping or degrading to floating point.
class Rational {
public:
    using Int = __int128;

    constexpr Rational() : num_(0), den_(1) {}
    Rational(long long value) : num_(value), den_(1) {}
    Rational(long long numerator, long long denominator)
        : Rational(Int(numerator), Int(denominator)) {}
    Rational(Int numerator, Int denominator);

    /// Parses "3", "-0.05", "7/20". Decimal digits become an exact
    /// power-of-ten denominator.
    static Rational parse(std::string_view text);

    Int numerator() const { return num_; }
    Int denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    double to_double() const;

    /// "num/den", or just "num" when integral.
    std::string to_string() const;

    /// Exact decimal expansion when the denominator is of the form 2^a·5^b
    /// (e.g. "0.65"); falls back to to_string() otherwise.
    std::string to_decimal_string() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    Int num_;
    Int den_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace pivotal
