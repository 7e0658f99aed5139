#include "pivotal/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace pivotal {

namespace {

using Int = Rational::Int;
using UInt = unsigned __int128;

UInt uabs(Int v) { return v < 0 ? UInt(0) - UInt(v) : UInt(v); }

UInt ugcd(UInt a, UInt b) {
    while (b != 0) {
        UInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int checked_mul(Int a, Int b) {
    Int out;
    if (__builtin_mul_overflow(a, b, &out))
        throw ArithmeticOverflow("rational arithmetic exceeded 128 bits in multiply");
    return out;
}

Int checked_add(Int a, Int b) {
    Int out;
    if (__builtin_add_overflow(a, b, &out))
        throw ArithmeticOverflow("rational arithmetic exceeded 128 bits in add");
    return out;
}

Int checked_neg(Int a) {
    Int out;
    if (__builtin_sub_overflow(Int(0), a, &out))
        throw ArithmeticOverflow("rational arithmetic exceeded 128 bits in negate");
    return out;
}

std::string int128_to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    UInt u = uabs(v);
    std::string digits;
    while (u != 0) {
        digits.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

}  // namespace

Rational::Rational(Int numerator, Int denominator) {
    if (denominator == 0) throw ValidationError("rational with zero denominator");
    if (denominator < 0) {
        numerator = checked_neg(numerator);
        denominator = checked_neg(denominator);
    }
    UInt g = ugcd(uabs(numerator), UInt(denominator));
    if (g > 1) {
        numerator /= Int(g);
        denominator /= Int(g);
    }
    num_ = numerator;
    den_ = denominator;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw ValidationError("cannot parse number '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    Int num = 0, den = 1;
    bool any_digit = false, in_fraction = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            num = checked_add(checked_mul(num, 10), c - '0');
            if (in_fraction) den = checked_mul(den, 10);
            any_digit = true;
        } else if (c == '.' && !in_fraction) {
            in_fraction = true;
        } else if (c == '/' && !in_fraction && any_digit && pos + 1 < text.size()) {
            Rational d = Rational::parse(text.substr(pos + 1));
            if (d.is_zero()) fail();
            return Rational(neg ? checked_neg(num) : num, Int(1)) / d;
        } else {
            fail();
        }
    }
    if (!any_digit) fail();
    return Rational(neg ? checked_neg(num) : num, den);
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
    std::string s = int128_to_string(num_);
    if (den_ != 1) s += "/" + int128_to_string(den_);
    return s;
}

std::string Rational::to_decimal_string() const {
    if (den_ == 1) return int128_to_string(num_);
    // scale the denominator to a power of ten if it is of the form 2^a 5^b
    Int d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return to_string();
    int digits = twos > fives ? twos : fives;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale = checked_mul(scale, 10);
    Int scaled = checked_mul(num_ < 0 ? checked_neg(num_) : num_, scale / den_);
    std::string body = int128_to_string(scaled);
    if (int(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (num_ < 0 ? "-" : "") + body;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = checked_neg(num_);
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.num_ == 0) return b;
    if (b.num_ == 0) return a;
    if (a.den_ == b.den_) {
        return Rational(checked_add(a.num_, b.num_), a.den_);
    }
    Int g = Int(ugcd(UInt(a.den_), UInt(b.den_)));
    Int bg = b.den_ / g;
    Int num = checked_add(checked_mul(a.num_, bg), checked_mul(b.num_, a.den_ / g));
    return Rational(num, checked_mul(a.den_, bg));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    // cross-reduce before multiplying to keep intermediates small
    Int g1 = Int(ugcd(uabs(a.num_), UInt(b.den_)));
    Int g2 = Int(ugcd(uabs(b.num_), UInt(a.den_)));
    Rational r;
    r.num_ = checked_mul(a.num_ / g1, b.num_ / g2);
    r.den_ = checked_mul(a.den_ / g2, b.den_ / g1);
    return r;
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ValidationError("rational division by zero");
    Rational inv;
    if (b.num_ < 0) {
        inv.num_ = checked_neg(b.den_);
        inv.den_ = checked_neg(b.num_);
    } else {
        inv.num_ = b.den_;
        inv.den_ = b.num_;
    }
    return a * inv;
}

bool operator<(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ < b.num_;
    return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
}

}  // namespace pivotal
