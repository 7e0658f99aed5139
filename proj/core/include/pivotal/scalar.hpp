#pragma once

#include <cmath>
#include <cstdint>

#include "pivotal/rational.hpp"

namespace pivotal {

/// Glue between the two arithmetic modes: exact rationals for enumeration
/// and grid scans, binary doubles for Monte Carlo and spectral work.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    // grid boundaries (cumulated probability exactly on an integer) must be
    // decided consistently with the exact mode, hence the snap tolerance
    static constexpr double integer_tolerance = 1e-9;

    static bool integer_value(double v, long long& out) {
        double r = std::llround(v);
        if (std::fabs(v - r) > integer_tolerance) return false;
        out = std::llround(v);
        return true;
    }
    /// Snaps values lying within tolerance of an integer onto it.
    static double tidy(double v) {
        double r = std::nearbyint(v);
        return std::fabs(v - r) <= integer_tolerance ? r : v;
    }
    static double from_int(long long v) { return double(v); }
    static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;

    static bool integer_value(const Rational& v, long long& out) {
        if (!v.is_integer()) return false;
        out = static_cast<long long>(v.numerator());
        return true;
    }
    static Rational tidy(const Rational& v) { return v; }
    static Rational from_int(long long v) { return Rational(v); }
    static double to_double(const Rational& v) { return v.to_double(); }
};

}  // namespace pivotal
