// Dual-mode scalar plumbing: algorithms are generic over float-64 and exact
// rationals, with branching confined to these traits.
#pragma once

#include <cmath>

#include "chflow/rational.hpp"

namespace chflow {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(int64_t v) { return static_cast<double>(v); }
    static double from_double(double v) { return v; }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static bool is_zero(double v) { return v == 0.0; }
    // "negligible relative to scale": used by trims and tolerance checks;
    // takes |v| already nonnegative when called with abs values, but guards
    // against raw signed inputs anyway
    static bool is_small(double v, double scale, double rel_tol) {
        return std::fabs(v) <= rel_tol * std::fabs(scale);
    }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(); }
    static Rational one() { return Rational(1); }
    static Rational from_int(int64_t v) { return Rational(v); }
    static Rational from_double(double v) { return Rational::from_double(v); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static Rational abs(const Rational& v) { return v.abs(); }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static bool is_small(const Rational& v, const Rational&, double) { return v.is_zero(); }
};

}  // namespace chflow
