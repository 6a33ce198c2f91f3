// Fixed-precision binary floating point (512-bit mantissa, ~154 digits) on
// top of BigInt. Third precision tier of the scalar ladder: the peel and the
// transfer product lose roughly the weight spread of the spectral data to
// cancellation, and weakly coupled peakons carry weights the double-double
// tier cannot resolve. Truncation rounding; cost is bounded, unlike exact
// rationals whose bit size grows per peel step.
#pragma once

#include "chflow/bigint.hpp"
#include "chflow/scalar.hpp"

namespace chflow {

class BigFloat {
public:
    static constexpr int kPrec = 512;  // mantissa bits

    BigFloat() = default;
    BigFloat(double v) { *this = from_double(v); }

    static BigFloat from_double(double v);
    static BigFloat from_int(int64_t v);

    bool is_zero() const { return mant_.is_zero(); }
    int sign() const { return mant_.sign(); }
    double to_double() const;
    // log2 of |value|; -inf marker for zero
    double log2_value() const;

    BigFloat operator-() const;
    BigFloat abs() const { return sign() < 0 ? -*this : *this; }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return a + (-b); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);

    friend bool operator==(const BigFloat& a, const BigFloat& b) {
        return a.mant_ == b.mant_ && a.exp_ == b.exp_;
    }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }
    friend bool operator<(const BigFloat& a, const BigFloat& b);
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return !(b < a); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return !(a < b); }

private:
    BigInt mant_;   // normalized to exactly kPrec bits unless zero
    long exp_ = 0;  // value = mant * 2^exp

    void normalize();
};

template <>
struct scalar_traits<BigFloat> {
    static constexpr bool exact = false;
    static BigFloat zero() { return BigFloat(); }
    static BigFloat one() { return BigFloat::from_int(1); }
    static BigFloat from_int(int64_t v) { return BigFloat::from_int(v); }
    static BigFloat from_double(double v) { return BigFloat::from_double(v); }
    static double to_double(const BigFloat& v) { return v.to_double(); }
    static BigFloat abs(const BigFloat& v) { return v.abs(); }
    static bool is_zero(const BigFloat& v) { return v.is_zero(); }
    static bool is_small(const BigFloat& v, const BigFloat& scale, double rel_tol) {
        if (v.is_zero()) return true;
        if (scale.is_zero()) return false;
        return v.log2_value() <= scale.log2_value() + std::log2(rel_tol);
    }
};

}  // namespace chflow
