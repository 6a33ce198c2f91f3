#include "chflow/bigfloat.hpp"

#include <cmath>

namespace chflow {

void BigFloat::normalize() {
    if (mant_.is_zero()) {
        exp_ = 0;
        return;
    }
    long bl = static_cast<long>(mant_.bit_length());
    if (bl > kPrec) {
        mant_ = mant_.shifted_right(static_cast<unsigned>(bl - kPrec));
        exp_ += bl - kPrec;
    } else if (bl < kPrec) {
        mant_ = mant_.shifted_left(static_cast<unsigned>(kPrec - bl));
        exp_ -= kPrec - bl;
    }
    if (mant_.is_zero()) exp_ = 0;
}

BigFloat BigFloat::from_double(double v) {
    BigFloat r;
    if (v == 0.0) return r;
    if (!std::isfinite(v)) throw std::domain_error("BigFloat: non-finite double");
    int e;
    double m = std::frexp(v, &e);
    r.mant_ = BigInt(static_cast<int64_t>(std::ldexp(m, 53)));
    r.exp_ = e - 53;
    r.normalize();
    return r;
}

BigFloat BigFloat::from_int(int64_t v) {
    BigFloat r;
    r.mant_ = BigInt(v);
    r.exp_ = 0;
    r.normalize();
    return r;
}

double BigFloat::to_double() const {
    if (is_zero()) return 0.0;
    double m;
    long e;
    mant_.frexp_approx(m, e);
    long total = e + exp_;
    if (total > 1030) return sign() > 0 ? HUGE_VAL : -HUGE_VAL;
    if (total < -1080) return sign() > 0 ? 0.0 : -0.0;
    return std::ldexp(m, static_cast<int>(total));
}

double BigFloat::log2_value() const {
    if (is_zero()) return -HUGE_VAL;
    return static_cast<double>(exp_) + static_cast<double>(mant_.bit_length());
}

BigFloat BigFloat::operator-() const {
    BigFloat r = *this;
    r.mant_ = -r.mant_;
    return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // both mantissas carry kPrec bits; far-apart exponents short-circuit
    const BigFloat *hi = &a, *lo = &b;
    if (a.exp_ < b.exp_) std::swap(hi, lo);
    long gap = hi->exp_ - lo->exp_;
    if (gap > BigFloat::kPrec + 8) return *hi;
    BigFloat r;
    r.mant_ = hi->mant_.shifted_left(static_cast<unsigned>(gap)) + lo->mant_;
    r.exp_ = lo->exp_;
    r.normalize();
    return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    if (a.is_zero() || b.is_zero()) return BigFloat();
    BigFloat r;
    r.mant_ = a.mant_ * b.mant_;
    r.exp_ = a.exp_ + b.exp_;
    r.normalize();
    return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) throw std::domain_error("BigFloat: division by zero");
    if (a.is_zero()) return BigFloat();
    BigFloat r;
    r.mant_ = a.mant_.shifted_left(BigFloat::kPrec + 8) / b.mant_;
    r.exp_ = a.exp_ - b.exp_ - (BigFloat::kPrec + 8);
    r.normalize();
    return r;
}

bool operator<(const BigFloat& a, const BigFloat& b) {
    if (a.sign() != b.sign()) return a.sign() < b.sign();
    if (a.is_zero()) return false;
    // same sign, both normalized to kPrec bits: exponent decides, then mantissa
    if (a.exp_ != b.exp_) {
        bool mag_less = a.exp_ < b.exp_;
        return a.sign() > 0 ? mag_less : !mag_less;
    }
    return a.sign() > 0 ? a.mant_ < b.mant_ : b.mant_ < a.mant_;
}

}  // namespace chflow
