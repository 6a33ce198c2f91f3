// Exact rational scalar. Every double is a dyadic rational, so float-mode data
// converts losslessly; this is what makes exact-mode retries meaningful.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "chflow/bigint.hpp"

namespace chflow {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int64_t v) : num_(v), den_(1) {}
    Rational(int64_t n, int64_t d) : num_(n), den_(d) { reduce(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    static Rational from_double(double v) {
        if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
        if (v == 0.0) return Rational();
        int e;
        double m = std::frexp(v, &e);          // v = m * 2^e, |m| in [0.5, 1)
        int64_t mi = static_cast<int64_t>(std::ldexp(m, 53));
        int shift = e - 53;
        BigInt n(mi);
        if (shift >= 0) return Rational(n.shifted_left(static_cast<unsigned>(shift)), BigInt(1));
        return Rational(std::move(n), BigInt::pow2(static_cast<unsigned>(-shift)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Rational operator-() const { return Rational(-num_, den_, false); }
    Rational abs() const { return sign() < 0 ? -*this : *this; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        // cross-reduce first to keep intermediates small
        BigInt g1 = BigInt::gcd(a.num_.abs(), b.den_);
        BigInt g2 = BigInt::gcd(b.num_.abs(), a.den_);
        BigInt n = (g1.is_one() ? a.num_ : a.num_ / g1) * (g2.is_one() ? b.num_ : b.num_ / g2);
        BigInt d = (g2.is_one() ? a.den_ : a.den_ / g2) * (g1.is_one() ? b.den_ : b.den_ / g1);
        return Rational(std::move(n), std::move(d), false);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        BigInt g1 = BigInt::gcd(a.num_.abs(), b.num_.abs());
        BigInt g2 = BigInt::gcd(b.den_, a.den_);
        BigInt n = (g1.is_one() ? a.num_ : a.num_ / g1) * (g2.is_one() ? b.den_ : b.den_ / g2);
        BigInt d = (g2.is_one() ? a.den_ : a.den_ / g2) * (g1.is_one() ? b.num_ : b.num_ / g1);
        if (d.sign() < 0) { n = -n; d = -d; }
        return Rational(std::move(n), std::move(d), false);
    }

    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const {
        double mn, md;
        long en, ed;
        num_.frexp_approx(mn, en);
        den_.frexp_approx(md, ed);
        if (num_.is_zero()) return 0.0;
        long e = en - ed;
        if (e > 2000) return num_.sign() > 0 ? HUGE_VAL : -HUGE_VAL;
        if (e < -2000) return 0.0;
        return std::ldexp(mn / md, static_cast<int>(e));
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    Rational(BigInt n, BigInt d, bool) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sign() < 0) { num_ = -num_; den_ = -den_; }
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        BigInt g = BigInt::gcd(num_.abs(), den_);
        if (!g.is_one()) { num_ = num_ / g; den_ = den_ / g; }
    }

    BigInt num_;
    BigInt den_;  // > 0, coprime with num_
};

}  // namespace chflow
