// Double-double scalar (~32 significant digits). The peeling recursion loses
// roughly the weight spread of the measure to cancellation, so the default
// inverse path runs on this type instead of plain doubles.
#pragma once

#include "chflow/dd.hpp"
#include "chflow/scalar.hpp"

namespace chflow {

class DDReal {
public:
    DDReal() = default;
    DDReal(double v) : v_{v, 0.0} {}
    DDReal(double hi, double lo) : v_{hi, lo} {}

    double hi() const { return v_.hi; }
    double to_double() const { return v_.hi + v_.lo; }
    bool is_zero() const { return v_.hi == 0.0 && v_.lo == 0.0; }

    DDReal operator-() const { return DDReal(-v_.hi, -v_.lo); }

    friend DDReal operator+(const DDReal& a, const DDReal& b) {
        DD r = dd_add(a.v_, b.v_);
        return DDReal(r.hi, r.lo);
    }
    friend DDReal operator-(const DDReal& a, const DDReal& b) { return a + (-b); }
    friend DDReal operator*(const DDReal& a, const DDReal& b) {
        DD p = dd_two_prod(a.v_.hi, b.v_.hi);
        p.lo += a.v_.hi * b.v_.lo + a.v_.lo * b.v_.hi;
        DD r = dd_two_sum(p.hi, p.lo);
        return DDReal(r.hi, r.lo);
    }
    friend DDReal operator/(const DDReal& a, const DDReal& b) {
        double q1 = a.v_.hi / b.v_.hi;
        DDReal r = a - b * DDReal(q1);
        double q2 = r.v_.hi / b.v_.hi;
        r = r - b * DDReal(q2);
        double q3 = r.v_.hi / b.v_.hi;
        DD s = dd_two_sum(q1, q2);
        s = dd_add(s, q3);
        return DDReal(s.hi, s.lo);
    }

    friend bool operator==(const DDReal& a, const DDReal& b) {
        return a.v_.hi == b.v_.hi && a.v_.lo == b.v_.lo;
    }
    friend bool operator!=(const DDReal& a, const DDReal& b) { return !(a == b); }
    friend bool operator<(const DDReal& a, const DDReal& b) {
        return a.v_.hi != b.v_.hi ? a.v_.hi < b.v_.hi : a.v_.lo < b.v_.lo;
    }
    friend bool operator>(const DDReal& a, const DDReal& b) { return b < a; }
    friend bool operator<=(const DDReal& a, const DDReal& b) { return !(b < a); }
    friend bool operator>=(const DDReal& a, const DDReal& b) { return !(a < b); }

private:
    DD v_;
};

template <>
struct scalar_traits<DDReal> {
    static constexpr bool exact = false;
    static DDReal zero() { return DDReal(); }
    static DDReal one() { return DDReal(1.0); }
    static DDReal from_int(int64_t v) { return DDReal(static_cast<double>(v)); }
    static DDReal from_double(double v) { return DDReal(v); }
    static double to_double(const DDReal& v) { return v.to_double(); }
    static DDReal abs(const DDReal& v) { return v.to_double() < 0.0 ? -v : v; }
    static bool is_zero(const DDReal& v) { return v.is_zero(); }
    static bool is_small(const DDReal& v, const DDReal& scale, double rel_tol) {
        return std::fabs(v.to_double()) <= rel_tol * std::fabs(scale.to_double());
    }
};

}  // namespace chflow
