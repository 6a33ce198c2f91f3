// Minimal double-double arithmetic: compensated polynomial evaluation for
// root polishing and residues, where plain Horner loses too many digits.
#pragma once

#include <cmath>

namespace chflow {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD dd_two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD dd_two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline DD dd_add(DD a, double b) {
    DD s = dd_two_sum(a.hi, b);
    s.lo += a.lo;
    DD t = dd_two_sum(s.hi, s.lo);
    return t;
}

inline DD dd_add(DD a, DD b) {
    DD s = dd_two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return dd_two_sum(s.hi, s.lo);
}

inline DD dd_mul(DD a, double b) {
    DD p = dd_two_prod(a.hi, b);
    p.lo += a.lo * b;
    return dd_two_sum(p.hi, p.lo);
}

inline double dd_value(DD a) { return a.hi + a.lo; }

}  // namespace chflow
