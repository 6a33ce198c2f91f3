#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "chflow/errors.hpp"

namespace chflow {

// Adaptive Simpson with the standard 1/15 error estimate.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 24) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double lo, double hi, double flo, double fm, double fhi, double whole,
                   double tol, int depth) {
            double m = 0.5 * (lo + hi);
            double flm = f(0.5 * (lo + m)), frm = f(0.5 * (m + hi));
            double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fm);
            double right = (hi - m) / 6.0 * (fm + 4.0 * frm + fhi);
            double delta = left + right - whole;
            if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return run(lo, m, flo, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(m, hi, fm, frm, fhi, right, 0.5 * tol, depth - 1);
        }
    } rec{f};
    if (!(a < b)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double r = rec.run(a, b, fa, fm, fb, whole, tol, max_depth);
    if (!std::isfinite(r)) throw QuadratureFailure("adaptive_simpson: non-finite result");
    return r;
}

namespace gl {

// Gauss-Legendre nodes/weights on [-1, 1]
inline const std::vector<double>& nodes(int order) {
    static const std::vector<double> n4 = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
    static const std::vector<double> n8 = {-0.9602898564975363, -0.7966664774136267,
                                           -0.5255324099163290, -0.1834346424956498,
                                           0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
    static const std::vector<double> n16 = {
        -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
        -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
        0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
        0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
    switch (order) {
        case 4: return n4;
        case 8: return n8;
        case 16: return n16;
        default: throw Error("gauss-legendre: unsupported order (use 4, 8 or 16)");
    }
}

inline const std::vector<double>& weights(int order) {
    static const std::vector<double> w4 = {0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};
    static const std::vector<double> w8 = {0.1012285362903763, 0.2223810344533745,
                                           0.3137066458778873, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
    static const std::vector<double> w16 = {
        0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
        0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    switch (order) {
        case 4: return w4;
        case 8: return w8;
        case 16: return w16;
        default: throw Error("gauss-legendre: unsupported order (use 4, 8 or 16)");
    }
}

}  // namespace gl

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int order, int panels = 1) {
    if (!(a < b)) return 0.0;
    const auto& xs = gl::nodes(order);
    const auto& ws = gl::weights(order);
    double acc = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h, half = 0.5 * h;
        for (size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(mid + half * xs[i]);
    }
    return acc * 0.5 * h;
}

// Same, but split first at the given breakpoints (clipped to [a, b]).
inline double gauss_legendre_piecewise(const std::function<double(double)>& f, double a, double b,
                                       const std::vector<double>& breaks, int order,
                                       int panels_per_piece = 1) {
    std::vector<double> pts{a, b};
    for (double c : breaks)
        if (c > a && c < b) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        acc += gauss_legendre(f, pts[i], pts[i + 1], order, panels_per_piece);
    return acc;
}

}  // namespace chflow
