#include "chflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chflow/errors.hpp"

namespace chflow {

namespace {

using cplx = std::complex<double>;

cplx eval_with_deriv(const std::vector<double>& c, cplx z, cplx& deriv) {
    cplx p = 0.0, d = 0.0;
    for (size_t i = c.size(); i-- > 0;) {
        d = d * z + p;
        p = p * z + c[i];
    }
    deriv = d;
    return p;
}

// running bound on the roundoff of the Horner evaluation at z
double eval_error_bound(const std::vector<double>& c, cplx z) {
    double az = std::abs(z), acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * az + std::fabs(c[i]);
    return acc * std::numeric_limits<double>::epsilon() * (4.0 * c.size());
}

}  // namespace

RootResult poly_roots(const Poly<double>& p, double tol) {
    if (p.degree() < 1) throw Error("poly_roots: degree must be >= 1");
    if (tol <= 0) throw Error("poly_roots: tol must be positive");
    if (std::fabs(p.leading()) < tol * p.max_abs_coeff())
        throw DegenerateLeadingCoefficient();

    std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
    const double lead = c.back();
    for (auto& v : c) v /= lead;

    // strip roots at the origin directly
    size_t zeros_at_origin = 0;
    while (zeros_at_origin < c.size() - 1 && c[zeros_at_origin] == 0.0) ++zeros_at_origin;
    std::vector<double> cr(c.begin() + zeros_at_origin, c.end());
    const int m = static_cast<int>(cr.size()) - 1;

    RootResult result;
    for (size_t k = 0; k < zeros_at_origin; ++k) result.roots.push_back(0.0);

    if (m > 0) {
        double cauchy = 0.0;
        for (int i = 0; i < m; ++i) cauchy = std::max(cauchy, std::fabs(cr[i]));
        cauchy = 1.0 + cauchy;
        // geometric-mean root radius: much better centered than the Cauchy
        // bound when middle coefficients dwarf the endpoints (high degree,
        // clustered roots)
        double geo = std::pow(std::fabs(cr[0]), 1.0 / m);
        double radius = std::min(cauchy, geo);

        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);

        std::vector<cplx> z(m);
        const int max_restarts = 8;
        bool converged = false;
        for (int attempt = 0; attempt < max_restarts && !converged; ++attempt) {
            double r0 = radius * (1.0 + 0.8 * attempt * attempt);
            for (int k = 0; k < m; ++k) {
                double ang = 2.0 * M_PI * (k + 0.35) / m + 0.4 * attempt + jitter(rng);
                z[k] = std::polar(r0 * (1.0 + jitter(rng)), ang);
            }
            std::vector<bool> done(m, false);
            for (int iter = 0; iter < 600; ++iter) {
                bool all_done = true;
                for (int k = 0; k < m; ++k) {
                    if (done[k]) continue;
                    cplx d;
                    cplx v = eval_with_deriv(cr, z[k], d);
                    // |p(z)| at the level of evaluation roundoff: converged
                    if (std::abs(v) <= eval_error_bound(cr, z[k])) { done[k] = true; continue; }
                    cplx newton = (d == 0.0) ? cplx(0.1, 0.1) : v / d;
                    cplx sum = 0.0;
                    for (int j = 0; j < m; ++j)
                        if (j != k) sum += 1.0 / (z[k] - z[j]);
                    cplx denom = 1.0 - newton * sum;
                    cplx w = (std::abs(denom) < 1e-300) ? newton : newton / denom;
                    z[k] -= w;
                    if (std::abs(w) <= 1e-14 * (1.0 + std::abs(z[k]))) done[k] = true;
                    else all_done = false;
                }
                if (all_done) { converged = true; break; }
            }
        }
        if (!converged) throw NonConvergence("poly_roots: Aberth iteration failed to converge");

        // compensated Newton polish; near-real roots are snapped onto the
        // axis only when the polished real residual reaches roundoff level
        Poly<double> pr(cr);
        for (auto& root : z) {
            for (int it = 0; it < 2; ++it) {
                cplx d;
                cplx v = eval_with_deriv(cr, root, d);
                if (d == 0.0) break;
                root -= v / d;
            }
            if (std::fabs(root.imag()) <= 1e-7 * (1.0 + std::fabs(root.real()))) {
                double r = root.real();
                for (int it = 0; it < 4; ++it) {
                    double v = pr.eval_dd(r);
                    cplx d;
                    eval_with_deriv(cr, cplx(r, 0.0), d);
                    if (d.real() == 0.0) break;
                    r -= v / d.real();
                }
                if (std::fabs(pr.eval_dd(r)) <= eval_error_bound(cr, cplx(r, 0.0)))
                    root = cplx(r, 0.0);
            }
        }
        result.roots.insert(result.roots.end(), z.begin(), z.end());
    }

    std::sort(result.roots.begin(), result.roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    result.all_real_simple = true;
    for (size_t i = 0; i < result.roots.size(); ++i) {
        if (std::fabs(result.roots[i].imag()) > 1e-8 * (1.0 + std::abs(result.roots[i]))) {
            result.all_real_simple = false;
            break;
        }
        if (i > 0 && std::abs(result.roots[i] - result.roots[i - 1]) <=
                         1e-12 * (1.0 + std::abs(result.roots[i]))) {
            result.all_real_simple = false;
            break;
        }
    }
    return result;
}

std::vector<double> poly_real_roots(const Poly<double>& p, double tol) {
    RootResult rr = poly_roots(p, tol);
    std::vector<double> out;
    out.reserve(rr.roots.size());
    for (auto z : rr.roots) {
        if (std::fabs(z.imag()) > 1e-8 * (1.0 + std::abs(z)))
            throw NonRealPole("poly_real_roots: complex root at " + std::to_string(z.real()) +
                              "+" + std::to_string(z.imag()) + "i");
        out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace chflow
