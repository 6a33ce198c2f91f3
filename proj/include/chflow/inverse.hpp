// Inverse spectral transform on finite measures: rebuild the Weyl function
// from its poles and residues, peel the continued-fraction factorization into
// interval and mass transfer factors, and reconstruct the multi-peakon pair.
//
// The peel recursion, per step k on the current Weyl function m_k:
//   (1) plateau  c_k = lim_{z->inf} m_k(z)          (leading-coefficient ratio)
//   (2) length   l_k = -1 / lim_{z->inf} z (m_k - c_k)
//   (3) strip    m'  = (U22 m_k + U21) / (U12 m_k + U11), U = interval transfer
//   (4) mass     v_k = lim_{z->inf} m'(z)/z,  m_{k+1} = m' - z v_k
//   (5) stop when the remainder vanishes (exactly, or below the termination
//       gauge on a circle inside the spectral gap)
// All limits are read off leading coefficients, never sampled at large z.
#pragma once

#include <vector>

#include "chflow/bigfloat.hpp"
#include "chflow/ddreal.hpp"
#include "chflow/spectral.hpp"

namespace chflow {

struct PeelStep {
    double c = 0.0;
    double ell = 0.0;
    double v = 0.0;
    double remainder_norm = 0.0;
};

struct PeelTrace {
    std::vector<PeelStep> steps;
    bool terminated = false;
    bool merged_nodes = false;
    int scalar_mode = 0;  // 0 float64, 1 double-double, 2 bigfloat, 3 exact rational
};

struct PeelOptions {
    // Cancellation noise in the peel is an *absolute* coefficient floor at
    // the scale of the input polynomials; everything below noise_rel times
    // that scale is structural zero. Negative values resolve to per-scalar
    // defaults (exact mode: 0, i.e. nothing is noise).
    double noise_rel = -1.0;
    // float64 keeps the documented relative termination gauge on the test
    // circle inside the gap; the other tiers terminate on the noise floor
    double tol_term_rel = -1.0;
    double mass_scale = 0.0;   // scale of the 1e-9 negative-mass tolerance; 0: m'(0)
    double merge_rel = 1e-12;  // coincident-node threshold, relative
    int max_steps = 4096;
};

template <class S>
struct PeelResult {
    StringData<S> string;
    PeelTrace trace;
};

namespace detail {

// working-precision noise floors, a few orders above each machine epsilon
template <class S>
constexpr double peel_noise_default() {
    if constexpr (scalar_traits<S>::exact) return 0.0;
    else if constexpr (std::is_same_v<S, DDReal>) return 1e-29;
    else if constexpr (std::is_same_v<S, BigFloat>) return 1e-148;
    else return 1e-13;
}

template <class S>
constexpr double peel_term_default() {
    if constexpr (std::is_same_v<S, double>) return 1e-10;
    else return 0.0;  // the noise floor is the only termination there
}

template <class S>
constexpr int peel_mode_id() {
    if constexpr (scalar_traits<S>::exact) return 3;
    else if constexpr (std::is_same_v<S, BigFloat>) return 2;
    else if constexpr (std::is_same_v<S, DDReal>) return 1;
    else return 0;
}

// coefficient-majorant of sup |num| on the circle of radius r; cheap, scale
// aware in every precision mode, and never terminates early when a pole
// strays inside the circle (the gauge only ever overestimates)
template <class S>
double peel_gauge(const Poly<S>& num, double r) {
    double acc = 0.0, rk = 1.0;
    for (int i = 0; i <= num.degree(); ++i) {
        acc += std::fabs(scalar_traits<S>::to_double(num[i])) * rk;
        rk *= r;
    }
    return acc;
}

}  // namespace detail

template <class S>
PeelResult<S> peel(const RatFun<S>& m_in, const PeelOptions& opts = {}) {
    using T = scalar_traits<S>;

    PeelResult<S> out;
    out.trace.scalar_mode = detail::peel_mode_id<S>();

    // absolute coefficient noise floor at the scale of the input: genuine
    // content shrinks through the peel while cancellation residue does not,
    // so the floor must not follow the shrinking polynomials
    const double c0scale =
        std::max(m_in.num().max_abs_coeff(), std::max(m_in.den().max_abs_coeff(), 1e-300));
    const double noise_rel =
        opts.noise_rel >= 0.0 ? opts.noise_rel : detail::peel_noise_default<S>();
    const double noise_abs = noise_rel * c0scale * 16.0;

    Poly<S> num = m_in.num().trimmed_abs(noise_abs);
    Poly<S> den = m_in.den().trimmed_abs(noise_abs);
    if (num.degree() > den.degree() + 1)
        throw Error("peel: m must grow at most linearly at infinity");

    // circle radius certified inside the spectral gap: |root| >= 1/(1+max|d_i|)
    double dmax = 0.0;
    for (int i = 1; i <= den.degree(); ++i)
        dmax = std::max(dmax, std::fabs(T::to_double(den[i])));
    const double r_circle = 0.5 / (1.0 + dmax);
    const double gauge0 = detail::peel_gauge(num, r_circle);
    const double term_rel =
        opts.tol_term_rel >= 0.0 ? opts.tol_term_rel : detail::peel_term_default<S>();
    const double term_abs = term_rel * gauge0;
    double mass_scale = opts.mass_scale;
    if (mass_scale <= 0.0 && num.degree() >= 1)
        mass_scale = std::fabs(T::to_double(num[1]));
    const double v_neg_tol = 1e-9 * mass_scale;

    std::vector<S> lengths, plateaus, masses;
    int steps_left = opts.max_steps;
    while (true) {
        if (--steps_left < 0) throw NonTerminating("peel: step limit exceeded");
        if (num.is_zero()) { out.trace.terminated = true; break; }
        if (term_abs > 0.0 && detail::peel_gauge(num, r_circle) <= term_abs) {
            out.trace.terminated = true;
            break;
        }
        const int dn = num.degree(), dd = den.degree();
        if (dn > dd) throw NonTerminating("peel: super-linear remainder mid-recursion");

        S c = T::zero();
        if (dn == dd) c = num.leading() / den.leading();
        Poly<S> rem = (num - den.scaled(c)).trimmed_abs(noise_abs);
        if (rem.is_zero()) throw NonTerminating("peel: nonzero constant remainder");
        if (rem.degree() != dd - 1)
            throw NonTerminating("peel: degree pattern breakdown after plateau strip");
        S limit = rem.leading() / den.leading();  // lim z (m - c)
        S ell = T::zero() - T::one() / limit;
        if (!(T::zero() < ell)) throw NegativeLength("peel: nonpositive interval length");

        PolyMat2<S> U = transfer_interval(ell, c);
        Poly<S> P = (U.e[3] * num + U.e[2] * den).trimmed_abs(noise_abs);
        Poly<S> Q = (U.e[1] * num + U.e[0] * den).trimmed_abs(noise_abs);
        S q0 = Q.coeff_or_zero(0);
        if (T::is_zero(q0)) throw NonTerminating("peel: denominator lost normalization");
        if (!(q0 == T::one())) {
            S inv = T::one() / q0;
            P = P.scaled(inv);
            Q = Q.scaled(inv);
        }

        S v = T::zero();
        if (P.degree() == Q.degree() + 1) {
            double lead = std::fabs(T::to_double(P.leading()));
            if (lead <= 4.0 * noise_abs && noise_abs > 0.0) {
                // super-linear residue at the noise floor, not a mass
                std::vector<S> pc(P.coeffs());
                pc.pop_back();
                P = Poly<S>(std::move(pc)).trimmed_abs(noise_abs);
            } else {
                v = P.leading() / Q.leading();
                double vd = T::to_double(v);
                if (vd < -v_neg_tol) throw NegativeMass("peel: negative point mass");
                if (vd < 0.0) {
                    // inside the negative-mass tolerance: clamp, never flip
                    std::vector<S> pc(P.coeffs());
                    pc.pop_back();
                    P = Poly<S>(std::move(pc)).trimmed_abs(noise_abs);
                    v = T::zero();
                } else {
                    P = (P - Q * Poly<S>(std::vector<S>{T::zero(), v})).trimmed_abs(noise_abs);
                }
            }
        }
        if (P.degree() + Q.degree() >= dn + dd)
            throw NonTerminating("peel: no degree reduction in a full step");

        lengths.push_back(ell);
        plateaus.push_back(c);
        masses.push_back(v);
        out.trace.steps.push_back({T::to_double(c), T::to_double(ell), T::to_double(v),
                                   detail::peel_gauge(P, r_circle)});
        num = std::move(P);
        den = std::move(Q);
    }

    // assembly: sub-resolution intervals merge into their left node, the
    // interval energy l c^2 concentrating as point mass; noise-level
    // (jump, mass)-trivial nodes join their neighbouring intervals
    std::vector<S> L2, C2, V2;
    double cum = 0.0;
    for (size_t k = 0; k < lengths.size(); ++k) {
        double eld = T::to_double(lengths[k]);
        // the threshold must dominate the profile constructor's coalescing
        // in x = log s coordinates, where dx = l/s: whatever the constructor
        // would merge lossily must be merged here with the interval energy
        // l c^2 absorbed as point mass
        double merge_tol =
            k > 0 ? 4.0 * opts.merge_rel * cum * (1.0 + std::fabs(std::log(cum))) : 0.0;
        if (k > 0 && eld < merge_tol) {
            V2.back() = V2.back() + masses[k] + lengths[k] * plateaus[k] * plateaus[k];
            out.trace.merged_nodes = true;
        } else {
            L2.push_back(lengths[k]);
            C2.push_back(plateaus[k]);
            V2.push_back(masses[k]);
        }
        cum += eld;
    }
    // surviving masses are genuine (noise was clamped above), so a trivial
    // node is one with zero mass and a jump at the noise scale of the
    // working precision; the plateau scale must come from the merged list,
    // after the degenerate mass-in-disguise intervals with exploding plateaus
    // are gone, and genuine jumps far below the plateau scale are kept
    double cmax = 0.0;
    for (const S& c : C2) cmax = std::max(cmax, std::fabs(T::to_double(c)));
    auto jump_trivial = [&](const S& delta) {
        if constexpr (T::exact) {
            return T::is_zero(delta);
        } else {
            return std::fabs(T::to_double(delta)) <= 1e3 * noise_rel * (1.0 + cmax);
        }
    };
    for (size_t k = 0; k + 1 < L2.size();) {
        if (T::is_zero(V2[k]) && jump_trivial(C2[k + 1] - C2[k])) {
            L2[k] = L2[k] + L2[k + 1];
            L2.erase(L2.begin() + k + 1);
            C2.erase(C2.begin() + k + 1);
            V2.erase(V2.begin() + k);
            out.trace.merged_nodes = true;
        } else {
            ++k;
        }
    }
    if (!L2.empty() && T::is_zero(V2.back()) && jump_trivial(C2.back())) {
        // a vanishing final jump with no mass means the string ends earlier
        L2.pop_back();
        C2.pop_back();
        V2.pop_back();
    }
    out.string = StringData<S>::from_plateaus(L2, C2, V2);
    return out;
}

// m(z) = sum gamma_k z / (lambda_k (lambda_k - z)) with the weights scaled by
// e^{-log_shift}; uniform weight scaling is exactly a spatial translation of
// the reconstructed pair, which the caller undoes.
template <class S>
RatFun<S> m_from_measure_shifted(const SpectralMeasure& rho, double log_shift) {
    using T = scalar_traits<S>;
    Poly<S> den = Poly<S>::constant(T::one());
    std::vector<Poly<S>> linear;
    linear.reserve(rho.size());
    for (const auto& a : rho.atoms()) {
        S inv_l = T::one() / T::from_double(a.lambda);
        linear.push_back(Poly<S>(std::vector<S>{T::one(), T::zero() - inv_l}));
        den = den * linear.back();
    }
    Poly<S> num;
    for (size_t k = 0; k < rho.size(); ++k) {
        const auto& a = rho.atom(k);
        double ghat = std::exp(a.log_gamma - log_shift);
        S coeff = T::from_double(ghat) / (T::from_double(a.lambda) * T::from_double(a.lambda));
        Poly<S> prod = Poly<S>::constant(coeff);
        for (size_t j = 0; j < rho.size(); ++j)
            if (j != k) prod = prod * linear[j];
        num = num + prod;
    }
    if (!std::isfinite(num.max_abs_coeff()) || !std::isfinite(den.max_abs_coeff()))
        throw Error("m_from_measure: weight range exceeds double range, rescale first");
    return RatFun<S>(num.shifted_up(1), den);
}

inline RatFun<double> m_from_measure(const SpectralMeasure& rho) {
    return m_from_measure_shifted<double>(rho, 0.0);
}

enum class PeelScalarMode { float64, dd, bigfloat, exact, auto_mode };

struct InverseOptions {
    PeelScalarMode mode = PeelScalarMode::auto_mode;
    PeelOptions peel;
};

struct InverseResult {
    PeakonProfile profile;
    PeelTrace trace;
};

InverseResult inverse_transform_detail(const SpectralMeasure& rho,
                                       const InverseOptions& opts = {});
PeakonProfile inverse_transform(const SpectralMeasure& rho);

}  // namespace chflow
