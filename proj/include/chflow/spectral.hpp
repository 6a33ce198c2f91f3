// Direct spectral transform: Weyl-Titchmarsh function of a string, the
// spectral measure encoded by its poles and residues, gap estimates,
// classification predicates and the trace-formula identities.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "chflow/peakon.hpp"
#include "chflow/ratfun.hpp"
#include "chflow/string_data.hpp"

namespace chflow {

struct SpectralAtom {
    double lambda = 0.0;     // eigenvalue, nonzero
    double log_gamma = 0.0;  // weights stored in the log domain
    double gamma() const { return std::exp(log_gamma); }
};

class SpectralMeasure {
public:
    SpectralMeasure() = default;
    explicit SpectralMeasure(std::vector<SpectralAtom> atoms);
    static SpectralMeasure from_values(const std::vector<std::pair<double, double>>& lambda_gamma);

    size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const std::vector<SpectralAtom>& atoms() const { return atoms_; }
    const SpectralAtom& atom(size_t k) const { return atoms_[k]; }

    // min |lambda|; +inf marker on the empty measure
    double gap() const;
    bool positive_support() const;

private:
    std::vector<SpectralAtom> atoms_;  // sorted by lambda, distinct, nonzero
};

struct HerglotzData {
    double c1 = 0.0;  // always 0 for strings with no mass at the origin
    double c2 = 0.0;
    SpectralMeasure measure;
};

// m = -W21/W22 of the total transfer; m(0) = 0 and Herglotz in the upper
// half-plane by construction.
template <class S>
RatFun<S> weyl_function(const StringData<S>& s) {
    PolyMat2<S> w = total_transfer(s);
    return RatFun<S>(w.e[2].scaled(scalar_traits<S>::zero() - scalar_traits<S>::one()), w.e[3]);
}

// -Y11/Y12 at X_max with an error estimate driven by the tail certificate.
struct WeylNumericResult {
    std::complex<double> value;
    double error_estimate = 0.0;
};
WeylNumericResult weyl_numeric(const SampledString& s, std::complex<double> z);

// poles and residues of m; rejects data outside the Weyl class loudly
SpectralMeasure extract_measure(const RatFun<double>& m);

HerglotzData herglotz_data(const SpectralMeasure& rho);

double spectral_gap(const SpectralMeasure& rho);

struct GapSandwichReport {
    double E = 0.0;
    double lambda0 = 0.0;
    double lower = 0.0;  // 1/(6 lambda0)
    double upper = 0.0;  // sqrt(2)/lambda0
    bool pass = false;
    // D+ only: 1/(6 lambda0) <= ||u+u'||_inf <= 2 sqrt(2)/lambda0
    std::optional<double> u_plus_ux_sup;
    std::optional<bool> sup_pass;
};
GapSandwichReport gap_sandwich_report(const PeakonProfile& profile);

// sum over eigenvalues of |lambda|^{-p} (signed: of sign(lambda)|lambda|^{-p})
double trace_sum(const SpectralMeasure& rho, double p, bool signed_sum);

// sum gamma_k / lambda_k^q
double weighted_moment(const SpectralMeasure& rho, int q);

struct IdentityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};
// int e^{-x} u^2 dx + int e^{-x} dmu  ==  sum gamma_k / lambda_k^2
IdentityReport identity_lambda2(const PeakonProfile& profile);

struct ClassifyReport {
    bool positive_spectrum = false;
    bool positive_coefficients = false;  // all h == 0 and all p > 0
    // positive case: sum gamma/lambda vs lim e^{-x}(u+u') vs int e^{-x} d omega
    double chain_spectral = 0.0;
    double chain_limit = 0.0;
    double chain_omega = 0.0;
    double max_rel_deviation = 0.0;
};
ClassifyReport classify(const SpectralMeasure& rho, const PeakonProfile& profile);

// direct transform of a profile (composition of to_dual_string, weyl_function
// and extract_measure)
SpectralMeasure direct_transform(const PeakonProfile& profile);

// diagnostic: Im m(z) > 0 sampled at random points of the upper half-plane
bool herglotz_sample_check(const RatFun<double>& m, int samples, uint64_t seed);

}  // namespace chflow
