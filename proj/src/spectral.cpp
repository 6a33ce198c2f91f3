#include "chflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chflow/bigfloat.hpp"
#include "chflow/ddreal.hpp"
#include "chflow/errors.hpp"

namespace chflow {

SpectralMeasure::SpectralMeasure(std::vector<SpectralAtom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const SpectralAtom& a, const SpectralAtom& b) { return a.lambda < b.lambda; });
    for (size_t k = 0; k < atoms_.size(); ++k) {
        if (atoms_[k].lambda == 0.0 || !std::isfinite(atoms_[k].lambda))
            throw Error("SpectralMeasure: eigenvalues must be nonzero and finite");
        if (!std::isfinite(atoms_[k].log_gamma))
            throw Error("SpectralMeasure: non-finite weight");
        if (k > 0 && !(atoms_[k - 1].lambda < atoms_[k].lambda))
            throw Error("SpectralMeasure: eigenvalues must be distinct");
    }
}

SpectralMeasure SpectralMeasure::from_values(
    const std::vector<std::pair<double, double>>& lambda_gamma) {
    std::vector<SpectralAtom> atoms;
    atoms.reserve(lambda_gamma.size());
    for (const auto& [l, g] : lambda_gamma) {
        if (!(g > 0.0)) throw NonPositiveWeight("SpectralMeasure: weight must be positive");
        atoms.push_back({l, std::log(g)});
    }
    return SpectralMeasure(std::move(atoms));
}

double SpectralMeasure::gap() const {
    double g = HUGE_VAL;
    for (const auto& a : atoms_) g = std::min(g, std::fabs(a.lambda));
    return g;
}

bool SpectralMeasure::positive_support() const {
    for (const auto& a : atoms_)
        if (a.lambda <= 0.0) return false;
    return true;
}

SpectralMeasure extract_measure(const RatFun<double>& m) {
    if (m.is_zero()) return SpectralMeasure();
    if (m.den().degree() < 1)
        throw Error("extract_measure: m has no poles but is not zero");
    std::vector<double> poles;
    {
        RootResult rr = poly_roots(m.den(), 1e-13);
        for (auto z : rr.roots) {
            if (std::fabs(z.imag()) > 1e-8 * (1.0 + std::abs(z)))
                throw NonRealPole("extract_measure: non-real pole of the Weyl function");
            poles.push_back(z.real());
        }
    }
    std::sort(poles.begin(), poles.end());
    for (size_t k = 0; k + 1 < poles.size(); ++k)
        if (!(poles[k + 1] - poles[k] > 1e-12 * (1.0 + std::fabs(poles[k]))))
            throw NonSimplePole("extract_measure: poles not simple");

    std::vector<SpectralAtom> atoms;
    atoms.reserve(poles.size());
    double max_gamma = 0.0;
    std::vector<double> gammas;
    for (double pole : poles) {
        if (std::fabs(pole) < 1e-14) throw Error("extract_measure: pole at the origin");
        double g = -residue(m, pole);
        gammas.push_back(g);
        max_gamma = std::max(max_gamma, g);
    }
    for (size_t k = 0; k < poles.size(); ++k) {
        double g = gammas[k];
        if (g <= 0.0) {
            // below -1e-10*max is structurally outside the class; small
            // negatives are still a hard error, never a sign flip
            throw NonPositiveWeight(
                g < -1e-10 * max_gamma
                    ? "extract_measure: negative weight, data outside the Weyl class"
                    : "extract_measure: non-positive weight at roundoff scale");
        }
        atoms.push_back({poles[k], std::log(g)});
    }
    return SpectralMeasure(std::move(atoms));
}

HerglotzData herglotz_data(const SpectralMeasure& rho) {
    HerglotzData h;
    h.c1 = 0.0;
    double c2 = 0.0;
    for (const auto& a : rho.atoms())
        c2 += a.gamma() * (a.lambda / (1.0 + a.lambda * a.lambda) - 1.0 / a.lambda);
    h.c2 = c2;
    h.measure = rho;
    return h;
}

double spectral_gap(const SpectralMeasure& rho) { return rho.gap(); }

namespace {

// minimal complex arithmetic over an extended-precision real scalar
template <class S>
struct CS {
    S re, im;
};

template <class S>
CS<S> cs_add(const CS<S>& a, const CS<S>& b) {
    return {a.re + b.re, a.im + b.im};
}
template <class S>
CS<S> cs_sub(const CS<S>& a, const CS<S>& b) {
    return {a.re - b.re, a.im - b.im};
}
template <class S>
CS<S> cs_mul(const CS<S>& a, const CS<S>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class S>
CS<S> cs_div(const CS<S>& a, const CS<S>& b) {
    S n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
template <class S>
double cs_abs(const CS<S>& a) {
    return std::hypot(scalar_traits<S>::to_double(a.re), scalar_traits<S>::to_double(a.im));
}
template <class S>
CS<S> cs_eval(const Poly<S>& p, const CS<S>& z) {
    CS<S> acc{scalar_traits<S>::zero(), scalar_traits<S>::zero()};
    for (int i = p.degree(); i >= 0; --i) {
        acc = cs_mul(acc, z);
        acc.re = acc.re + p[i];
    }
    return acc;
}

// simultaneous Aberth-Ehrlich polish in the working scalar: clustered
// eigenvalues at high degree are past what double coefficients resolve, so
// the double seeds are refined jointly here
template <class S>
void aberth_refine(const Poly<S>& p, const Poly<S>& dp, std::vector<CS<S>>& z, double eps) {
    const int n = static_cast<int>(z.size());
    const CS<S> one{scalar_traits<S>::one(), scalar_traits<S>::zero()};
    for (int iter = 0; iter < 200; ++iter) {
        bool all_small = true;
        for (int k = 0; k < n; ++k) {
            CS<S> v = cs_eval(p, z[k]);
            CS<S> d = cs_eval(dp, z[k]);
            if (cs_abs(d) == 0.0) continue;
            CS<S> newton = cs_div(v, d);
            CS<S> sum{scalar_traits<S>::zero(), scalar_traits<S>::zero()};
            for (int j = 0; j < n; ++j)
                if (j != k) sum = cs_add(sum, cs_div(one, cs_sub(z[k], z[j])));
            CS<S> denom = cs_sub(one, cs_mul(newton, sum));
            CS<S> w = cs_abs(denom) < 1e-300 ? newton : cs_div(newton, denom);
            z[k] = cs_sub(z[k], w);
            if (cs_abs(w) > eps * (1.0 + cs_abs(z[k]))) all_small = false;
        }
        if (all_small) break;
    }
}

template <class S>
constexpr double hp_eps() {
    if constexpr (std::is_same_v<S, DDReal>) return 1e-30;
    else return 1e-145;
}

// Direct transform in an extended-precision scalar: weakly coupled nodes
// carry spectral weights far below the plain-double cancellation floor of the
// transfer product, and their residues need the extra digits to keep a sign.
// Roots come from the reversed denominator (den(0) = 1 keeps its leading
// coefficient perfectly conditioned) seeded in double and refined jointly in
// S; residues are evaluated in S.
template <class S>
SpectralMeasure extract_measure_hp(const RatFun<S>& m, double& min_rel_weight) {
    min_rel_weight = 1.0;
    if (m.is_zero()) return SpectralMeasure();
    Poly<S> rev;
    {
        std::vector<S> rc;
        for (int i = m.den().degree(); i >= 0; --i) rc.push_back(m.den()[i]);
        rev = Poly<S>(std::move(rc));
    }
    std::vector<CS<S>> roots_rev;
    {
        std::vector<double> dc;
        for (int i = 0; i <= rev.degree(); ++i)
            dc.push_back(scalar_traits<S>::to_double(rev[i]));
        RootResult rr = poly_roots(Poly<double>(std::move(dc)), 1e-250);
        for (auto w : rr.roots)
            roots_rev.push_back({scalar_traits<S>::from_double(w.real()),
                                 scalar_traits<S>::from_double(w.imag())});
    }
    aberth_refine(rev, rev.derivative(), roots_rev, hp_eps<S>());

    Poly<S> dprime = m.den().derivative();
    std::vector<double> poles, gammas;
    double max_gamma = 0.0;
    for (const auto& w : roots_rev) {
        double w_re = scalar_traits<S>::to_double(w.re);
        double w_im = scalar_traits<S>::to_double(w.im);
        if (std::fabs(w_im) > 1e6 * hp_eps<S>() * (1.0 + std::hypot(w_re, w_im)))
            throw NonRealPole("extract_measure: non-real pole of the Weyl function");
        if (w_re == 0.0) throw Error("extract_measure: zero root of the reversed denominator");
        S root = scalar_traits<S>::one() / w.re;
        for (int it = 0; it < 3; ++it) {
            S d = dprime(root);
            if (scalar_traits<S>::is_zero(d)) break;
            root = root - m.den()(root) / d;
        }
        double r = scalar_traits<S>::to_double(root);
        if (std::fabs(r) < 1e-14) throw Error("extract_measure: pole at the origin");
        double g = -scalar_traits<S>::to_double(m.num()(root) / dprime(root));
        poles.push_back(r);
        gammas.push_back(g);
        max_gamma = std::max(max_gamma, g);
    }
    {
        std::vector<size_t> order(poles.size());
        for (size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return poles[a] < poles[b]; });
        std::vector<double> ps, gs;
        for (size_t k : order) {
            ps.push_back(poles[k]);
            gs.push_back(gammas[k]);
        }
        poles = std::move(ps);
        gammas = std::move(gs);
    }
    for (size_t k = 0; k + 1 < poles.size(); ++k)
        if (!(poles[k + 1] - poles[k] > 1e-12 * (1.0 + std::fabs(poles[k]))))
            throw NonSimplePole("extract_measure: poles not simple");
    std::vector<SpectralAtom> atoms;
    for (size_t k = 0; k < poles.size(); ++k) {
        if (gammas[k] <= 0.0)
            throw NonPositiveWeight(
                gammas[k] < -1e-10 * max_gamma
                    ? "extract_measure: negative weight, data outside the Weyl class"
                    : "extract_measure: non-positive weight at roundoff scale");
        min_rel_weight = std::min(min_rel_weight, gammas[k] / max_gamma);
        atoms.push_back({poles[k], std::log(gammas[k])});
    }
    return SpectralMeasure(std::move(atoms));
}

template <class S>
SpectralMeasure direct_transform_tier(const PeakonProfile& profile, double& min_rel_weight) {
    std::vector<StringNode<S>> nodes;
    nodes.reserve(profile.size());
    for (const auto& n : profile.nodes()) {
        S s = scalar_traits<S>::from_double(std::exp(n.x));
        nodes.push_back({s, scalar_traits<S>::from_double(n.p) / s,
                         scalar_traits<S>::from_double(n.h) / s});
    }
    return extract_measure_hp(weyl_function(StringData<S>(std::move(nodes))), min_rel_weight);
}

}  // namespace

SpectralMeasure direct_transform(const PeakonProfile& profile) {
    if (profile.empty()) return SpectralMeasure();
    double min_rel = 0.0;
    try {
        SpectralMeasure rho = direct_transform_tier<DDReal>(profile, min_rel);
        double min_sep = HUGE_VAL;
        for (size_t k = 0; k + 1 < rho.size(); ++k)
            min_sep = std::min(min_sep, (rho.atom(k + 1).lambda - rho.atom(k).lambda) /
                                            (1.0 + std::fabs(rho.atom(k).lambda)));
        // trustworthy when weights sit inside the double-double headroom and
        // the eigenvalues are not clustered
        if (min_rel > 1e-18 && min_sep > 0.03) return rho;
    } catch (const NonPositiveWeight&) {
    } catch (const NonRealPole&) {
    } catch (const NonSimplePole&) {
    }
    return direct_transform_tier<BigFloat>(profile, min_rel);
}

GapSandwichReport gap_sandwich_report(const PeakonProfile& profile) {
    GapSandwichReport r;
    r.E = compute_E(profile);
    SpectralMeasure rho = direct_transform(profile);
    r.lambda0 = rho.gap();
    if (rho.empty()) {
        r.lower = 0.0;
        r.upper = 0.0;
        r.pass = r.E == 0.0;
        return r;
    }
    r.lower = 1.0 / (6.0 * r.lambda0);
    r.upper = std::sqrt(2.0) / r.lambda0;
    const double slack = 1.0 + 1e-12;
    r.pass = r.lower <= r.E * slack && r.E <= r.upper * slack;
    MembershipReport mem = membership(profile);
    if (mem.in_D_plus) {
        double sup = sup_u_plus_ux(profile);
        r.u_plus_ux_sup = sup;
        r.sup_pass = r.lower <= sup * slack && sup <= 2.0 * std::sqrt(2.0) / r.lambda0 * slack;
    }
    return r;
}

double trace_sum(const SpectralMeasure& rho, double p, bool signed_sum) {
    if (!(p > 0.0)) throw Error("trace_sum: requires p > 0");
    double acc = 0.0;
    for (const auto& a : rho.atoms()) {
        double term = std::exp(-p * std::log(std::fabs(a.lambda)));
        acc += signed_sum && a.lambda < 0.0 ? -term : term;
    }
    return acc;
}

double weighted_moment(const SpectralMeasure& rho, int q) {
    double acc = 0.0;
    for (const auto& a : rho.atoms()) {
        double term = std::exp(a.log_gamma - q * std::log(std::fabs(a.lambda)));
        if (q % 2 == 1 && a.lambda < 0.0) term = -term;
        acc += term;
    }
    return acc;
}

IdentityReport identity_lambda2(const PeakonProfile& profile) {
    IdentityReport r;
    r.lhs = exp_weighted_energy(profile);
    SpectralMeasure rho = direct_transform(profile);
    r.rhs = weighted_moment(rho, 2);
    double scale = std::max({std::fabs(r.lhs), std::fabs(r.rhs), 1e-300});
    r.pass = std::fabs(r.lhs - r.rhs) <= 1e-9 * scale;
    return r;
}

ClassifyReport classify(const SpectralMeasure& rho, const PeakonProfile& profile) {
    ClassifyReport r;
    r.positive_spectrum = !rho.empty() && rho.positive_support();
    r.positive_coefficients = !profile.empty();
    for (const auto& n : profile.nodes())
        if (n.h != 0.0 || n.p <= 0.0) { r.positive_coefficients = false; break; }
    if (r.positive_spectrum != r.positive_coefficients)
        throw InconsistentClassification(
            "classify: spectral positivity disagrees with coefficient positivity");
    if (r.positive_spectrum) {
        r.chain_spectral = weighted_moment(rho, 1);
        // independent route: e^{-x}(u + u') evaluated far below the support
        double x_far = profile.node(0).x - 40.0;
        r.chain_limit = std::exp(-x_far) * eval_u(profile, x_far, EvalMode::u_plus_ux);
        r.chain_omega = exp_weighted_omega(profile);
        double ref = std::max({std::fabs(r.chain_spectral), std::fabs(r.chain_limit),
                               std::fabs(r.chain_omega), 1e-300});
        r.max_rel_deviation =
            std::max({std::fabs(r.chain_spectral - r.chain_limit),
                      std::fabs(r.chain_spectral - r.chain_omega),
                      std::fabs(r.chain_limit - r.chain_omega)}) /
            ref;
    }
    return r;
}

bool herglotz_sample_check(const RatFun<double>& m, int samples, uint64_t seed) {
    if (m.is_zero()) return true;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(1e-3, 10.0);
    for (int i = 0; i < samples; ++i) {
        std::complex<double> z(re(rng), im(rng));
        if (!(m.eval(z).imag() > 0.0)) return false;
    }
    return true;
}

namespace {

// Weyl value of the admissible extremal tail w(s) = sign * sqrt(tb)/s beyond
// X, propagated numerically on a geometric grid with zero completion.
std::complex<double> extremal_tail_weyl(double x_start, double tail_bound, int sign,
                                        std::complex<double> z) {
    if (tail_bound == 0.0) return 0.0;
    SampledString tail;
    const int cells = 220;
    double amp = sign * std::sqrt(tail_bound);
    double ratio = std::pow(1e5, 1.0 / cells);  // reach 1e5 * X
    double pos = x_start;
    for (int i = 0; i < cells; ++i) {
        double next = pos * ratio;
        // shift to the tail's own coordinates starting at 0
        tail.grid.push_back(next - x_start);
        tail.w_values.push_back(amp / (0.5 * (pos + next)));
        pos = next;
    }
    Mat2c y = propagate_numeric(tail, z);
    return -y.c / y.d;
}

}  // namespace

WeylNumericResult weyl_numeric(const SampledString& s, std::complex<double> z) {
    s.validate();
    if (z.imag() == 0.0) {
        // real z admitted only inside the certified spectral gap
        double e_sq = 0.0;
        for (size_t i = 0; i < s.grid.size(); ++i) {
            double lo = i == 0 ? 0.0 : s.grid[i - 1];
            e_sq += s.w_values[i] * s.w_values[i] * (s.grid[i] - lo);
        }
        for (const auto& [pos, mass] : s.upsilon_atoms) e_sq += mass;
        double E_hat = std::sqrt(s.x_max() * e_sq + s.tail_bound);
        double gap_lower = 1.0 / (6.0 * std::max(E_hat, 1e-300));
        if (std::fabs(z.real()) >= gap_lower)
            throw TruncationDominates("weyl_numeric: real z not certified inside the gap");
    }
    Mat2c y = propagate_numeric(s, z);
    WeylNumericResult r;
    // the X -> infinity limit of -Y11/Y12 under the zero-tail completion is
    // the Moebius image of m_tail = 0, i.e. -W21/W22
    auto completed = [&](std::complex<double> m_tail) {
        return (y.a * m_tail - y.c) / (y.d - y.b * m_tail);
    };
    r.value = completed(0.0);
    // error bar: spread over the extremal admissible tail completions
    std::complex<double> lo = extremal_tail_weyl(s.x_max(), s.tail_bound, -1, z);
    std::complex<double> hi = extremal_tail_weyl(s.x_max(), s.tail_bound, +1, z);
    r.error_estimate = std::max(std::abs(completed(lo) - r.value),
                                std::abs(completed(hi) - r.value));
    return r;
}

}  // namespace chflow
