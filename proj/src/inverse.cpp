#include "chflow/inverse.hpp"

#include <cmath>

namespace chflow {

namespace {

template <class S>
StringData<double> to_double_string(const StringData<S>& s) {
    std::vector<StringNode<double>> nodes;
    nodes.reserve(s.size());
    for (const auto& n : s.nodes())
        nodes.push_back({scalar_traits<S>::to_double(n.s), scalar_traits<S>::to_double(n.jump),
                         scalar_traits<S>::to_double(n.v)});
    return StringData<double>(std::move(nodes));
}

template <class S>
InverseResult run_inverse(const SpectralMeasure& rho, double log_shift, const InverseOptions& opts) {
    RatFun<S> m = m_from_measure_shifted<S>(rho, log_shift);
    PeelOptions popts = opts.peel;
    if (popts.mass_scale <= 0.0) {
        double acc = 0.0;
        for (const auto& a : rho.atoms()) acc += std::exp(a.log_gamma - log_shift);
        popts.mass_scale = acc;
    }
    if constexpr (scalar_traits<S>::exact) {
        // the measure data is dyadic, not exact: run the rational peel with
        // a double-precision noise floor instead of the pure-exact zero one
        if (popts.noise_rel < 0.0) popts.noise_rel = 1e-13;
        if (popts.tol_term_rel < 0.0) popts.tol_term_rel = 1e-12;
    }
    PeelResult<S> peeled = peel(m, popts);
    PeakonProfile hat = from_dual_string(to_double_string(peeled.string));
    // undo the weight centering: gamma -> gamma e^{-L} translated x by +L
    std::vector<PeakonNode> nodes(hat.nodes());
    for (auto& n : nodes) n.x -= log_shift;
    InverseResult r{PeakonProfile(std::move(nodes)), peeled.trace};
    r.trace.merged_nodes = r.trace.merged_nodes || hat.merged_on_construction() ||
                           r.profile.merged_on_construction();
    return r;
}

}  // namespace

InverseResult inverse_transform_detail(const SpectralMeasure& rho, const InverseOptions& opts) {
    if (rho.empty()) {
        PeelTrace trace;
        trace.terminated = true;
        return {PeakonProfile(), trace};
    }
    if (!(rho.gap() > 0.0)) throw Error("inverse_transform: measure has no spectral gap");
    double log_shift = rho.atom(0).log_gamma;
    double log_min = rho.atom(0).log_gamma;
    for (const auto& a : rho.atoms()) {
        log_shift = std::max(log_shift, a.log_gamma);
        log_min = std::min(log_min, a.log_gamma);
    }
    const double spread = log_shift - log_min;
    double min_sep = HUGE_VAL;
    for (size_t k = 0; k + 1 < rho.size(); ++k)
        min_sep = std::min(min_sep, (rho.atom(k + 1).lambda - rho.atom(k).lambda) /
                                        (1.0 + std::fabs(rho.atom(k).lambda)));

    switch (opts.mode) {
        case PeelScalarMode::float64:
            return run_inverse<double>(rho, log_shift, opts);
        case PeelScalarMode::dd:
            return run_inverse<DDReal>(rho, log_shift, opts);
        case PeelScalarMode::bigfloat:
            return run_inverse<BigFloat>(rho, log_shift, opts);
        case PeelScalarMode::exact:
            return run_inverse<Rational>(rho, log_shift, opts);
        case PeelScalarMode::auto_mode: {
            // pick the cheapest tier whose cancellation headroom covers the
            // weight spread; clustered eigenvalues behave like near-collision
            // data and amplify the loss, so they also bump the tier
            if (spread < 26.0 && min_sep > 0.03) {
                try {
                    return run_inverse<DDReal>(rho, log_shift, opts);
                } catch (const NegativeLength&) {
                } catch (const NegativeMass&) {
                } catch (const NonTerminating&) {
                }
            }
            if (spread < 280.0) {
                try {
                    return run_inverse<BigFloat>(rho, log_shift, opts);
                } catch (const NegativeLength&) {
                } catch (const NegativeMass&) {
                } catch (const NonTerminating&) {
                }
            }
            // last resort: exact rationals on the dyadic data (cost grows per
            // step, acceptable at small atom counts where degeneracies live)
            return run_inverse<Rational>(rho, log_shift, opts);
        }
    }
    throw Error("inverse_transform: unreachable");
}

PeakonProfile inverse_transform(const SpectralMeasure& rho) {
    return inverse_transform_detail(rho).profile;
}

}  // namespace chflow
