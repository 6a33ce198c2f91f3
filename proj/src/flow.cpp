#include "chflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chflow/quad.hpp"

namespace chflow {

SpectralMeasure evolve_measure(const SpectralMeasure& rho, double t) {
    std::vector<SpectralAtom> atoms = rho.atoms();
    for (auto& a : atoms) a.log_gamma -= t / (2.0 * a.lambda);
    return SpectralMeasure(std::move(atoms));
}

FlowDetail flow_at_detail(const PeakonProfile& initial, double t, PeelScalarMode mode) {
    if (initial.empty()) {
        PeelTrace trace;
        trace.terminated = true;
        return {PeakonProfile(), false, trace};
    }
    SpectralMeasure rho = evolve_measure(direct_transform(initial), t);
    InverseOptions opts;
    opts.mode = mode;
    InverseResult inv = inverse_transform_detail(rho, opts);
    FlowDetail d;
    d.collision_degenerate = inv.trace.merged_nodes || inv.profile.merged_on_construction();
    d.trace = inv.trace;
    d.state = std::move(inv.profile);
    return d;
}

PeakonProfile flow_at(const PeakonProfile& initial, double t) {
    return flow_at_detail(initial, t).state;
}

namespace {

uint64_t fnv_hash(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

ConservedRecord conserved_record(const PeakonProfile& state) {
    ConservedRecord r;
    SpectralMeasure rho = direct_transform(state);
    std::string key;
    char buf[40];
    for (const auto& a : rho.atoms()) {
        std::snprintf(buf, sizeof buf, "%.12e;", a.lambda);
        key += buf;
    }
    r.lambda_set_hash = fnv_hash(key);
    r.half_sum_lambda_minus2 = 0.5 * trace_sum(rho, 2.0, false);
    r.mu_total = mu_total(state);
    r.E = compute_E(state);
    for (double p : {1.5, 2.0, 3.0}) r.Ep[p] = compute_Ep(state, p);
    r.omega_total = momentum_total(state);
    r.in_D_plus = membership(state).in_D_plus;
    r.u_plus_ux_sup = sup_u_plus_ux(state);
    return r;
}

Trajectory run_trajectory(const PeakonProfile& initial, std::vector<double> times) {
    if (!std::is_sorted(times.begin(), times.end()))
        throw Error("run_trajectory: times must be sorted");
    Trajectory traj;
    traj.initial = initial;
    traj.times = std::move(times);
    traj.states.reserve(traj.times.size());
    traj.ledger.reserve(traj.times.size());
    for (double t : traj.times) {
        FlowDetail d = flow_at_detail(initial, t);
        traj.ledger.push_back(conserved_record(d.state));
        traj.collision_flags.push_back(d.collision_degenerate);
        traj.states.push_back(std::move(d.state));
    }
    return traj;
}

IsospectralCoordinates isospectral_coordinates(const PeakonProfile& profile,
                                               const SpectralMeasure& reference) {
    SpectralMeasure rho = direct_transform(profile);
    if (rho.size() != reference.size())
        throw SpectrumMismatch("isospectral_coordinates: atom counts differ");
    IsospectralCoordinates iso;
    iso.reference = reference;
    iso.log_theta.reserve(reference.size());
    for (size_t k = 0; k < reference.size(); ++k) {
        double l0 = reference.atom(k).lambda, l1 = rho.atom(k).lambda;
        if (std::fabs(l1 - l0) > 1e-10 * (1.0 + std::fabs(l0)))
            throw SpectrumMismatch("isospectral_coordinates: eigenvalues differ");
        iso.log_theta.push_back(rho.atom(k).log_gamma - reference.atom(k).log_gamma);
    }
    return iso;
}

SpectralMeasure discretize_measure(const ContinuousMeasureSpec& spec, int bins) {
    if (bins < 1) throw Error("discretize_measure: bins must be >= 1");
    std::vector<std::pair<double, double>> collected;
    for (const auto& piece : spec.pieces) {
        if (!(piece.a < piece.b)) throw Error("discretize_measure: empty support piece");
        if (spec.declared_gap > 0.0 &&
            std::max(piece.a, -piece.b) < spec.declared_gap &&
            std::min(std::fabs(piece.a), std::fabs(piece.b)) < spec.declared_gap)
            throw Error("discretize_measure: support intersects the declared gap");
        if (piece.a < 0.0 && piece.b > 0.0)
            throw Error("discretize_measure: support must avoid zero");
        double width = (piece.b - piece.a) / bins;
        for (int i = 0; i < bins; ++i) {
            double lo = piece.a + i * width, hi = lo + width;
            double mass;
            try {
                mass = adaptive_simpson(piece.density, lo, hi, 1e-12 * (1.0 + width));
            } catch (const Error&) {
                throw QuadratureFailure("discretize_measure: bin mass quadrature failed");
            }
            if (!(mass >= 0.0) || !std::isfinite(mass))
                throw QuadratureFailure("discretize_measure: invalid bin mass");
            if (mass == 0.0) continue;
            double at = std::fabs(hi) >= std::fabs(lo) ? hi : lo;  // maximize lambda^2
            collected.push_back({at, mass});
        }
    }
    for (const auto& a : spec.atoms) collected.push_back(a);
    // coalesce coincident placements
    std::sort(collected.begin(), collected.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [l, g] : collected) {
        if (!merged.empty() && l - merged.back().first <= 1e-14 * (1.0 + std::fabs(l)))
            merged.back().second += g;
        else
            merged.push_back({l, g});
    }
    return SpectralMeasure::from_values(merged);
}

double herglotz_distance(const RatFun<double>& m1, const RatFun<double>& m2,
                         const std::vector<std::complex<double>>& grid) {
    if (grid.empty()) throw Error("herglotz_distance: empty grid");
    double d = 0.0;
    for (auto z : grid) {
        if (z.imag() == 0.0) throw Error("herglotz_distance: grid must avoid the real axis");
        d = std::max(d, std::abs(m1.eval(z) - m2.eval(z)));
    }
    return d;
}

namespace {

double min_adjacent_gap(const PeakonProfile& p) {
    if (p.size() < 2) return HUGE_VAL;
    double g = HUGE_VAL;
    for (size_t i = 0; i + 1 < p.size(); ++i)
        g = std::min(g, p.node(i + 1).x - p.node(i).x);
    return g;
}

}  // namespace

std::vector<CollisionEvent> find_collisions(const PeakonProfile& initial, double t0, double t1,
                                            double tol_t) {
    std::vector<CollisionEvent> events;
    if (initial.size() < 2 || !(t0 < t1)) return events;
    const int samples = 256;
    const double step = (t1 - t0) / samples;
    // a merged reconstruction is a zero gap, not a missing one; otherwise the
    // scan sees an infinity spike at the collision and reports two flanking
    // minima
    auto gap_at = [&](double t) {
        FlowDetail d = flow_at_detail(initial, t);
        if (d.collision_degenerate || d.state.size() < initial.size()) return 0.0;
        return min_adjacent_gap(d.state);
    };
    std::vector<double> ts(samples + 1), gaps(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        ts[i] = t0 + step * i;
        gaps[i] = gap_at(ts[i]);
    }
    for (int i = 1; i < samples; ++i) {
        if (!(gaps[i] <= gaps[i - 1] && gaps[i] <= gaps[i + 1])) continue;
        // golden-section refine the local minimum down to tol_t
        double a = ts[i - 1], b = ts[i + 1];
        const double inv_phi = 0.6180339887498949;
        double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
        double f1 = gap_at(x1), f2 = gap_at(x2);
        while (b - a > tol_t) {
            if (f1 <= f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = gap_at(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = gap_at(x2);
            }
        }
        double tstar = 0.5 * (a + b);
        // inside the merge plateau the gap is identically zero and the
        // golden section stalls at an edge; bisecting both edges centers the
        // event on the true instant
        if (gap_at(tstar) == 0.0) {
            double lo_out = tstar - step, lo_in = tstar;
            while (lo_in - lo_out > tol_t) {
                double mid = 0.5 * (lo_out + lo_in);
                (gap_at(mid) == 0.0 ? lo_in : lo_out) = mid;
            }
            double hi_in = tstar, hi_out = tstar + step;
            while (hi_out - hi_in > tol_t) {
                double mid = 0.5 * (hi_in + hi_out);
                (gap_at(mid) == 0.0 ? hi_in : hi_out) = mid;
            }
            tstar = 0.5 * (lo_in + hi_in);
        }
        FlowDetail d = flow_at_detail(initial, tstar);
        double g = min_adjacent_gap(d.state);
        // an actual collision collapses the gap to numeric resolution and the
        // reconstruction concentrates energy in h; near misses keep a
        // macroscopic gap
        if (g <= 1e-6 || d.collision_degenerate) {
            CollisionEvent ev;
            ev.t = tstar;
            size_t best = 0;
            double hmax = -1.0;
            for (size_t k = 0; k < d.state.size(); ++k)
                if (d.state.node(k).h > hmax) { hmax = d.state.node(k).h; best = k; }
            ev.x = d.state.empty() ? 0.0 : d.state.node(best).x;
            ev.h = d.state.empty() ? 0.0 : d.state.node(best).h;
            // events closer than the scan resolution are the same event
            if (events.empty() || std::fabs(ev.t - events.back().t) > step)
                events.push_back(ev);
        }
    }
    return events;
}

}  // namespace chflow
