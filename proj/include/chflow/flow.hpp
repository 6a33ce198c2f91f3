// The conservative flow: exact evolution of spectral measures in the log
// domain, reconstruction at arbitrary times (no time stepping), conservation
// ledgers, isospectral coordinates, collision events, and discretization of
// continuous spectral data.
#pragma once

#include <complex>
#include <functional>
#include <map>

#include "chflow/inverse.hpp"

namespace chflow {

// log gamma_k(t) = log gamma_k(0) - t/(2 lambda_k); atoms and gap unchanged
SpectralMeasure evolve_measure(const SpectralMeasure& rho, double t);

struct FlowDetail {
    PeakonProfile state;
    bool collision_degenerate = false;  // the peel merged sub-resolution nodes
    PeelTrace trace;
};

// Phi^t by the inverse spectral transform; each time is reconstructed from
// the t = 0 data independently.
PeakonProfile flow_at(const PeakonProfile& initial, double t);
FlowDetail flow_at_detail(const PeakonProfile& initial, double t,
                          PeelScalarMode mode = PeelScalarMode::auto_mode);

struct ConservedRecord {
    uint64_t lambda_set_hash = 0;
    double half_sum_lambda_minus2 = 0.0;  // from the state's own transform
    double mu_total = 0.0;                // ||u||^2_H1 + total singular energy
    double E = 0.0;
    std::map<double, double> Ep;
    double omega_total = 0.0;     // int d omega = sum p_n
    double u_plus_ux_sup = 0.0;   // meaningful on D+ states
    bool in_D_plus = false;
};

ConservedRecord conserved_record(const PeakonProfile& state);

struct Trajectory {
    PeakonProfile initial;
    std::vector<double> times;
    std::vector<PeakonProfile> states;
    std::vector<ConservedRecord> ledger;
    std::vector<bool> collision_flags;
};

Trajectory run_trajectory(const PeakonProfile& initial, std::vector<double> times);

struct IsospectralCoordinates {
    SpectralMeasure reference;
    std::vector<double> log_theta;  // Radon-Nikodym coordinates, aligned with the atoms
};

// theta(lambda_k) = gamma_k / gamma0_k; under the flow log theta is affine in
// t with slope -1/(2 lambda_k).
IsospectralCoordinates isospectral_coordinates(const PeakonProfile& profile,
                                               const SpectralMeasure& reference);

struct ContinuousMeasureSpec {
    struct Piece {
        double a = 0.0, b = 0.0;  // support interval, gapped away from zero
        std::function<double(double)> density;
    };
    std::vector<Piece> pieces;
    std::vector<std::pair<double, double>> atoms;  // (lambda, gamma) kept as-is
    double declared_gap = 0.0;
};

// One atom per bin, with the full bin mass placed at the |lambda|-maximizing
// endpoint; this never decreases the gap and never increases the
// lambda^{-2}-moment.
SpectralMeasure discretize_measure(const ContinuousMeasureSpec& spec, int bins);

// max |m1 - m2| over a fixed non-real grid
double herglotz_distance(const RatFun<double>& m1, const RatFun<double>& m2,
                         const std::vector<std::complex<double>>& grid);

struct CollisionEvent {
    double t = 0.0;  // bracketed to tol_t
    double x = 0.0;  // location of the merged node
    double h = 0.0;  // concentrated energy at the event
};

// Scans [t0, t1] for node collisions (adjacent-gap minima reaching zero at
// numeric resolution) and brackets each event time by bisection on the gap
// derivative sign.
std::vector<CollisionEvent> find_collisions(const PeakonProfile& initial, double t0, double t1,
                                            double tol_t = 1e-9);

}  // namespace chflow
