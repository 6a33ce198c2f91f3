// Independent verification: weak-form residuals of trajectories against
// smooth bump test functions, and the consolidated conservation audit.
#pragma once

#include "chflow/flow.hpp"

namespace chflow {

// phi(x, t) = A psi((x-x0)/rx) psi((t-t0)/rt) with the standard C_c^inf bump
// psi(xi) = exp(-1/(1-xi^2)) on |xi| < 1; partial derivatives are coded
// analytically so the residual error budget is purely quadrature.
struct TestFunction {
    double x0 = 0.0, t0 = 0.0;
    double rx = 1.0, rt = 1.0;
    double amplitude = 1.0;

    double value(double x, double t) const;
    double dx(double x, double t) const;
    double dt(double x, double t) const;
};

struct QuadSpec {
    int order = 8;         // Gauss-Legendre panel order (4, 8 or 16)
    int space_panels = 6;  // base panels between breakpoints (Richardson axis)
    double abs_tol = 1e-9;
};

struct ResidualReport {
    double residual_u = 0.0;
    double residual_mu = 0.0;
    double quadrature_estimate = 0.0;
    double estimate_decay = 0.0;  // previous-level estimate / final estimate
    bool pass = false;
    bool stalled = false;
    std::vector<double> collision_times;  // events inside the time support
};

ResidualReport weak_residual(const PeakonProfile& initial, const TestFunction& phi,
                             const QuadSpec& quad = {});

struct AuditRow {
    double t = 0.0;
    double lambda_drift = 0.0;        // relative, against the t=0 spectrum
    double mu_drift = 0.0;            // |mu_total - (1/2) sum lambda^{-2}| / ref
    double omega_drift = 0.0;         // |sum p - signed sum lambda^{-1}| / ref
    double E = 0.0;
    bool E_corridor_ok = false;       // within the 6 sqrt(2) corridor
    double sup_inf = 0.0;             // ||u+u_x||_inf (D+ runs)
    bool sup_corridor_ok = true;      // within the 12 sqrt(2) corridor
    std::map<double, double> Ep;
    std::map<double, double> lp_norms;  // ||u+u_x||_p for p in {1, 2}
};

struct AuditTable {
    bool in_D_plus = false;
    double E0 = 0.0;
    std::vector<AuditRow> rows;
    double max_lambda_drift = 0.0;
    double max_mu_drift = 0.0;
    double max_omega_drift = 0.0;
    bool corridors_ok = false;
    std::map<double, double> Ep_corridor_ratio;  // measured max(Ep)/min(Ep)
    bool pass = false;
};

AuditTable conservation_audit(const Trajectory& traj);

}  // namespace chflow
