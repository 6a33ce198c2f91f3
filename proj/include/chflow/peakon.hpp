// Multi-peakon phase-space pairs (u, mu): evaluation of u and its energy
// integrals in closed piecewise-exponential form, the functionals E and E_p,
// the source term P, and the change of variables onto dual strings.
#pragma once

#include <map>
#include <vector>

#include "chflow/string_data.hpp"

namespace chflow {

struct PeakonNode {
    double x;  // position
    double p;  // momentum (mass of omega at x)
    double h;  // singular energy (mass of upsilon at x), >= 0
};

class PeakonProfile {
public:
    PeakonProfile() = default;
    // Sorts, merges nodes closer than 1e-12*(1+|x|), drops exact-zero nodes.
    explicit PeakonProfile(std::vector<PeakonNode> nodes);

    size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<PeakonNode>& nodes() const { return nodes_; }
    const PeakonNode& node(size_t i) const { return nodes_[i]; }

    bool merged_on_construction() const { return merged_; }

private:
    std::vector<PeakonNode> nodes_;
    bool merged_ = false;
};

enum class EvalMode { value, derivative, u_plus_ux };

struct MembershipReport {
    bool in_D = true;
    bool in_D_plus = false;
    double E_value = 0.0;
    double R_bound = 0.0;  // smallest R with the pair in D(R); equals E_value
    std::map<double, double> Ep_values;
    // D+ only: the L-infinity norm of u+u' and the two-sided bound
    // sup/2 <= E <= sup that it must satisfy
    double u_plus_ux_sup = 0.0;
    bool sup_sandwich_pass = true;
};

// u(x) = (1/2) sum p_n e^{-|x - x_n|}; derivative uses the left-limit
// convention at nodes; u_plus_ux returns the left-continuous representative
// sum_{x_n >= x} p_n e^{x - x_n}.
double eval_u(const PeakonProfile& profile, double x, EvalMode mode = EvalMode::value);

// int_{-inf}^x e^{-s} dmu with mu = (u^2 + u'^2) ds + sum h_n delta_{x_n};
// the point mass at x_n counts for x > x_n (left-continuous convention).
double energy_left_integral(const PeakonProfile& profile, double x);

// E(u, mu): exact supremum of e^{x/2} (int_x^inf e^{-s}(u+u')^2 ds
// + int_x^inf e^{-s} d upsilon)^{1/2}, solved in closed form per interval.
double compute_E(const PeakonProfile& profile);

// E_p(u, mu) for p > 1, by adaptive quadrature of the defining integral
// assembled from the same piecewise-exponential tails.
double compute_Ep(const PeakonProfile& profile, double p);

// P(x) = (1/4) int e^{-|x-s|} u^2 ds + (1/4) int e^{-|x-s|} dmu
double compute_P(const PeakonProfile& profile, double x);

StringData<double> to_dual_string(const PeakonProfile& profile);
PeakonProfile from_dual_string(const StringData<double>& s);

MembershipReport membership(const PeakonProfile& profile);

// conserved-quantity building blocks (closed forms)
double norm_H1_sq(const PeakonProfile& profile);            // ||u||^2_{H^1}
double h_total(const PeakonProfile& profile);               // total singular energy
double mu_total(const PeakonProfile& profile);              // int dmu
double momentum_total(const PeakonProfile& profile);        // int d omega = sum p_n
double sup_u_plus_ux(const PeakonProfile& profile);         // ||u + u'||_inf
double norm_u_plus_ux_Lp(const PeakonProfile& profile, double p);
double exp_weighted_energy(const PeakonProfile& profile);   // int e^{-x} u^2 dx + int e^{-x} dmu
double exp_weighted_omega(const PeakonProfile& profile);    // int e^{-x} d omega

}  // namespace chflow
