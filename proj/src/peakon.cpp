#include "chflow/peakon.hpp"

#include <algorithm>
#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/quad.hpp"

namespace chflow {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kExpLimit = 700.0;  // e^{+-x} must stay inside double range

// On the interval between consecutive nodes, u(s) = alpha e^s + beta e^{-s}
// and u + u' = tau e^s with tau = 2 alpha.
struct Interval {
    double lo, hi;       // x-range (lo = -inf before the first node)
    double alpha, beta;  // u = alpha e^s + beta e^{-s}
    double tau;          // u + u' = tau e^s
};

std::vector<Interval> decompose(const PeakonProfile& prof) {
    const auto& nodes = prof.nodes();
    const size_t n = nodes.size();
    std::vector<Interval> iv(n + 1);
    // each interval's tail coefficients are summed fresh: running
    // subtraction cancels catastrophically when the remaining tail is many
    // orders below the full sum (far-separated nodes after long evolutions)
    for (size_t i = 0; i <= n; ++i) {
        iv[i].lo = i == 0 ? -HUGE_VAL : nodes[i - 1].x;
        iv[i].hi = i == n ? HUGE_VAL : nodes[i].x;
        double suffix = 0.0;
        for (size_t k = n; k-- > i;) suffix += nodes[k].p * std::exp(-nodes[k].x);
        double prefix = 0.0;
        for (size_t k = 0; k < i; ++k) prefix += nodes[k].p * std::exp(nodes[k].x);
        iv[i].alpha = 0.5 * suffix;
        iv[i].beta = 0.5 * prefix;
        iv[i].tau = suffix;
    }
    return iv;
}

size_t interval_index(const std::vector<Interval>& iv, double x) {
    // index i with x in (lo_i, hi_i]; left-continuous convention at nodes
    size_t i = 0;
    while (i + 1 < iv.size() && iv[i].hi < x) ++i;
    return i;
}

}  // namespace

PeakonProfile::PeakonProfile(std::vector<PeakonNode> nodes) {
    for (const auto& n : nodes) {
        if (!std::isfinite(n.x) || !std::isfinite(n.p) || !std::isfinite(n.h))
            throw Error("PeakonProfile: non-finite node data");
        if (std::fabs(n.x) > kExpLimit)
            throw Error("PeakonProfile: position exceeds the representable exp range");
        if (n.h < 0.0) throw NegativeSingularMass("PeakonProfile: negative singular energy");
    }
    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const PeakonNode& a, const PeakonNode& b) { return a.x < b.x; });
    for (const auto& n : nodes) {
        if (!nodes_.empty() && n.x - nodes_.back().x < kMergeTol * (1.0 + std::fabs(n.x))) {
            nodes_.back().p += n.p;
            nodes_.back().h += n.h;
            merged_ = true;
        } else {
            nodes_.push_back(n);
        }
    }
    std::erase_if(nodes_, [](const PeakonNode& n) { return n.p == 0.0 && n.h == 0.0; });
}

double eval_u(const PeakonProfile& profile, double x, EvalMode mode) {
    if (profile.empty()) return 0.0;
    if (mode == EvalMode::u_plus_ux) {
        double acc = 0.0;
        for (const auto& n : profile.nodes())
            if (n.x >= x) acc += n.p * std::exp(x - n.x);
        return acc;
    }
    auto iv = decompose(profile);
    size_t i = interval_index(iv, x);
    double ex = std::exp(x), emx = std::exp(-x);
    if (mode == EvalMode::value) return iv[i].alpha * ex + iv[i].beta * emx;
    return iv[i].alpha * ex - iv[i].beta * emx;
}

double energy_left_integral(const PeakonProfile& profile, double x) {
    if (profile.empty()) return 0.0;
    auto iv = decompose(profile);
    // int e^{-s}(u^2 + u'^2) = int 2 alpha^2 e^s + 2 beta^2 e^{-3s}
    auto piece = [](const Interval& v, double a, double b) {
        double acc = 0.0;
        if (v.alpha != 0.0)
            acc += 2.0 * v.alpha * v.alpha * (std::exp(b) - (std::isinf(a) ? 0.0 : std::exp(a)));
        if (v.beta != 0.0)
            acc += (2.0 / 3.0) * v.beta * v.beta * (std::exp(-3.0 * a) - std::exp(-3.0 * b));
        return acc;
    };
    double acc = 0.0;
    for (const auto& v : iv) {
        if (v.lo >= x) break;
        acc += piece(v, v.lo, std::min(v.hi, x));
    }
    for (const auto& n : profile.nodes())
        if (n.x < x) acc += n.h * std::exp(-n.x);
    return acc;
}

namespace {

// G(x) = e^x (int_x^inf e^{-s}(u+u')^2 ds + int_x^inf e^{-s} d upsilon).
// Within interval i and with y = e^x, G(y) = y (K_i - tau_i^2 y); K_i folds
// in the tail beyond the interval including the h of its upper node, so G is
// left-continuous and interval right-endpoints attain the node values.
struct TailData {
    std::vector<Interval> iv;
    std::vector<double> K;
};

TailData tail_data(const PeakonProfile& prof) {
    TailData t;
    t.iv = decompose(prof);
    const auto& nodes = prof.nodes();
    const size_t n = nodes.size();
    t.K.assign(n + 1, 0.0);
    double c = 0.0;  // accumulated tail beyond the current interval's top
    for (size_t i = n + 1; i-- > 0;) {
        if (i == n) continue;  // tau and tail both vanish there
        double yhi = std::exp(t.iv[i].hi);
        double ylo = std::isinf(t.iv[i].lo) ? 0.0 : std::exp(t.iv[i].lo);
        c += nodes[i].h * std::exp(-nodes[i].x);
        t.K[i] = t.iv[i].tau * t.iv[i].tau * yhi + c;
        c += t.iv[i].tau * t.iv[i].tau * (yhi - ylo);
    }
    return t;
}

double interval_sup(const TailData& t, size_t i) {
    double tau = t.iv[i].tau, K = t.K[i];
    double ylo = std::isinf(t.iv[i].lo) ? 0.0 : std::exp(t.iv[i].lo);
    auto G = [&](double y) { return y * (K - tau * tau * y); };
    if (std::isinf(t.iv[i].hi)) return 0.0;  // last interval: G == 0
    double yhi = std::exp(t.iv[i].hi);
    double best = std::max(G(ylo), G(yhi));
    if (tau != 0.0) {
        double ystar = K / (2.0 * tau * tau);
        if (ystar > ylo && ystar < yhi) best = std::max(best, G(ystar));
    }
    return best;
}

}  // namespace

double compute_E(const PeakonProfile& profile) {
    if (profile.empty()) return 0.0;
    TailData t = tail_data(profile);
    double best = 0.0;
    for (size_t i = 0; i < t.iv.size(); ++i) best = std::max(best, interval_sup(t, i));
    return std::sqrt(std::max(best, 0.0));
}

double compute_Ep(const PeakonProfile& profile, double p) {
    if (!(p > 1.0)) throw Error("compute_Ep: requires p > 1");
    if (profile.empty()) return 0.0;
    TailData t = tail_data(profile);
    const double half_p = 0.5 * p;
    double total = 0.0;
    for (size_t i = 0; i + 1 < t.iv.size(); ++i) {
        double tau = t.iv[i].tau, K = t.K[i];
        if (K == 0.0 && tau == 0.0) continue;
        auto integrand = [&](double x) {
            double y = std::exp(x);
            double g = y * (K - tau * tau * y);
            return g > 0.0 ? std::pow(g, half_p) : 0.0;
        };
        double hi = t.iv[i].hi;
        double lo = std::isinf(t.iv[i].lo) ? hi - 80.0 / half_p - 5.0 : t.iv[i].lo;
        total += adaptive_simpson(integrand, lo, hi, 1e-10 * (1.0 + total), 30);
    }
    if (!std::isfinite(total)) throw NonIntegrable("compute_Ep: integral not finite");
    return total;
}

namespace {

// int_a^b e^{sigma s} e^{-|x-s|} ds for sigma in {2, 0, -2}; infinite
// endpoints are permitted only where the integrand decays (caller drops
// vanishing coefficients on the unbounded intervals).
double kernel_piece(double a, double b, double sigma, double x) {
    if (a >= b) return 0.0;
    auto part = [&](double lo, double hi, double rate, double shift) {
        if (lo >= hi) return 0.0;
        double upper = std::isinf(hi) ? (rate < 0.0 ? 0.0 : HUGE_VAL) : std::exp(rate * hi + shift);
        double lower = std::isinf(lo) ? (rate > 0.0 ? 0.0 : HUGE_VAL) : std::exp(rate * lo + shift);
        return (upper - lower) / rate;
    };
    double acc = 0.0;
    acc += part(a, std::min(b, x), sigma + 1.0, -x);  // s < x: kernel e^{s-x}
    acc += part(std::max(a, x), b, sigma - 1.0, x);   // s > x: kernel e^{x-s}
    return acc;
}

}  // namespace

double compute_P(const PeakonProfile& profile, double x) {
    if (profile.empty()) return 0.0;
    auto iv = decompose(profile);
    double acc = 0.0;
    for (const auto& v : iv) {
        // u^2 + (u^2 + u'^2) = 3 alpha^2 e^{2s} + 2 alpha beta + 3 beta^2 e^{-2s}
        double c2 = 3.0 * v.alpha * v.alpha;
        double c0 = 2.0 * v.alpha * v.beta;
        double cm2 = 3.0 * v.beta * v.beta;
        if (c2 != 0.0) acc += c2 * kernel_piece(v.lo, v.hi, 2.0, x);
        if (c0 != 0.0) acc += c0 * kernel_piece(v.lo, v.hi, 0.0, x);
        if (cm2 != 0.0) acc += cm2 * kernel_piece(v.lo, v.hi, -2.0, x);
    }
    for (const auto& n : profile.nodes()) acc += n.h * std::exp(-std::fabs(x - n.x));
    return 0.25 * acc;
}

StringData<double> to_dual_string(const PeakonProfile& profile) {
    std::vector<StringNode<double>> nodes;
    nodes.reserve(profile.size());
    for (const auto& n : profile.nodes()) {
        double s = std::exp(n.x);
        nodes.push_back({s, n.p / s, n.h / s});
    }
    return StringData<double>(std::move(nodes));
}

PeakonProfile from_dual_string(const StringData<double>& s) {
    std::vector<PeakonNode> nodes;
    nodes.reserve(s.size());
    double vscale = 0.0;
    for (const auto& n : s.nodes()) vscale = std::max(vscale, std::fabs(n.v));
    for (const auto& n : s.nodes()) {
        if (!(n.s > 0.0)) throw Error("from_dual_string: node position must be positive");
        double v = n.v;
        if (v < 0.0) {
            if (v < -1e-9 * vscale) throw NegativeSingularMass("from_dual_string: negative mass");
            v = 0.0;
        }
        nodes.push_back({std::log(n.s), n.s * n.jump, n.s * v});
    }
    return PeakonProfile(std::move(nodes));
}

MembershipReport membership(const PeakonProfile& profile) {
    MembershipReport r;
    r.in_D = true;  // finite profiles satisfy both growth restrictions
    r.in_D_plus = !profile.empty();
    for (const auto& n : profile.nodes())
        if (n.h != 0.0 || n.p <= 0.0) { r.in_D_plus = false; break; }
    r.E_value = compute_E(profile);
    r.R_bound = r.E_value;
    for (double p : {1.5, 2.0, 3.0}) r.Ep_values[p] = compute_Ep(profile, p);
    if (r.in_D_plus) {
        r.u_plus_ux_sup = sup_u_plus_ux(profile);
        r.sup_sandwich_pass = 0.5 * r.u_plus_ux_sup <= r.E_value * (1.0 + 1e-12) &&
                              r.E_value <= r.u_plus_ux_sup * (1.0 + 1e-12);
    }
    return r;
}

double norm_H1_sq(const PeakonProfile& profile) {
    if (profile.empty()) return 0.0;
    auto iv = decompose(profile);
    double acc = 0.0;
    for (const auto& v : iv) {
        // u^2 + u'^2 = 2 alpha^2 e^{2s} + 2 beta^2 e^{-2s}
        if (v.alpha != 0.0)
            acc += v.alpha * v.alpha *
                   (std::exp(2.0 * v.hi) - (std::isinf(v.lo) ? 0.0 : std::exp(2.0 * v.lo)));
        if (v.beta != 0.0)
            acc += v.beta * v.beta *
                   (std::exp(-2.0 * v.lo) - (std::isinf(v.hi) ? 0.0 : std::exp(-2.0 * v.hi)));
    }
    return acc;
}

double h_total(const PeakonProfile& profile) {
    double acc = 0.0;
    for (const auto& n : profile.nodes()) acc += n.h;
    return acc;
}

double mu_total(const PeakonProfile& profile) { return norm_H1_sq(profile) + h_total(profile); }

double momentum_total(const PeakonProfile& profile) {
    double acc = 0.0;
    for (const auto& n : profile.nodes()) acc += n.p;
    return acc;
}

double sup_u_plus_ux(const PeakonProfile& profile) {
    if (profile.empty()) return 0.0;
    auto iv = decompose(profile);
    // |u+u'| = |tau| e^s is increasing on each interval, so the sup over
    // (x_i, x_{i+1}] sits at the node
    double best = 0.0;
    for (size_t i = 0; i + 1 < iv.size(); ++i)
        best = std::max(best, std::fabs(iv[i].tau) * std::exp(iv[i].hi));
    return best;
}

double norm_u_plus_ux_Lp(const PeakonProfile& profile, double p) {
    if (profile.empty()) return 0.0;
    if (!(p > 0.0)) throw Error("norm_u_plus_ux_Lp: requires p > 0");
    auto iv = decompose(profile);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < iv.size(); ++i) {
        double tau = std::fabs(iv[i].tau);
        if (tau == 0.0) continue;
        double lo = iv[i].lo, hi = iv[i].hi;
        double elo = std::isinf(lo) ? 0.0 : std::exp(p * lo);
        acc += std::pow(tau, p) * (std::exp(p * hi) - elo) / p;
    }
    return std::pow(acc, 1.0 / p);
}

double exp_weighted_energy(const PeakonProfile& profile) {
    if (profile.empty()) return 0.0;
    auto iv = decompose(profile);
    // int e^{-x}(2u^2 + u'^2) dx: 3a^2 e^x + 2ab e^{-x} + 3b^2 e^{-3x}
    double acc = 0.0;
    for (const auto& v : iv) {
        double elo = std::isinf(v.lo) ? 0.0 : std::exp(v.lo);
        if (v.alpha != 0.0) acc += 3.0 * v.alpha * v.alpha * (std::exp(v.hi) - elo);
        if (v.alpha != 0.0 && v.beta != 0.0)
            acc += 2.0 * v.alpha * v.beta * (std::exp(-v.lo) - std::exp(-v.hi));
        if (v.beta != 0.0)
            acc += v.beta * v.beta *
                   (std::exp(-3.0 * v.lo) - (std::isinf(v.hi) ? 0.0 : std::exp(-3.0 * v.hi)));
    }
    for (const auto& n : profile.nodes()) acc += n.h * std::exp(-n.x);
    return acc;
}

double exp_weighted_omega(const PeakonProfile& profile) {
    double acc = 0.0;
    for (const auto& n : profile.nodes()) acc += n.p * std::exp(-n.x);
    return acc;
}

}  // namespace chflow
