// Generalized indefinite strings with finitely many nodes, their polynomial
// transfer matrices, and numeric propagation for sampled coefficients.
//
// Conventions: string positions live on (0, inf); w-tilde is piecewise
// constant with value plateau(j) on (s_j, s_{j+1}), plateau before the first
// node is -sum of all jumps and the final plateau is identically 0. Point
// masses v_j >= 0 sit at the nodes. The transfer product is ordered left to
// right, i.e. W = D_N * A_{N-1} * ... * D_1 * A_0.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "chflow/errors.hpp"
#include "chflow/poly.hpp"

namespace chflow {

template <class S>
struct StringNode {
    S s;     // position, > 0, strictly increasing
    S jump;  // jump of w-tilde at s
    S v;     // mass of upsilon-tilde at s, >= 0
};

template <class S>
class StringData {
public:
    StringData() = default;

    explicit StringData(std::vector<StringNode<S>> nodes) : nodes_(std::move(nodes)) {
        validate();
        compute_plateaus();
    }

    // Build from peel output: plateau values per interval plus node data.
    // plateaus[k] is the value on the k-th interval; the implied plateau after
    // the last node must vanish, so the last jump closes the telescope.
    static StringData from_plateaus(const std::vector<S>& lengths, const std::vector<S>& plateaus,
                                    const std::vector<S>& masses) {
        std::vector<StringNode<S>> nodes(lengths.size());
        S pos = scalar_traits<S>::zero();
        for (size_t k = 0; k < lengths.size(); ++k) {
            pos = pos + lengths[k];
            S next = k + 1 < plateaus.size() ? plateaus[k + 1] : scalar_traits<S>::zero();
            nodes[k] = StringNode<S>{pos, next - plateaus[k], masses[k]};
        }
        return StringData(std::move(nodes));
    }

    size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<StringNode<S>>& nodes() const { return nodes_; }
    const StringNode<S>& node(size_t j) const { return nodes_[j]; }

    // value of w-tilde on (s_j, s_{j+1}); plateau(size()) == 0, and
    // plateau_before_first() is the value on (0, s_1)
    const S& plateau(size_t j) const { return plateaus_[j + 1]; }
    const S& plateau_before_first() const { return plateaus_[0]; }

    // w-tilde as a left-continuous function: w(s) = -sum_{s_n >= s} jump_n
    S w_value(const S& s) const {
        size_t j = 0;
        while (j < nodes_.size() && nodes_[j].s < s) ++j;
        return plateaus_[j];
    }

private:
    void validate() const {
        for (size_t j = 0; j < nodes_.size(); ++j) {
            if (!(scalar_traits<S>::zero() < nodes_[j].s))
                throw Error("StringData: node positions must be positive");
            if (j > 0 && !(nodes_[j - 1].s < nodes_[j].s))
                throw Error("StringData: node positions must be strictly increasing");
            if (nodes_[j].v < scalar_traits<S>::zero())
                throw NegativeSingularMass("StringData: negative point mass");
            if (scalar_traits<S>::is_zero(nodes_[j].jump) && scalar_traits<S>::is_zero(nodes_[j].v))
                throw Error("StringData: trivial node");
        }
    }

    void compute_plateaus() {
        plateaus_.assign(nodes_.size() + 1, scalar_traits<S>::zero());
        for (size_t j = nodes_.size(); j-- > 0;)
            plateaus_[j] = plateaus_[j + 1] - nodes_[j].jump;
    }

    std::vector<StringNode<S>> nodes_;
    std::vector<S> plateaus_;  // size N+1, plateaus_[N] == 0
};

// I + z*l*[[-c, 1], [-c^2, c]]; the generator is nilpotent so this is the
// exact exponential. Determinant is identically 1.
template <class S>
PolyMat2<S> transfer_interval(const S& length, const S& c) {
    if (!(scalar_traits<S>::zero() < length))
        throw NegativeLength("transfer_interval: length must be positive");
    PolyMat2<S> m;
    const S one = scalar_traits<S>::one();
    m.e[0] = Poly<S>(std::vector<S>{one, scalar_traits<S>::zero() - length * c});
    m.e[1] = Poly<S>(std::vector<S>{scalar_traits<S>::zero(), length});
    m.e[2] = Poly<S>(std::vector<S>{scalar_traits<S>::zero(), scalar_traits<S>::zero() - length * c * c});
    m.e[3] = Poly<S>(std::vector<S>{one, length * c});
    return m;
}

// [[1, 0], [-z v, 1]]
template <class S>
PolyMat2<S> transfer_mass(const S& v) {
    if (v < scalar_traits<S>::zero()) throw NegativeMass("transfer_mass: v must be >= 0");
    PolyMat2<S> m = PolyMat2<S>::identity();
    if (!scalar_traits<S>::is_zero(v))
        m.e[2] = Poly<S>(std::vector<S>{scalar_traits<S>::zero(), scalar_traits<S>::zero() - v});
    return m;
}

template <class S>
PolyMat2<S> total_transfer(const StringData<S>& s) {
    PolyMat2<S> w = PolyMat2<S>::identity();
    S prev = scalar_traits<S>::zero();
    for (size_t j = 0; j < s.size(); ++j) {
        const auto& n = s.node(j);
        const S& c = j == 0 ? s.plateau_before_first() : s.plateau(j - 1);
        w = transfer_interval(n.s - prev, c) * w;
        if (!scalar_traits<S>::is_zero(n.v)) w = transfer_mass(n.v) * w;
        prev = n.s;
    }
    return w;
}

// Step-function string data on a truncated interval (0, X_max]; w is held
// piecewise constant between grid points, value grid_w[i] on
// (grid[i-1], grid[i]]. tail_bound certifies the unknown remainder
// sup_{x >= X_max} x * (int_x^inf w^2 + int_x^inf d upsilon).
struct SampledString {
    std::vector<double> grid;
    std::vector<double> w_values;
    std::vector<std::pair<double, double>> upsilon_atoms;  // (position, mass)
    double tail_bound = 0.0;

    double x_max() const { return grid.empty() ? 0.0 : grid.back(); }
    void validate() const;

    static SampledString from_string_data(const StringData<double>& s, double x_max);
};

struct Mat2c {
    std::complex<double> a, b, c, d;  // [[a, b], [c, d]]
    double log_scale = 0.0;           // entries were divided by exp(log_scale)

    std::complex<double> det() const { return a * d - b * c; }
};

// Exact product of per-cell interval transfers and atom jumps at spectral
// parameter z, renormalized against overflow; no ODE discretization error
// beyond the piecewise-constant coefficient representation.
Mat2c propagate_numeric(const SampledString& s, std::complex<double> z);
Mat2c propagate_numeric(const SampledString& s, std::complex<double> z, double up_to);

struct FundamentalSystemSample {
    std::complex<double> theta;
    std::complex<double> phi;
    std::complex<double> theta_qd;  // quasi-derivative theta^[1]
    std::complex<double> phi_qd;    // phi^[1]
    std::complex<double> z;
    double x = 0.0;
};

// Solutions on the real line with theta ~ e^{-x/2}, phi ~ e^{x/2} at -inf,
// obtained from Y by the diagonal change of basis at string position e^x.
FundamentalSystemSample fundamental_system(const StringData<double>& s, std::complex<double> z,
                                           double x);
FundamentalSystemSample fundamental_system(const SampledString& s, std::complex<double> z,
                                           double x);

}  // namespace chflow
