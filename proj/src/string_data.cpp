#include "chflow/string_data.hpp"

#include <algorithm>
#include <cmath>

namespace chflow {

void SampledString::validate() const {
    if (grid.size() != w_values.size())
        throw FormatError("SampledString: grid/w size mismatch");
    double prev = 0.0;
    for (double g : grid) {
        if (!(g > prev) || !std::isfinite(g))
            throw FormatError("SampledString: grid must be positive and increasing");
        prev = g;
    }
    for (const auto& [pos, mass] : upsilon_atoms) {
        if (!(pos > 0.0) || pos > x_max()) throw FormatError("SampledString: atom outside (0, X_max]");
        if (mass < 0.0) throw NegativeSingularMass("SampledString: negative atom mass");
    }
    if (tail_bound < 0.0) throw FormatError("SampledString: negative tail_bound");
    for (double w : w_values)
        if (!std::isfinite(w)) throw FormatError("SampledString: non-finite w sample");
}

SampledString SampledString::from_string_data(const StringData<double>& s, double x_max) {
    SampledString out;
    for (size_t j = 0; j < s.size(); ++j) {
        out.grid.push_back(s.node(j).s);
        out.w_values.push_back(j == 0 ? s.plateau_before_first() : s.plateau(j - 1));
        if (s.node(j).v != 0.0) out.upsilon_atoms.push_back({s.node(j).s, s.node(j).v});
    }
    if (out.grid.empty() || out.grid.back() < x_max) {
        out.grid.push_back(x_max);
        out.w_values.push_back(s.empty() ? 0.0 : s.plateau(s.size() - 1));
    }
    out.tail_bound = 0.0;
    out.validate();
    return out;
}

namespace {

using cplx = std::complex<double>;

// left-multiply by I + z*l*[[-c, 1], [-c^2, c]]
void apply_interval(Mat2c& m, cplx z, double l, double c) {
    cplx zl = z * l;
    cplx t11 = 1.0 - zl * c, t12 = zl, t21 = -zl * c * c, t22 = 1.0 + zl * c;
    cplx a = t11 * m.a + t12 * m.c;
    cplx b = t11 * m.b + t12 * m.d;
    cplx cc = t21 * m.a + t22 * m.c;
    cplx dd = t21 * m.b + t22 * m.d;
    m.a = a; m.b = b; m.c = cc; m.d = dd;
}

void apply_mass(Mat2c& m, cplx z, double v) {
    m.c = m.c - z * v * m.a;
    m.d = m.d - z * v * m.b;
}

void renormalize(Mat2c& m) {
    double n = std::max(std::max(std::abs(m.a), std::abs(m.b)),
                        std::max(std::abs(m.c), std::abs(m.d)));
    if (n > 1e120 || (n > 0.0 && n < 1e-120)) {
        m.a /= n; m.b /= n; m.c /= n; m.d /= n;
        m.log_scale += std::log(n);
    }
}

}  // namespace

// transfer over [0, up_to): left-continuous, excluding any atom at up_to,
// matching the measure-integral convention
Mat2c propagate_numeric(const SampledString& s, std::complex<double> z, double up_to) {
    s.validate();
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
        throw Error("propagate_numeric: z must be finite");
    Mat2c m{1.0, 0.0, 0.0, 1.0, 0.0};
    size_t atom = 0;
    double pos = 0.0;
    const auto& atoms = s.upsilon_atoms;
    for (size_t i = 0; i < s.grid.size() && pos < up_to; ++i) {
        double cell_end = std::min(s.grid[i], up_to);
        if (cell_end <= pos) continue;
        double w = s.w_values[i];
        double seg_start = pos;
        // atoms interior to the cell split it; an atom exactly at the cell
        // boundary transfers at the start of the next cell
        while (atom < atoms.size() && atoms[atom].first < cell_end) {
            double ap = atoms[atom].first;
            if (ap > seg_start) apply_interval(m, z, ap - seg_start, w);
            apply_mass(m, z, atoms[atom].second);
            seg_start = ap;
            ++atom;
            renormalize(m);
        }
        if (cell_end > seg_start) apply_interval(m, z, cell_end - seg_start, w);
        pos = cell_end;
        renormalize(m);
    }
    return m;
}

// transfer over the whole data, atoms at X_max included
Mat2c propagate_numeric(const SampledString& s, std::complex<double> z) {
    Mat2c m = propagate_numeric(s, z, s.x_max());
    for (const auto& [pos, mass] : s.upsilon_atoms)
        if (pos == s.x_max()) apply_mass(m, z, mass);
    return m;
}

namespace {

FundamentalSystemSample change_basis(const Mat2c& y, std::complex<double> z, double x) {
    FundamentalSystemSample f;
    f.z = z;
    f.x = x;
    double scale_m = std::exp(-0.5 * x + y.log_scale);
    double scale_p = std::exp(0.5 * x + y.log_scale);
    f.theta = scale_m * y.a;
    f.phi = scale_m * y.b / z;
    f.theta_qd = scale_p * y.c * z;
    f.phi_qd = scale_p * y.d;
    return f;
}

}  // namespace

FundamentalSystemSample fundamental_system(const StringData<double>& s, std::complex<double> z,
                                           double x) {
    if (z == 0.0) {
        // analytic solutions at z = 0
        return {std::exp(-0.5 * x), std::exp(0.5 * x), 0.0, std::exp(0.5 * x), 0.0, x};
    }
    double xi = std::exp(x);
    double reach = s.empty() ? xi : std::max(xi, s.node(s.size() - 1).s);
    SampledString emb = SampledString::from_string_data(s, reach);
    Mat2c y = propagate_numeric(emb, z, xi);
    return change_basis(y, z, x);
}

FundamentalSystemSample fundamental_system(const SampledString& s, std::complex<double> z,
                                           double x) {
    if (z == 0.0)
        return {std::exp(-0.5 * x), std::exp(0.5 * x), 0.0, std::exp(0.5 * x), 0.0, x};
    double xi = std::exp(x);
    if (xi > s.x_max()) throw Error("fundamental_system: position beyond X_max");
    Mat2c y = propagate_numeric(s, z, xi);
    return change_basis(y, z, x);
}

}  // namespace chflow
