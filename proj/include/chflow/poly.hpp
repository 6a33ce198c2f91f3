// Real-coefficient polynomials in the spectral parameter z, generic over the
// scalar mode. Degree -1 denotes the zero polynomial.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "chflow/dd.hpp"
#include "chflow/scalar.hpp"

namespace chflow {

template <class S>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim_exact(); }
    static Poly constant(S v) { return Poly(std::vector<S>{std::move(v)}); }
    // coefficient of z^1 times v, i.e. v*z
    static Poly linear(S c0, S c1) { return Poly(std::vector<S>{std::move(c0), std::move(c1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<S>& coeffs() const { return c_; }
    const S& operator[](size_t i) const { return c_[i]; }
    S coeff_or_zero(size_t i) const { return i < c_.size() ? c_[i] : scalar_traits<S>::zero(); }
    const S& leading() const { return c_.back(); }

    S operator()(const S& x) const {
        S acc = scalar_traits<S>::zero();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    std::complex<double> eval(std::complex<double> z) const
        requires std::is_same_v<S, double>
    {
        std::complex<double> acc = 0.0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    // compensated evaluation at a real point
    double eval_dd(double x) const
        requires std::is_same_v<S, double>
    {
        DD acc{0.0, 0.0};
        for (size_t i = c_.size(); i-- > 0;) acc = dd_add(dd_mul(acc, x), c_[i]);
        return dd_value(acc);
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<S> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * scalar_traits<S>::from_int(static_cast<int64_t>(i));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<S> r(std::max(a.c_.size(), b.c_.size()), scalar_traits<S>::zero());
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<S> r(std::max(a.c_.size(), b.c_.size()), scalar_traits<S>::zero());
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<S> r(a.c_.size() + b.c_.size() - 1, scalar_traits<S>::zero());
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    Poly scaled(const S& k) const {
        if (scalar_traits<S>::is_zero(k)) return Poly();
        std::vector<S> r = c_;
        for (auto& v : r) v = v * k;
        return Poly(std::move(r));
    }
    // multiply by z^k
    Poly shifted_up(size_t k) const {
        if (is_zero()) return Poly();
        std::vector<S> r(c_.size() + k, scalar_traits<S>::zero());
        for (size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, std::fabs(scalar_traits<S>::to_double(v)));
        return m;
    }

    // Drop leading coefficients below an absolute floor (exact mode keeps
    // everything; zeros were already trimmed).
    Poly trimmed_abs(double abs_tol) const {
        if constexpr (scalar_traits<S>::exact) {
            return *this;
        } else {
            std::vector<S> r = c_;
            while (!r.empty() &&
                   std::fabs(scalar_traits<S>::to_double(r.back())) <= abs_tol)
                r.pop_back();
            return Poly(std::move(r));
        }
    }

    // Drop leading coefficients that are negligible relative to the largest
    // one (exact mode drops only exact zeros, which trim_exact already did).
    Poly trimmed(double rel_tol) const {
        if constexpr (scalar_traits<S>::exact) {
            return *this;
        } else {
            S scale = scalar_traits<S>::zero();
            for (const auto& v : c_) {
                S a = scalar_traits<S>::abs(v);
                if (scale < a) scale = a;
            }
            std::vector<S> r = c_;
            while (!r.empty() && scalar_traits<S>::is_small(r.back(), scale, rel_tol))
                r.pop_back();
            return Poly(std::move(r));
        }
    }

private:
    void trim_exact() {
        while (!c_.empty() && scalar_traits<S>::is_zero(c_.back())) c_.pop_back();
    }

    std::vector<S> c_;  // ascending degree
};

template <class S>
struct PolyMat2 {
    // row-major: e[0]=M11 e[1]=M12 e[2]=M21 e[3]=M22
    std::array<Poly<S>, 4> e;

    static PolyMat2 identity() {
        PolyMat2 m;
        m.e[0] = Poly<S>::constant(scalar_traits<S>::one());
        m.e[3] = Poly<S>::constant(scalar_traits<S>::one());
        return m;
    }

    friend PolyMat2 operator*(const PolyMat2& a, const PolyMat2& b) {
        PolyMat2 r;
        r.e[0] = a.e[0] * b.e[0] + a.e[1] * b.e[2];
        r.e[1] = a.e[0] * b.e[1] + a.e[1] * b.e[3];
        r.e[2] = a.e[2] * b.e[0] + a.e[3] * b.e[2];
        r.e[3] = a.e[2] * b.e[1] + a.e[3] * b.e[3];
        return r;
    }

    Poly<S> det() const { return e[0] * e[3] - e[1] * e[2]; }
};

}  // namespace chflow
