// Rational functions normalized so den(0) = 1, plus the linear-fractional
// action of 2x2 transfer factors and residue extraction at simple poles.
#pragma once

#include "chflow/errors.hpp"
#include "chflow/poly.hpp"
#include "chflow/roots.hpp"

namespace chflow {

template <class S>
class RatFun {
public:
    RatFun() : num_(), den_(Poly<S>::constant(scalar_traits<S>::one())) {}
    RatFun(Poly<S> num, Poly<S> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw IdenticallyZeroDenominator();
        normalize();
    }

    const Poly<S>& num() const { return num_; }
    const Poly<S>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    S operator()(const S& x) const { return num_(x) / den_(x); }

    std::complex<double> eval(std::complex<double> z) const
        requires std::is_same_v<S, double>
    {
        return num_.eval(z) / den_.eval(z);
    }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    RatFun reduced(double rel_tol = 1e-9) const;

private:
    void normalize() {
        S d0 = den_.coeff_or_zero(0);
        if (scalar_traits<S>::is_zero(d0))
            throw Error("RatFun: denominator vanishes at z = 0");
        if (!(d0 == scalar_traits<S>::one())) {
            S inv = scalar_traits<S>::one() / d0;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Poly<S> num_;
    Poly<S> den_;  // den(0) == 1
};

namespace detail {

// quotient of exact polynomial division (remainder must vanish)
template <class S>
Poly<S> poly_divide_exact(const Poly<S>& a, const Poly<S>& b) {
    std::vector<S> rem(a.coeffs());
    std::vector<S> q(a.degree() - b.degree() + 1, scalar_traits<S>::zero());
    const auto& bc = b.coeffs();
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
        S f = rem[k + b.degree()] / bc.back();
        q[k] = f;
        for (int j = 0; j <= b.degree(); ++j) rem[k + j] = rem[k + j] - f * bc[j];
    }
    return Poly<S>(std::move(q));
}

// monic gcd over the rationals (Euclid with monic normalization each step)
template <class S>
Poly<S> poly_gcd_exact(Poly<S> a, Poly<S> b) {
    auto make_monic = [](Poly<S> p) {
        if (p.is_zero()) return p;
        return p.scaled(scalar_traits<S>::one() / p.leading());
    };
    a = make_monic(std::move(a));
    b = make_monic(std::move(b));
    while (!b.is_zero()) {
        if (a.degree() < b.degree()) std::swap(a, b);
        // remainder of a by b
        std::vector<S> rem(a.coeffs());
        const auto& bc = b.coeffs();
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            S f = rem[k + b.degree()] / bc.back();
            for (int j = 0; j <= b.degree(); ++j) rem[k + j] = rem[k + j] - f * bc[j];
        }
        Poly<S> r(std::move(rem));
        a = std::move(b);
        b = make_monic(std::move(r));
    }
    return a;
}

}  // namespace detail

template <class S>
RatFun<S> RatFun<S>::reduced(double rel_tol) const {
    if (num_.is_zero() || num_.degree() == 0 || den_.degree() == 0) return *this;
    if constexpr (scalar_traits<S>::exact) {
        Poly<S> g = detail::poly_gcd_exact(num_, den_);
        if (g.degree() < 1) return *this;
        return RatFun(detail::poly_divide_exact(num_, g), detail::poly_divide_exact(den_, g));
    } else if constexpr (!std::is_same_v<S, double>) {
        return *this;  // extended-precision mode relies on trims alone
    } else {
        // cancel approximate common roots
        RootResult rn = poly_roots(num_, 1e-14);
        RootResult rd = poly_roots(den_, 1e-14);
        std::vector<bool> used(rn.roots.size(), false);
        std::vector<std::complex<double>> keep_den;
        double scale = std::max(1.0, std::max(num_.max_abs_coeff(), den_.max_abs_coeff()));
        bool cancelled = false;
        for (auto zd : rd.roots) {
            bool matched = false;
            for (size_t i = 0; i < rn.roots.size(); ++i) {
                if (used[i]) continue;
                if (std::abs(rn.roots[i] - zd) <= rel_tol * scale * (1.0 + std::abs(zd))) {
                    used[i] = true;
                    matched = true;
                    cancelled = true;
                    break;
                }
            }
            if (!matched) keep_den.push_back(zd);
        }
        if (!cancelled) return *this;
        auto rebuild = [](const std::vector<std::complex<double>>& roots, double lead) {
            Poly<double> p = Poly<double>::constant(lead);
            size_t i = 0;
            while (i < roots.size()) {
                if (roots[i].imag() != 0.0 && i + 1 < roots.size() &&
                    std::fabs(roots[i].imag() + roots[i + 1].imag()) <
                        1e-9 * (1.0 + std::fabs(roots[i].imag()))) {
                    double re = roots[i].real(), n2 = std::norm(roots[i]);
                    p = p * Poly<double>(std::vector<double>{n2, -2.0 * re, 1.0});
                    i += 2;
                } else {
                    p = p * Poly<double>(std::vector<double>{-roots[i].real(), 1.0});
                    ++i;
                }
            }
            return p;
        };
        std::vector<std::complex<double>> keep_num;
        for (size_t i = 0; i < rn.roots.size(); ++i)
            if (!used[i]) keep_num.push_back(rn.roots[i]);
        return RatFun(rebuild(keep_num, num_.leading()), rebuild(keep_den, den_.leading()));
    }
}

// (M11 f - M21) / (M22 - M12 f), reduced and renormalized so den(0) = 1
template <class S>
RatFun<S> mobius_apply(const PolyMat2<S>& M, const RatFun<S>& f) {
    Poly<S> num = M.e[0] * f.num() - M.e[2] * f.den();
    Poly<S> den = M.e[3] * f.den() - M.e[1] * f.num();
    if (den.is_zero()) throw IdenticallyZeroDenominator();
    return RatFun<S>(std::move(num), std::move(den)).reduced();
}

inline double residue(const RatFun<double>& f, double pole) {
    Poly<double> dp = f.den().derivative();
    double d = dp.eval_dd(pole);
    double scale = std::max(1.0, dp.max_abs_coeff() * (1.0 + std::fabs(pole)));
    if (std::fabs(d) < 1e-12 * scale) throw NotASimplePole();
    return f.num().eval_dd(pole) / d;
}

inline Rational residue(const RatFun<Rational>& f, const Rational& pole) {
    Rational d = f.den().derivative()(pole);
    if (d.is_zero()) throw NotASimplePole();
    return f.num()(pole) / d;
}

}  // namespace chflow
