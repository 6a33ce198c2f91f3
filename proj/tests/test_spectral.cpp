#include <cmath>
#include <random>

#include "chflow/spectral.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace chflow;

namespace {

const double kSqrt2 = std::sqrt(2.0);

PeakonProfile random_profile(std::mt19937_64& rng, int max_nodes, bool dplus = false) {
    std::uniform_real_distribution<double> xd(-5.0, 5.0), pd(-4.0, 4.0), hd(0.0, 2.0);
    int n = 1 + static_cast<int>(rng() % max_nodes);
    std::vector<PeakonNode> nodes;
    double x = xd(rng);
    for (int i = 0; i < n; ++i) {
        double p = dplus ? 0.1 + std::fabs(pd(rng)) : pd(rng);
        if (!dplus && std::fabs(p) < 0.05) p = 0.5;
        double h = dplus ? 0.0 : (rng() % 3 == 0 ? hd(rng) : 0.0);
        nodes.push_back({x, p, h});
        x += 0.05 + 9.0 * (rng() % 1000) / 1000.0 / n;
    }
    return PeakonProfile(std::move(nodes));
}

SampledString high_energy_string() {
    SampledString s;
    s.grid = {1.0, 2.0};
    s.w_values = {-3.0, -1.0};
    s.tail_bound = 5.0;
    return s;
}

}  // namespace

TEST_CASE("weyl_function: worked examples, float and exact") {
    auto m1 = weyl_function(to_dual_string(PeakonProfile({{0.0, 2.0, 0.0}})));
    CHECK(m1.num() == Poly<double>(std::vector<double>{0, 4}));
    CHECK(m1.den() == Poly<double>(std::vector<double>{1, -2}));

    CHECK(weyl_function(StringData<double>()).is_zero());

    auto m2 = weyl_function(StringData<double>({{1.0, 2.0, 1.0}}));
    CHECK(m2.num() == Poly<double>(std::vector<double>{0, 5, 2}));
    CHECK(m2.den() == Poly<double>(std::vector<double>{1, -2, -1}));

    // exact-mode coefficients pin the worked example's algebraic eigenvalues
    StringData<Rational> sq({{Rational(1), Rational(2), Rational(1)}});
    auto mq = weyl_function(sq);
    CHECK(mq.num() == Poly<Rational>(std::vector<Rational>{Rational(0), Rational(5), Rational(2)}));
    CHECK(mq.den() == Poly<Rational>(std::vector<Rational>{Rational(1), Rational(-2), Rational(-1)}));
}

TEST_CASE("weyl_function: Herglotz on the upper half-plane, m(0) = 0") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        auto prof = random_profile(rng, 8);
        auto m = weyl_function(to_dual_string(prof));
        CHECK(m.num().coeff_or_zero(0) == 0.0);
        CHECK(herglotz_sample_check(m, 200, rng()));
    }
}

TEST_CASE("extract_measure: worked examples and error paths") {
    auto m1 = weyl_function(to_dual_string(PeakonProfile({{0.0, 2.0, 0.0}})));
    auto rho1 = extract_measure(m1);
    REQUIRE(rho1.size() == 1);
    CHECK(rho1.atom(0).lambda == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rho1.atom(0).gamma() == doctest::Approx(1.0).epsilon(1e-14));

    auto m2 = weyl_function(StringData<double>({{1.0, 2.0, 1.0}}));
    auto rho2 = extract_measure(m2);
    REQUIRE(rho2.size() == 2);
    CHECK(rho2.atom(0).lambda == doctest::Approx(-1.0 - kSqrt2).epsilon(1e-14));
    CHECK(rho2.atom(1).lambda == doctest::Approx(kSqrt2 - 1.0).epsilon(1e-14));
    CHECK(rho2.atom(1).gamma() == doctest::Approx((2.0 + kSqrt2) / 4.0).epsilon(1e-13));
    CHECK(rho2.atom(0).gamma() == doctest::Approx((2.0 - kSqrt2) / 4.0).epsilon(1e-13));

    CHECK(extract_measure(RatFun<double>()).empty());

    // non-real poles rejected
    RatFun<double> bad(Poly<double>(std::vector<double>{0, 1}),
                       Poly<double>(std::vector<double>{1, 0, 1}));
    CHECK_THROWS_AS(extract_measure(bad), NonRealPole);
    // negative residue rejected: m = -z/(1-z) has gamma = -1 at lambda = 1
    RatFun<double> neg(Poly<double>(std::vector<double>{0, -1}),
                       Poly<double>(std::vector<double>{1, -1}));
    CHECK_THROWS_AS(extract_measure(neg), NonPositiveWeight);
}

TEST_CASE("herglotz data: c1 = 0 and representation reproduces m") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        auto prof = random_profile(rng, 6);
        auto m = weyl_function(to_dual_string(prof));
        auto rho = direct_transform(prof);
        auto h = herglotz_data(rho);
        CHECK(h.c1 == 0.0);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        for (int i = 0; i < 10; ++i) {
            std::complex<double> z(d(rng), 0.5 + std::fabs(d(rng)));
            std::complex<double> rep = h.c2;
            for (const auto& a : rho.atoms())
                rep += a.gamma() * (1.0 / (a.lambda - z) - a.lambda / (1.0 + a.lambda * a.lambda));
            CHECK(std::abs(rep - m.eval(z)) <= 1e-9 * (1.0 + std::abs(m.eval(z))));
        }
    }
}

TEST_CASE("spectral_gap and gap_sandwich_report") {
    CHECK(spectral_gap(SpectralMeasure::from_values({{0.5, 1.0}})) == doctest::Approx(0.5));
    CHECK(spectral_gap(SpectralMeasure::from_values({{kSqrt2 - 1.0, 1.0}, {-1.0 - kSqrt2, 1.0}})) ==
          doctest::Approx(kSqrt2 - 1.0));
    CHECK(std::isinf(spectral_gap(SpectralMeasure())));

    auto rep = gap_sandwich_report(PeakonProfile({{0.0, 2.0, 0.0}}));
    CHECK(rep.E == doctest::Approx(1.0));
    CHECK(rep.lambda0 == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rep.lower == doctest::Approx(1.0 / 3.0));
    CHECK(rep.upper == doctest::Approx(2.0 * kSqrt2));
    CHECK(rep.pass);
    REQUIRE(rep.u_plus_ux_sup.has_value());
    CHECK(*rep.u_plus_ux_sup == doctest::Approx(2.0));
    CHECK(*rep.sup_pass);

    auto rep2 = gap_sandwich_report(PeakonProfile({{0.0, 2.0, 1.0}}));
    CHECK(rep2.lambda0 == doctest::Approx(kSqrt2 - 1.0).epsilon(1e-13));
    CHECK(rep2.pass);

    std::mt19937_64 rng(59);
    int passes = 0;
    for (int trial = 0; trial < 100; ++trial)
        if (gap_sandwich_report(random_profile(rng, 12)).pass) ++passes;
    CHECK(passes == 100);
}

TEST_CASE("trace_sum: worked identities") {
    auto rho1 = SpectralMeasure::from_values({{0.5, 1.0}});
    CHECK(trace_sum(rho1, 2.0, false) == doctest::Approx(4.0));
    // (1/2) sum lambda^{-2} = 2 = ||u||^2_H1 of u = e^{-|x|}
    CHECK(0.5 * trace_sum(rho1, 2.0, false) ==
          doctest::Approx(norm_H1_sq(PeakonProfile({{0.0, 2.0, 0.0}}))));
    CHECK(trace_sum(rho1, 1.0, true) == doctest::Approx(2.0));  // = int d omega

    auto rho2 = direct_transform(PeakonProfile({{0.0, 2.0, 1.0}}));
    CHECK(0.5 * trace_sum(rho2, 2.0, false) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(trace_sum(rho2, 1.0, true) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("identity_lambda2: worked values and random profiles") {
    auto r1 = identity_lambda2(PeakonProfile({{0.0, 2.0, 0.0}}));
    CHECK(r1.lhs == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(r1.rhs == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r1.pass);

    auto r2 = identity_lambda2(PeakonProfile({{0.0, 2.0, 1.0}}));
    CHECK(r2.lhs == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(r2.rhs == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r2.pass);

    // (10 +- 7 sqrt2)/4 split of the rhs, exactly in Q[sqrt2]
    QuadSqrt2 l1(Rational(-1), Rational(1));       // sqrt2 - 1
    QuadSqrt2 g1(Rational(1, 2), Rational(1, 4));  // (2+sqrt2)/4
    QuadSqrt2 l2(Rational(-1), Rational(-1));      // -1 - sqrt2
    QuadSqrt2 g2(Rational(1, 2), Rational(-1, 4));
    QuadSqrt2 total = g1 / (l1 * l1) + g2 / (l2 * l2);
    CHECK(total == QuadSqrt2(Rational(5)));

    auto r3 = identity_lambda2(PeakonProfile());
    CHECK(r3.lhs == 0.0);
    CHECK(r3.rhs == 0.0);

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 50; ++trial)
        CHECK(identity_lambda2(random_profile(rng, 10)).pass);
}

TEST_CASE("m'(0) equals the lambda^{-2} moment (finite differences)") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 15; ++trial) {
        auto prof = random_profile(rng, 6);
        auto m = weyl_function(to_dual_string(prof));
        auto rho = extract_measure(m);
        double d = 1e-6;
        double fd = (m.num().eval_dd(d) / m.den().eval_dd(d) -
                     m.num().eval_dd(-d) / m.den().eval_dd(-d)) /
                    (2.0 * d);
        CHECK(fd == doctest::Approx(weighted_moment(rho, 2)).epsilon(1e-6));
    }
}

TEST_CASE("classify: the positive chain and the equivalence") {
    auto p1 = PeakonProfile({{0.0, 2.0, 0.0}});
    auto c1 = classify(direct_transform(p1), p1);
    CHECK(c1.positive_spectrum);
    CHECK(c1.positive_coefficients);
    CHECK(c1.chain_spectral == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c1.chain_limit == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c1.chain_omega == doctest::Approx(2.0));
    CHECK(c1.max_rel_deviation <= 1e-10);

    auto p2 = PeakonProfile({{0.0, 2.0, 1.0}});
    auto c2 = classify(direct_transform(p2), p2);
    CHECK_FALSE(c2.positive_spectrum);
    CHECK_FALSE(c2.positive_coefficients);

    auto p3 = PeakonProfile({{-1.0, 1.0, 0.0}, {1.0, -1.0, 0.0}});
    auto c3 = classify(direct_transform(p3), p3);
    CHECK_FALSE(c3.positive_spectrum);
    CHECK_FALSE(c3.positive_coefficients);

    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        auto prof = random_profile(rng, 8, trial % 2 == 0);
        CHECK_NOTHROW(classify(direct_transform(prof), prof));
    }
}

TEST_CASE("atom count bound and genericity") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        auto prof = random_profile(rng, 10);
        auto rho = direct_transform(prof);
        size_t bound = 0;
        for (const auto& n : prof.nodes()) {
            if (n.p != 0.0) ++bound;
            if (n.h > 0.0) ++bound;
        }
        CHECK(rho.size() <= bound);
        CHECK(rho.size() == bound);  // generic equality for random data
    }
}

TEST_CASE("weyl_numeric: embedded string, zero string, self-convergence") {
    // embedded single peakon at z = i agrees with 4z/(1-2z)
    auto s = to_dual_string(PeakonProfile({{0.0, 2.0, 0.0}}));
    SampledString emb = SampledString::from_string_data(s, 4.0);
    std::complex<double> z(0.0, 1.0);
    auto r = weyl_numeric(emb, z);
    std::complex<double> expect = 4.0 * z / (1.0 - 2.0 * z);
    CHECK(std::abs(r.value - expect) <= 1e-10);
    CHECK(r.error_estimate <= 1e-12);  // tail certificate is zero

    SampledString zero;
    zero.grid = {1.0, 2.0};
    zero.w_values = {0.0, 0.0};
    CHECK(std::abs(weyl_numeric(zero, z).value) == 0.0);

    // step-like tail w(s) = -1/s on [1, X]: m(iy) stabilizes as X grows and
    // the certificate-driven error bar shrinks
    std::complex<double> iy(0.0, 0.7);
    std::vector<std::complex<double>> values;
    std::vector<double> errors;
    for (double X : {8.0, 64.0, 512.0}) {
        SampledString stepstr;
        int cells = 400;
        stepstr.grid.push_back(1.0);
        stepstr.w_values.push_back(0.0);
        double ratio = std::pow(X, 1.0 / cells);
        double pos = 1.0;
        for (int i = 0; i < cells; ++i) {
            double next = pos * ratio;
            stepstr.grid.push_back(next);
            stepstr.w_values.push_back(-2.0 / (pos + next));
            pos = next;
        }
        stepstr.tail_bound = 1.0;  // x * int_x^inf s^{-2} ds = 1
        auto rr = weyl_numeric(stepstr, iy);
        values.push_back(rr.value);
        errors.push_back(rr.error_estimate);
    }
    CHECK(std::abs(values[2] - values[1]) <= std::abs(values[1] - values[0]));
    CHECK(errors[2] < errors[0]);

    // real z rejected outside the certified gap
    CHECK_THROWS_AS(weyl_numeric(high_energy_string(), std::complex<double>(0.4, 0.0)),
                    TruncationDominates);
}

TEST_CASE("diagnostic: the Cesaro mean of w matches m(0) = 0") {
    // (1/x) int_0^x w ds tends to m(0), which vanishes for every string in
    // the class; checked on the step-like sample as a convergence diagnostic
    auto cesaro = [](const SampledString& s, double x) {
        double acc = 0.0, pos = 0.0;
        for (size_t i = 0; i < s.grid.size() && pos < x; ++i) {
            double hi = std::min(s.grid[i], x);
            acc += s.w_values[i] * (hi - pos);
            pos = hi;
        }
        return acc / x;
    };
    SampledString stepstr;
    stepstr.grid.push_back(1.0);
    stepstr.w_values.push_back(0.0);
    double pos = 1.0;
    for (int i = 0; i < 600; ++i) {
        double next = pos * 1.03;
        stepstr.grid.push_back(next);
        stepstr.w_values.push_back(-2.0 / (pos + next));
        pos = next;
    }
    double prev = HUGE_VAL;
    for (double x : {1e2, 1e3, 1e4, 1e5}) {
        double c = std::fabs(cesaro(stepstr, x));
        CHECK(c < prev);
        prev = c;
    }
    CHECK(prev < 0.05);
}
