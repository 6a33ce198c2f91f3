#include <complex>
#include <random>

#include "chflow/quad.hpp"
#include "chflow/string_data.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace chflow;

namespace {

StringData<double> single_peakon_string() {
    return StringData<double>({{1.0, 2.0, 0.0}});
}

StringData<Rational> random_rational_string(std::mt19937_64& rng, int max_nodes) {
    int n = 1 + static_cast<int>(rng() % max_nodes);
    std::vector<StringNode<Rational>> nodes;
    Rational pos(0);
    for (int i = 0; i < n; ++i) {
        pos = pos + Rational(static_cast<int64_t>(rng() % 16 + 1), static_cast<int64_t>(rng() % 4 + 1));
        Rational jump(static_cast<int64_t>(rng() % 17) - 8, static_cast<int64_t>(rng() % 5 + 1));
        Rational v(static_cast<int64_t>(rng() % 7), static_cast<int64_t>(rng() % 3 + 1));
        if (jump.is_zero() && v.is_zero()) jump = Rational(1);
        nodes.push_back({pos, jump, v});
    }
    return StringData<Rational>(std::move(nodes));
}

}  // namespace

TEST_CASE("transfer_interval worked entries and determinant") {
    auto free1 = transfer_interval(1.0, 0.0);
    CHECK(free1.e[0] == Poly<double>(std::vector<double>{1}));
    CHECK(free1.e[1] == Poly<double>(std::vector<double>{0, 1}));
    CHECK(free1.e[2].is_zero());
    CHECK(free1.e[3] == Poly<double>(std::vector<double>{1}));

    auto a = transfer_interval(1.0, -2.0);
    CHECK(a.e[0] == Poly<double>(std::vector<double>{1, 2}));
    CHECK(a.e[1] == Poly<double>(std::vector<double>{0, 1}));
    CHECK(a.e[2] == Poly<double>(std::vector<double>{0, -4}));
    CHECK(a.e[3] == Poly<double>(std::vector<double>{1, -2}));

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        // the quadratic terms cancel to roundoff in float, exactly in rational
        auto det = transfer_interval(dist(rng), dist(rng) - 1.5).det().trimmed(1e-14);
        REQUIRE(det.degree() == 0);
        CHECK(det[0] == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(transfer_interval(0.0, 1.0), NegativeLength);
}

TEST_CASE("transfer_mass entries and degree bound of products") {
    CHECK(transfer_mass(0.0).e[2].is_zero());
    auto d = transfer_mass(1.0);
    CHECK(d.e[2] == Poly<double>(std::vector<double>{0, -1}));
    CHECK_THROWS_AS(transfer_mass(-0.5), NegativeMass);

    auto prod = transfer_mass(1.3) * transfer_interval(0.7, -0.4);
    for (int i = 0; i < 4; ++i) CHECK(prod.e[i].degree() <= 2);
}

TEST_CASE("total_transfer: worked single-peakon and upsilon examples") {
    CHECK(total_transfer(StringData<double>()).e[0] == Poly<double>(std::vector<double>{1}));

    auto w = total_transfer(single_peakon_string());
    CHECK(w.e[0] == Poly<double>(std::vector<double>{1, 2}));
    CHECK(w.e[1] == Poly<double>(std::vector<double>{0, 1}));
    CHECK(w.e[2] == Poly<double>(std::vector<double>{0, -4}));
    CHECK(w.e[3] == Poly<double>(std::vector<double>{1, -2}));

    // {s=1, jump=2, v=1}: W = [[1,0],[-z,1]] * [[1+2z, z],[-4z, 1-2z]]
    auto w2 = total_transfer(StringData<double>({{1.0, 2.0, 1.0}}));
    CHECK(w2.e[0] == Poly<double>(std::vector<double>{1, 2}));
    CHECK(w2.e[1] == Poly<double>(std::vector<double>{0, 1}));
    CHECK(w2.e[2] == Poly<double>(std::vector<double>{0, -5, -2}));
    CHECK(w2.e[3] == Poly<double>(std::vector<double>{1, -2, -1}));
}

TEST_CASE("total_transfer: exact determinant-one invariant on random strings") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = random_rational_string(rng, 6);
        auto w = total_transfer(s);
        auto det = w.det();
        REQUIRE(det.degree() == 0);
        CHECK(det[0] == Rational(1));
        // degree bound: deg W22 <= #factors = intervals + positive masses;
        // with every plateau nonzero the interval count tightens to the
        // c != 0 ones
        int masses = 0;
        bool all_c_nonzero = true;
        for (size_t j = 0; j < s.size(); ++j) {
            const Rational& c = j == 0 ? s.plateau_before_first() : s.plateau(j - 1);
            if (c.is_zero()) all_c_nonzero = false;
            if (!s.node(j).v.is_zero()) ++masses;
        }
        CHECK(w.e[3].degree() <= static_cast<int>(s.size()) + masses);
        if (all_c_nonzero) CHECK(w.e[3].degree() <= static_cast<int>(s.size()) + masses);
    }
}

TEST_CASE("propagate_numeric: free string, consistency, determinant") {
    SampledString free_str;
    free_str.grid = {1.0};
    free_str.w_values = {0.0};
    auto y = propagate_numeric(free_str, std::complex<double>(0.7, 0.3));
    CHECK(std::abs(y.a - 1.0) < 1e-15);
    CHECK(std::abs(y.b - std::complex<double>(0.7, 0.3)) < 1e-15);
    CHECK(std::abs(y.c) < 1e-15);
    CHECK(std::abs(y.d - 1.0) < 1e-15);

    // embedded StringData reproduces the exact polynomial transfer
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StringData<double> s({{0.5, 1.0, 0.25}, {1.25, -2.0, 0.0}, {2.0, 0.5, 1.5}});
    auto w = total_transfer(s);
    SampledString emb = SampledString::from_string_data(s, 2.0);
    for (int i = 0; i < 40; ++i) {
        std::complex<double> z(dist(rng), dist(rng));
        auto ynum = propagate_numeric(emb, z);
        double scale = std::exp(ynum.log_scale);
        CHECK(std::abs(ynum.a * scale - w.e[0].eval(z)) <= 1e-12 * (1.0 + std::abs(w.e[0].eval(z))));
        CHECK(std::abs(ynum.b * scale - w.e[1].eval(z)) <= 1e-12 * (1.0 + std::abs(w.e[1].eval(z))));
        CHECK(std::abs(ynum.c * scale - w.e[2].eval(z)) <= 1e-12 * (1.0 + std::abs(w.e[2].eval(z))));
        CHECK(std::abs(ynum.d * scale - w.e[3].eval(z)) <= 1e-12 * (1.0 + std::abs(w.e[3].eval(z))));
    }

    // det == 1 at random z in the unit disk
    for (int i = 0; i < 100; ++i) {
        std::complex<double> z(dist(rng), dist(rng));
        auto yd = propagate_numeric(emb, z);
        CHECK(std::abs(yd.det() * std::exp(2.0 * yd.log_scale) - 1.0) <= 1e-12);
    }
}

TEST_CASE("fundamental_system: asymptotics, eigenfunction decay, wronskian") {
    // free string: theta ~ e^{-x/2} as x -> -inf
    StringData<double> empty;
    for (double x : {-8.0, -4.0, -1.0}) {
        auto f = fundamental_system(empty, std::complex<double>(0.3, 0.1), x);
        CHECK(std::abs(f.theta - std::exp(-0.5 * x)) <= 1e-10 * std::exp(-0.5 * x));
    }

    // single peakon string at the eigenvalue: phi decays like e^{-x/2}
    auto s = single_peakon_string();
    for (double x : {10.0, 20.0}) {
        auto f = fundamental_system(s, std::complex<double>(0.5, 0.0), x);
        CHECK(std::abs(f.phi) <= 2.0 * std::exp(-0.5 * x));
    }

    // wronskian-type identity theta phi^[1] - phi theta^[1] = 1
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    StringData<double> s2({{0.8, -1.0, 0.5}, {2.2, 2.5, 0.0}});
    for (int i = 0; i < 30; ++i) {
        std::complex<double> z(dist(rng), dist(rng));
        if (std::abs(z) < 1e-3) continue;
        double x = dist(rng);
        auto f = fundamental_system(s2, z, x);
        CHECK(std::abs(f.theta * f.phi_qd - f.phi * f.theta_qd - 1.0) <= 1e-11);
    }

    // z = 0 analytic branch
    auto f0 = fundamental_system(s2, 0.0, 0.3);
    CHECK(f0.theta.real() == doctest::Approx(std::exp(-0.15)));
    CHECK(f0.phi.real() == doctest::Approx(std::exp(0.15)));
    CHECK(std::abs(f0.theta_qd) == doctest::Approx(0.0));
}

TEST_CASE("fundamental_system: weak form on node-free intervals") {
    // between nodes both omega and upsilon vanish, so a solution satisfies
    // int f' h' + (1/4) int f h = 0 against hat functions supported there
    StringData<double> s({{0.8, -1.0, 0.5}, {2.2, 2.5, 0.0}});
    std::complex<double> z(0.6, 0.4);
    double a = std::log(0.9), b = std::log(2.0);
    double mid = 0.5 * (a + b);
    auto f_at = [&](double x) { return fundamental_system(s, z, x).phi; };
    auto fprime = [&](double x) {
        double d = 1e-6;
        return (f_at(x + d) - f_at(x - d)) / (2.0 * d);
    };
    double slope = 2.0 / (b - a);
    for (int comp : {+1, -1}) {
        auto pick = [&](std::complex<double> v) { return comp > 0 ? v.real() : v.imag(); };
        double t1 = adaptive_simpson([&](double x) { return pick(fprime(x)) * slope; }, a, mid, 1e-10);
        t1 += adaptive_simpson([&](double x) { return pick(fprime(x)) * -slope; }, mid, b, 1e-10);
        auto hat = [&](double x) { return x < mid ? (x - a) * slope : (b - x) * slope; };
        double t2 = adaptive_simpson([&](double x) { return 0.25 * pick(f_at(x)) * hat(x); }, a, b, 1e-10);
        CHECK(std::fabs(t1 + t2) <= 1e-7);
    }
}

TEST_CASE("propagate_numeric agrees with partial transfer products at nodes") {
    StringData<double> s({{0.5, 1.0, 0.25}, {1.25, -2.0, 0.0}, {2.0, 0.5, 1.5}});
    SampledString emb = SampledString::from_string_data(s, 2.0);
    std::complex<double> z(0.4, -0.6);
    PolyMat2<double> partial = PolyMat2<double>::identity();
    double prev = 0.0;
    for (size_t j = 0; j < s.size(); ++j) {
        const auto& n = s.node(j);
        const double c = j == 0 ? s.plateau_before_first() : s.plateau(j - 1);
        partial = transfer_interval(n.s - prev, c) * partial;
        // the measure-integral convention excludes the atom at the endpoint
        auto y = propagate_numeric(emb, z, n.s);
        double scale = std::exp(y.log_scale);
        CHECK(std::abs(y.a * scale - partial.e[0].eval(z)) <= 1e-12 * (1.0 + std::abs(partial.e[0].eval(z))));
        CHECK(std::abs(y.d * scale - partial.e[3].eval(z)) <= 1e-12 * (1.0 + std::abs(partial.e[3].eval(z))));
        if (!scalar_traits<double>::is_zero(n.v)) partial = transfer_mass(n.v) * partial;
        prev = n.s;
    }
}
