#pragma once

#include <complex>
#include <vector>

#include "chflow/poly.hpp"

namespace chflow {

struct RootResult {
    std::vector<std::complex<double>> roots;  // all roots with multiplicity
    bool all_real_simple = false;
};

// Simultaneous-iteration (Aberth-Ehrlich) root finder with compensated Newton
// polish; restarts from a perturbed initial disk on stagnation.
RootResult poly_roots(const Poly<double>& p, double tol);

// Real roots only, sorted ascending; throws NonRealPole when a root has a
// non-negligible imaginary part.
std::vector<double> poly_real_roots(const Poly<double>& p, double tol);

}  // namespace chflow
