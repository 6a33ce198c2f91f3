#pragma once

#include <stdexcept>
#include <string>

namespace chflow {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CHFLOW_ERROR(Name)                                              \
    struct Name : Error {                                               \
        explicit Name(const std::string& what = #Name) : Error(what) {} \
    }

// ratfun
CHFLOW_ERROR(NonConvergence);
CHFLOW_ERROR(DegenerateLeadingCoefficient);
CHFLOW_ERROR(IdenticallyZeroDenominator);
CHFLOW_ERROR(NotASimplePole);

// peakon_space
CHFLOW_ERROR(NonzeroTailPlateau);
CHFLOW_ERROR(NegativeSingularMass);
CHFLOW_ERROR(NonIntegrable);

// spectral_direct
CHFLOW_ERROR(NonRealPole);
CHFLOW_ERROR(NonSimplePole);
CHFLOW_ERROR(NonPositiveWeight);
CHFLOW_ERROR(TruncationDominates);

// spectral_inverse
CHFLOW_ERROR(NegativeLength);
CHFLOW_ERROR(NegativeMass);
CHFLOW_ERROR(NonTerminating);

// flow_engine / verifier
CHFLOW_ERROR(SpectrumMismatch);
CHFLOW_ERROR(InconsistentClassification);
CHFLOW_ERROR(QuadratureFailure);
CHFLOW_ERROR(QuadratureStall);

// io / config
CHFLOW_ERROR(FormatError);

#undef CHFLOW_ERROR

}  // namespace chflow
