#pragma once

#include <stdexcept>
#include <string>

namespace mpcorr {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or non-finite input values (bad operands, probabilities < 0, ...).
struct InputDomainError : Error {
    using Error::Error;
};

/// A root finder failed to bracket or converge. Carries the last bracket.
struct ConvergenceError : Error {
    double bracket_lo;
    double bracket_hi;
    ConvergenceError(const std::string& msg, double lo, double hi)
        : Error(msg), bracket_lo(lo), bracket_hi(hi) {}
};

/// All nonlinearity derivatives vanished; the implicit gradient is undefined.
struct DegenerateGradientError : Error {
    using Error::Error;
};

/// Energy target outside the achievable range of the ensemble.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Requested entropy index not supported by the closed-form mapping.
struct UnsupportedIndexError : Error {
    using Error::Error;
};

/// Explicit integrator step size violates the stability guard.
struct StabilityError : Error {
    using Error::Error;
};

/// Regression design is rank deficient or otherwise unusable.
struct FitError : Error {
    using Error::Error;
};

/// Input vector cannot be standardized (zero variance).
struct NormalizationError : Error {
    using Error::Error;
};

/// Bad experiment configuration (unknown name, wrong parameter type, ...).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace mpcorr
