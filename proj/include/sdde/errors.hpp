#pragma once

#include <stdexcept>
#include <string>

namespace sdde {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A custom delay function left the admissible band [-C, floor(t/tau)*tau].
struct DelayBoundViolation : Error {
    using Error::Error;
};

/// Requested model label is not in the registry.
struct UnknownModel : Error {
    using Error::Error;
};

/// Grid sizes do not line up (n*T not integral, factor does not divide n, ...).
struct GridMisaligned : Error {
    using Error::Error;
};

/// Queried a Brownian path or Euler interpolant at a time off the stored grid.
struct OffGridQuery : Error {
    using Error::Error;
};

/// Scheme step width does not resolve the delay lattice (n*tau not integral).
struct DelayGridMisaligned : Error {
    using Error::Error;
};

/// A custom delay landed between grid points and no interpolation policy is set.
struct OffGridDelay : Error {
    using Error::Error;
};

/// State or coefficient became non-finite or exceeded the blow-up guard.
struct NumericalBlowup : Error {
    NumericalBlowup(const std::string& what, long step) : Error(what), step_index(step) {}
    long step_index;
};

/// sup_error called on paths that do not share model and noise seed.
struct IncomparablePaths : Error {
    using Error::Error;
};

/// Method-of-steps oracle requested for a model with state-dependent coefficients.
struct OracleUnavailable : Error {
    using Error::Error;
};

/// Invalid experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace sdde
