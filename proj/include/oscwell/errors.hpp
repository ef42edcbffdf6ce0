#pragma once

#include <stdexcept>
#include <string>

namespace oscwell {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Drift does not have exactly three zeros on the scan interval.
struct BistabilityLost : Error {
  using Error::Error;
};

/// Adaptive quadrature hit its refinement limit before reaching tolerance.
struct QuadratureFailure : Error {
  using Error::Error;
};

/// Eigensolver iteration limit hit.
struct ConvergenceFailure : Error {
  using Error::Error;
};

/// Eigenfunction sign alignment across neighbouring slices failed.
struct SignAmbiguity : Error {
  using Error::Error;
};

/// Periodic collocation matrix is numerically singular.
struct SingularSystem : Error {
  using Error::Error;
};

/// SDE path left the confinement region (time step too large).
struct Blowup : Error {
  using Error::Error;
};

/// More than 1% of Monte Carlo paths were censored at max_time.
struct ExcessCensoring : Error {
  using Error::Error;
};

/// Barrier profile has no isolated nondegenerate extremum in y.
struct NoInteriorPeak : Error {
  using Error::Error;
};

/// Required CSV/JSON artifact is absent or empty.
struct MissingArtifact : Error {
  using Error::Error;
};

/// Assembled density is not positive where positivity is required.
struct NegativeDensity : Error {
  using Error::Error;
};

/// Run configuration is invalid.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace oscwell
