#ifndef CMRP_ERRORS_HPP
#define CMRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmrp {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration: invalid parameters, unknown keys, violated
/// construction constraints.
struct ConfigError : Error {
  using Error::Error;
};

/// Operation not defined for the given law family (e.g. pdf of a
/// Degenerate law).
struct UnsupportedError : Error {
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (zero kernel
/// density on a path, nonpositive likelihood ratio, ...).
struct DomainError : Error {
  using Error::Error;
};

/// Query outside the time window covered by a simulated path.
struct OutOfWindowError : Error {
  using Error::Error;
};

/// A single path exceeded the hard claim-count cap.
struct RunawayError : Error {
  using Error::Error;
};

/// Model failed validation (nonfinite kernel mean, claims with mass at 0).
struct ValidationError : Error {
  using Error::Error;
};

/// A numerical check could not be decided (quadrature non-convergence,
/// all paths truncated, degenerate importance weights). Distinct from a
/// check that ran and failed.
struct InconclusiveError : Error {
  using Error::Error;
};

/// Estimator produced but untrustworthy (e.g. > 50% of IS paths truncated).
struct UnreliableEstimateError : Error {
  using Error::Error;
};

}  // namespace cmrp

#endif  // CMRP_ERRORS_HPP
