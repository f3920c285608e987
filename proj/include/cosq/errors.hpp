#pragma once

#include <stdexcept>
#include <string>

namespace cosq {

// Invalid parameters, probabilities or configuration values are reported as
// std::invalid_argument. The types below cover failures of the numerics.

/// A quadrature, truncation or root search did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The initial bracket of a root search does not straddle the target.
/// For a COS CDF this means the expansion is not monotone; increase N.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The truncation range collapsed (a >= b); the CDF tolerance is too large
/// compared with the scale of the distribution.
class DegenerateRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosq
