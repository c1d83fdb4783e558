#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rbopt {

struct InvalidParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A limit-state evaluation returned a non-finite value.
struct TaintedSampleError : std::runtime_error {
  explicit TaintedSampleError(std::int64_t index)
      : std::runtime_error("non-finite limit-state value at sample index " +
                           std::to_string(index)),
        sample_index(index) {}
  std::int64_t sample_index;
};

/// Regression design matrix is rank-deficient.
struct PoisednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ball/box intersection could not be sampled.
struct InfeasibleRegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Certification loop hit the radius guard without meeting the error bound.
struct SurrogateFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The surrogate constraint admits no feasible point in the trust region.
struct InfeasibleSubproblemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rbopt
