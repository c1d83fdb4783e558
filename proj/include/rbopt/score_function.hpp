#pragma once

#include "rbopt/driver.hpp"

namespace rbopt {

/// Score-function estimate of the failure probability and its design
/// gradient from one shared Monte Carlo batch.
struct SfGradientEstimate {
  Vec x;
  double p_hat = 0.0;
  Vec grad_p;  // (1/N) sum I(z) * score(z; x)
  Vec grad_c;  // grad_p / max(p_hat, 0.5/n)
  std::int64_t n = 0;
};

/// One full evaluation at x plus score evaluations at every sample.
SfGradientEstimate sf_gradient(const RboProblem& problem, const Vec& x,
                               std::int64_t n, RngStream rng,
                               EvalCounters& counters);

/// Gradient-based comparator: the SQP engine on {min f : c(x) <= 0, box} with
/// constraint values and gradients supplied by sf_gradient. All evaluations
/// of a run share one draw stream (common random numbers), so c is a
/// deterministic function of x during line searches. Every constraint
/// evaluation is a full evaluation; value and gradient at a point share one
/// batch of n limit-state calls.
RunResult run_sf(const RboProblem& problem, const Vec& x0, std::int64_t n,
                 const SolverOptions& solver_opts, RngStream rng);

}  // namespace rbopt
