#pragma once

#include <cstdint>
#include <vector>

#include "rbopt/problem.hpp"

namespace rbopt {

/// Read-only snapshot of evaluation effort. full_evals counts Monte Carlo
/// estimations that actually ran the limit state; g_calls counts individual
/// limit-state evaluations; reweighted_evals never touch the limit state.
struct EvalCounters {
  std::int64_t full_evals = 0;
  std::int64_t reweighted_evals = 0;
  std::int64_t g_calls = 0;
};

/// One full Monte Carlo estimation at a center design: retained samples,
/// limit-state values, failure indicators and the estimate. Immutable and
/// shareable once built.
struct ReliabilityEvaluation {
  Vec center;
  Mat samples;                          // n x z_dim
  Vec g_values;                         // n
  std::vector<std::uint8_t> indicator;  // 1 iff g < 0
  double p_hat = 0.0;
  double std_err = 0.0;
  std::int64_t n = 0;
};

struct WeightsSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Failure-probability estimate at a nearby design obtained by reweighting a
/// center evaluation's samples with likelihood ratios.
struct ReweightedEstimate {
  Vec x;
  double p_hat = 0.0;
  double std_err = 0.0;
  double ess = 0.0;  // (sum r)^2 / sum r^2
  WeightsSummary weights;
  bool degenerate = false;  // ess fell below the floor; estimate is flagged
};

/// Reweighted estimates with ess below n * kEssFloorFraction are flagged
/// degenerate (weight blow-up silently corrupts downstream fits otherwise).
inline constexpr double kEssFloorFraction = 0.1;

/// Draw n samples from q(.; x), evaluate the limit state on each, and return
/// the populated evaluation. Partitions work across workers; the reduction
/// order is fixed by sample index, so results are bit-identical for a given
/// stream regardless of worker count.
///
/// Throws TaintedSampleError (with the offending index) when the limit state
/// returns a non-finite value, and DomainError when x is outside the space.
ReliabilityEvaluation full_evaluation(const RboProblem& problem, const Vec& x,
                                      std::int64_t n, RngStream rng,
                                      EvalCounters& counters);

/// Estimate the failure probability at x by assigning likelihood-ratio
/// weights r = q(z;x)/q(z;center) to the center evaluation's samples. Weights
/// are computed as exp(log-density differences). Performs no limit-state
/// evaluations.
ReweightedEstimate reweighted_evaluation(const ReliabilityEvaluation& eval,
                                         const ParametricDistribution& dist,
                                         const Vec& x, EvalCounters& counters);

/// log p_hat - log theta, with p_hat floored at 0.5/n so zero-failure
/// estimates stay finite. Monotone nondecreasing in p_hat.
double log_constraint(double p_hat, double theta, std::int64_t n);

}  // namespace rbopt
