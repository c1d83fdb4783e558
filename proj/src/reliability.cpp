#include "rbopt/reliability.hpp"

#include <cmath>
#include <limits>

#include "rbopt/kernels.hpp"

namespace rbopt {

ReliabilityEvaluation full_evaluation(const RboProblem& problem, const Vec& x,
                                      std::int64_t n, RngStream rng,
                                      EvalCounters& counters) {
  if (n < 1) throw InvalidParameterError("sample count must be >= 1");
  if (!problem.space.contains(x))
    throw DomainError("full_evaluation: design point outside the design space");

  ReliabilityEvaluation eval;
  eval.center = x;
  eval.n = n;
  eval.samples =
      problem.dist->sample(x, n, rng.child(stream_label::kSampling));
  eval.g_values.resize(n);

  const auto& g = problem.limit.value;
  kern::map(n, [&](std::int64_t i) {
    eval.g_values[i] = g(eval.samples.row(i).transpose());
  });
  counters.full_evals += 1;
  counters.g_calls += n;

  const std::int64_t bad = kern::first_index(
      n, [&](std::int64_t i) { return !std::isfinite(eval.g_values[i]); });
  if (bad >= 0) throw TaintedSampleError(bad);

  eval.indicator.resize(static_cast<std::size_t>(n));
  kern::map(n, [&](std::int64_t i) {
    eval.indicator[static_cast<std::size_t>(i)] =
        eval.g_values[i] < 0.0 ? 1 : 0;
  });

  const std::int64_t failures = kern::count(n, [&](std::int64_t i) {
    return eval.indicator[static_cast<std::size_t>(i)] != 0;
  });
  eval.p_hat = static_cast<double>(failures) / static_cast<double>(n);
  eval.std_err =
      std::sqrt(eval.p_hat * (1.0 - eval.p_hat) / static_cast<double>(n));
  return eval;
}

ReweightedEstimate reweighted_evaluation(const ReliabilityEvaluation& eval,
                                         const ParametricDistribution& dist,
                                         const Vec& x, EvalCounters& counters) {
  const std::int64_t n = eval.n;
  const Vec log_q_x = dist.log_density_rows(eval.samples, x);
  const Vec log_q_c = dist.log_density_rows(eval.samples, eval.center);

  Vec r(n);
  kern::map(n, [&](std::int64_t i) { r[i] = std::exp(log_q_x[i] - log_q_c[i]); });

  const double sum_r = kern::block_sum(n, [&](std::int64_t i) { return r[i]; });
  const double sum_r2 =
      kern::block_sum(n, [&](std::int64_t i) { return r[i] * r[i]; });
  const double sum_ir = kern::block_sum(n, [&](std::int64_t i) {
    return eval.indicator[static_cast<std::size_t>(i)] ? r[i] : 0.0;
  });
  const double sum_ir2 = kern::block_sum(n, [&](std::int64_t i) {
    return eval.indicator[static_cast<std::size_t>(i)] ? r[i] * r[i] : 0.0;
  });

  ReweightedEstimate est;
  est.x = x;
  est.p_hat = sum_ir / static_cast<double>(n);
  // Delta-method standard error of the mean of the weighted indicators.
  const double mean_sq = sum_ir2 / static_cast<double>(n);
  est.std_err = std::sqrt(
      std::max(0.0, mean_sq - est.p_hat * est.p_hat) / static_cast<double>(n));
  est.ess = sum_r2 > 0.0 ? sum_r * sum_r / sum_r2 : 0.0;
  est.weights.min = r.minCoeff();
  est.weights.max = r.maxCoeff();
  est.weights.mean = sum_r / static_cast<double>(n);
  est.degenerate = est.ess < kEssFloorFraction * static_cast<double>(n);
  counters.reweighted_evals += 1;
  return est;
}

double log_constraint(double p_hat, double theta, std::int64_t n) {
  if (!(theta > 0.0 && theta < 1.0))
    throw InvalidParameterError("theta must lie in (0,1)");
  if (n < 1) throw InvalidParameterError("sample count must be >= 1");
  const double p_floor = 0.5 / static_cast<double>(n);
  return std::log(std::max(p_hat, p_floor)) - std::log(theta);
}

}  // namespace rbopt
