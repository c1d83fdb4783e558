#pragma once

#include <string>
#include <vector>

#include "rbopt/cantilever.hpp"
#include "rbopt/driver.hpp"
#include "rbopt/score_function.hpp"

namespace rbopt {

enum class Method { kSf, kDftr, kDftrR };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// One cell of the comparison matrix: a method at a sample size and
/// width/height noise level, repeated over seeds seed_base + i.
struct ExperimentSpec {
  Method method = Method::kDftrR;
  std::int64_t n_mc = 10000;
  double sigma_wt = 1e-1;
  double theta = 0.1;
  int repetitions = 20;
  std::uint64_t seed_base = 1000;
  Vec x_0;      // empty = problem default
  TrParams tr;  // solver + radius schedule; eps_star resolved from theta

  void validate() const;
};

struct RunRow {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string termination;
  double error_x = 0.0;  // ||x_opt - x_benchmark||
  double error_f = 0.0;  // |f(x_opt) - f(x_benchmark)|
  double wall_ms = 0.0;
  EvalCounters counters;
  Vec x_opt;
  double f_opt = 0.0;
};

struct ExperimentSummary {
  double avg_error_x = 0.0;
  double avg_error_f = 0.0;
  double avg_full_evals = 0.0;
  double failure_rate = 0.0;
  int repetitions = 0;
  std::vector<RunRow> rows;
};

/// Dispatch one optimization run for a method.
RunResult run_method(const RboProblem& problem, Method method, const Vec& x0,
                     const TrParams& tr, std::int64_t n_mc, RngStream rng);

/// Repeated cantilever runs with disjoint seed streams; failed runs are kept
/// as rows, excluded from the means and counted in failure_rate.
ExperimentSummary run_experiment(const ExperimentSpec& spec,
                                 const Vec& x_benchmark);

/// Reference solution: the score-function method at n_ref samples from five
/// spread starting points; returns the best feasible solution found.
Vec benchmark_solution(const CantileverConfig& cfg, std::int64_t n_ref,
                       RngStream rng, EvalCounters* counters = nullptr);

/// Failure-probability oracle with a cached standard-normal batch reused
/// across designs, so auditing many solutions costs no fresh draws.
class CantileverOracle {
 public:
  CantileverOracle(const CantileverConfig& cfg, std::int64_t n, RngStream rng);
  double failure_probability(const Vec& x) const;
  std::int64_t n() const { return xi_.rows(); }

 private:
  CantileverConfig cfg_;
  Mat xi_;  // n x 5 standard normals
};

struct GridScan {
  Vec x_best;
  double f_best = 0.0;
  double p_at_best = 0.0;
  int per_axis = 0;
};

/// Exhaustive feasibility/cost scan over a per_axis^2 grid of the design box
/// using the oracle; the cross-check for the reference solution.
GridScan grid_scan(const CantileverConfig& cfg, int per_axis,
                   const CantileverOracle& oracle);

}  // namespace rbopt
