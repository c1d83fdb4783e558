#include "rbopt/score_function.hpp"

#include <cmath>

#include "rbopt/kernels.hpp"

namespace rbopt {

namespace {

Vec score_sum(const RboProblem& problem, const ReliabilityEvaluation& eval) {
  const int d = problem.space.dim();
  // fixed-block reduction per coordinate keeps the sum order deterministic
  Vec total(d);
  std::vector<Vec> scores(static_cast<std::size_t>(eval.n));
  kern::map(eval.n, [&](std::int64_t i) {
    if (eval.indicator[static_cast<std::size_t>(i)]) {
      scores[static_cast<std::size_t>(i)] = problem.dist->score(
          eval.samples.row(i).transpose(), eval.center);
    }
  });
  for (int j = 0; j < d; ++j) {
    total[j] = kern::block_sum(eval.n, [&](std::int64_t i) {
      return eval.indicator[static_cast<std::size_t>(i)]
                 ? scores[static_cast<std::size_t>(i)][j]
                 : 0.0;
    });
  }
  return total;
}

SfGradientEstimate estimate_from_eval(const RboProblem& problem,
                                      const ReliabilityEvaluation& eval) {
  SfGradientEstimate est;
  est.x = eval.center;
  est.n = eval.n;
  est.p_hat = eval.p_hat;
  est.grad_p = score_sum(problem, eval) / static_cast<double>(eval.n);
  const double p_floor = 0.5 / static_cast<double>(eval.n);
  est.grad_c = est.grad_p / std::max(est.p_hat, p_floor);
  return est;
}

}  // namespace

SfGradientEstimate sf_gradient(const RboProblem& problem, const Vec& x,
                               std::int64_t n, RngStream rng,
                               EvalCounters& counters) {
  const ReliabilityEvaluation eval =
      full_evaluation(problem, x, n, rng, counters);
  return estimate_from_eval(problem, eval);
}

RunResult run_sf(const RboProblem& problem, const Vec& x0, std::int64_t n,
                 const SolverOptions& solver_opts, RngStream rng) {
  problem.validate();
  if (!problem.space.contains(x0))
    throw DomainError("starting point outside the design space");

  RunResult result;
  EvalCounters& counters = result.counters;

  // One stream for the whole run: every evaluation sees the same underlying
  // draws, so the constraint is a deterministic function of x.
  const RngStream crn = rng.child(stream_label::kCrn);

  // Cache the last evaluation so a value query followed by a gradient query
  // at the same point consumes a single batch.
  struct Cache {
    bool valid = false;
    Vec x;
    ReliabilityEvaluation eval;
  } cache;

  auto same_point = [](const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return false;
    return true;
  };
  auto evaluate_p = [&](const Vec& x) -> const ReliabilityEvaluation& {
    if (!cache.valid || !same_point(cache.x, x)) {
      cache.eval = full_evaluation(problem, x, n, crn, counters);
      cache.x = x;
      cache.valid = true;
    }
    return cache.eval;
  };

  SmoothFn objective = [&](const Vec& x, Vec* grad) {
    if (grad) {
      *grad = problem.cost.gradient ? problem.cost.gradient(x)
                                    : central_gradient(problem.cost.value, x);
    }
    return problem.cost.value(x);
  };
  SmoothFn constraint = [&](const Vec& x, Vec* grad) {
    const ReliabilityEvaluation& eval = evaluate_p(x);
    if (grad) *grad = estimate_from_eval(problem, eval).grad_c;
    return log_constraint(eval.p_hat, problem.theta, n);
  };

  Nlp nlp;
  nlp.objective = objective;
  nlp.inequalities = {constraint};
  nlp.lower = problem.space.lower;
  nlp.upper = problem.space.upper;

  SolverOptions opts = solver_opts;
  if (opts.stall_step_tol == 0.0) {
    // steps below the boundary-localization noise chase Monte Carlo error
    opts.stall_step_tol =
        0.1 * std::sqrt((1.0 - problem.theta) /
                        (problem.theta * static_cast<double>(n)));
  }
  if (!std::isfinite(opts.max_step)) {
    // walk in bounded steps so the estimate picks up failing samples before
    // the iterate crosses the whole feasibility transition zone
    const Vec span = (problem.space.upper - problem.space.lower)
                         .cwiseMin(Vec::Constant(problem.space.dim(), 1e6));
    opts.max_step = 0.05 * span.norm();
  }
  const SqpReport rep = sqp_minimize(nlp, x0, opts);

  result.x_opt = rep.x;
  result.f_opt = rep.f;
  result.termination = rep.converged || rep.stalled ? Termination::kFStall
                                                    : Termination::kMaxOuter;
  result.p_hat_accept = evaluate_p(rep.x).p_hat;
  result.acceptance_checks = 0;

  IterationRecord record;
  record.k = 0;
  record.x = rep.x;
  record.f = rep.f;
  record.p_hat_accept = result.p_hat_accept;
  record.accepted = rep.max_violation <= kSubproblemTolC;
  record.inner_rejections = 0;
  record.full_evals_so_far = counters.full_evals;
  result.iterations.push_back(std::move(record));
  return result;
}

}  // namespace rbopt
