#include "rbopt/driver.hpp"

#include <cmath>

namespace rbopt {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kInnerPoint: return "inner_point";
    case Termination::kFStall: return "f_stall";
    case Termination::kRhoFloor: return "rho_floor";
    case Termination::kMaxOuter: return "max_outer";
    case Termination::kSurrogateFailure: return "surrogate_failure";
  }
  return "unknown";
}

void TrParams::validate() const {
  if (!(omega_minus > 0.0 && omega_minus < 1.0))
    throw InvalidParameterError("omega_minus must lie in (0,1)");
  if (!(omega_plus > 1.0))
    throw InvalidParameterError("omega_plus must be > 1");
  if (!(rho_min > 0.0 && rho_min < rho_0))
    throw InvalidParameterError("require 0 < rho_min < rho_0");
  if (!(delta > 0.0)) throw InvalidParameterError("delta must be > 0");
  if (m_points < 3) throw InvalidParameterError("m_points too small");
  if (n_mc < 1) throw InvalidParameterError("n_mc must be >= 1");
  if (max_outer < 1) throw InvalidParameterError("max_outer must be >= 1");
}

namespace {

RunResult run_dftr_impl(const RboProblem& problem, const Vec& x0,
                        const TrParams& params, RngStream rng,
                        SurrValueMode mode) {
  problem.validate();
  params.validate();
  if (!problem.space.contains(x0))
    throw DomainError("starting point outside the design space");
  const double eps_star = params.resolved_eps_star(problem.theta);

  RunResult result;
  EvalCounters& counters = result.counters;

  Vec x_k = x0;
  double f_k = problem.cost.value(x_k);
  double rho = params.rho_0;

  // Accepted iterate with least cost, used on abnormal termination so the
  // returned point always passed its acceptance test.
  bool have_best = false;
  Vec best_x;
  double best_f = 0.0, best_p = 0.0;

  std::optional<ReliabilityEvaluation> recycled;

  for (int k = 0; k < params.max_outer; ++k) {
    const RngStream iter_rng =
        rng.child(stream_label::kIteration, static_cast<std::uint64_t>(k));

    IterationRecord record;
    record.k = k;
    record.rho_before = rho;

    bool accepted = false;
    Vec x_next;
    double f_next = 0.0, p_accept = 0.0, rho_certified = rho;

    for (int pass = 0;; ++pass) {
      const RngStream pass_rng =
          iter_rng.child(stream_label::kPass, static_cast<std::uint64_t>(pass));

      SurrogateBuild build;
      try {
        if (recycled && mode == SurrValueMode::kReweight) {
          // acceptance evaluation reused as this center's evaluation
          build = surr_constr_with_eval(problem, x_k, rho, eps_star,
                                        params.omega_minus, params.m_points,
                                        params.n_mc, pass_rng, counters,
                                        std::move(*recycled), params.rho_min);
          recycled.reset();
        } else {
          build = surr_constr(problem, x_k, rho, eps_star, params.omega_minus,
                              params.m_points, params.n_mc, pass_rng, counters,
                              mode, params.rho_min);
        }
        result.surr_constr_calls += 1;
      } catch (const SurrogateFailureError&) {
        result.surr_constr_calls += 1;
        result.termination = Termination::kSurrogateFailure;
        record.inner_rejections = pass;
        record.rho_after = rho;
        record.x = x_k;
        record.f = f_k;
        record.full_evals_so_far = counters.full_evals;
        result.iterations.push_back(std::move(record));
        result.x_opt = have_best ? best_x : x_k;
        result.f_opt = have_best ? best_f : f_k;
        result.p_hat_accept = have_best ? best_p : 1.0;
        return result;
      }
      rho = build.radius;
      rho_certified = rho;
      record.surrogate = build.model;

      SubproblemSpec spec;
      spec.cost = problem.cost;
      spec.surrogate = build.model;
      spec.center = x_k;
      spec.radius = rho;
      spec.box = problem.space;

      bool rejected = false;
      try {
        const SubproblemResult sp = solve_subproblem(
            spec, params.solver, pass_rng.child(stream_label::kMultiStart));
        if (!sp.feasible) {
          rejected = true;
        } else {
          x_next = sp.x_next;
        }
      } catch (const InfeasibleSubproblemError&) {
        rejected = true;
      }

      if (!rejected) {
        // acceptance test c(x_next) < 0
        result.acceptance_checks += 1;
        if (params.acceptance_mode == AcceptanceMode::kFull) {
          ReliabilityEvaluation acc = full_evaluation(
              problem, x_next, params.n_mc,
              pass_rng.child(stream_label::kAcceptance), counters);
          p_accept = acc.p_hat;
          if (params.recycle_acceptance_eval && mode == SurrValueMode::kReweight)
            recycled = std::move(acc);
        } else {
          const ReweightedEstimate est = reweighted_evaluation(
              build.center_eval, *problem.dist, x_next, counters);
          p_accept = est.p_hat;
        }
        const double c_accept =
            log_constraint(p_accept, problem.theta, params.n_mc);
        if (c_accept < 0.0) {
          accepted = true;
          f_next = problem.cost.value(x_next);
          rho *= params.omega_plus;
          record.inner_rejections = pass;
          break;
        }
        if (recycled) recycled.reset();  // rejected candidate; do not reuse
      }

      rho *= params.omega_minus;
      if (rho < params.rho_min) {
        // the next certification attempt cannot run; treat as failure
        result.termination = Termination::kSurrogateFailure;
        record.inner_rejections = pass + 1;
        record.rho_after = rho;
        record.x = x_k;
        record.f = f_k;
        record.full_evals_so_far = counters.full_evals;
        result.iterations.push_back(std::move(record));
        result.x_opt = have_best ? best_x : x_k;
        result.f_opt = have_best ? best_f : f_k;
        result.p_hat_accept = have_best ? best_p : 1.0;
        return result;
      }
    }

    record.x = x_next;
    record.f = f_next;
    record.rho_after = rho;
    record.p_hat_accept = p_accept;
    record.accepted = accepted;
    record.full_evals_so_far = counters.full_evals;
    result.iterations.push_back(record);

    if (!have_best || f_next < best_f) {
      have_best = true;
      best_x = x_next;
      best_f = f_next;
      best_p = p_accept;
    }

    const double step = (x_next - x_k).norm();
    const bool f_stall = std::abs(f_next - f_k) <= params.delta;
    // steps within solver slack of the boundary count as boundary hits
    const bool inner_point = step < rho_certified * (1.0 - 1e-6);
    const bool rho_floor = rho < params.rho_min;
    if (f_stall || inner_point || rho_floor) {
      result.termination = f_stall ? Termination::kFStall
                           : inner_point ? Termination::kInnerPoint
                                         : Termination::kRhoFloor;
      result.x_opt = x_next;
      result.f_opt = f_next;
      result.p_hat_accept = p_accept;
      return result;
    }

    x_k = x_next;
    f_k = f_next;
  }

  // max_outer: the current iterate was accepted on the last iteration
  result.termination = Termination::kMaxOuter;
  result.x_opt = x_k;
  result.f_opt = f_k;
  result.p_hat_accept =
      result.iterations.empty() ? 1.0 : result.iterations.back().p_hat_accept;
  return result;
}

}  // namespace

RunResult run_dftr(const RboProblem& problem, const Vec& x0,
                   const TrParams& params, RngStream rng) {
  return run_dftr_impl(problem, x0, params, rng, SurrValueMode::kReweight);
}

RunResult run_dftr_no_reweight(const RboProblem& problem, const Vec& x0,
                               const TrParams& params, RngStream rng) {
  return run_dftr_impl(problem, x0, params, rng, SurrValueMode::kFullCrn);
}

}  // namespace rbopt
