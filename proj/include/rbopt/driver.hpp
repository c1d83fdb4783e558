#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rbopt/subproblem.hpp"

namespace rbopt {

enum class AcceptanceMode { kFull, kReweighted };

enum class Termination {
  kInnerPoint,        // step landed strictly inside the trust region
  kFStall,            // cost change fell below delta
  kRhoFloor,          // radius fell below rho_min after expansion
  kMaxOuter,          // outer-iteration safety bound
  kSurrogateFailure,  // certification or subproblem infeasible at the guard
};

std::string to_string(Termination t);

struct TrParams {
  double rho_0 = 0.1;
  double rho_min = 1e-6;
  double eps_star = -1.0;  // < 0 means "resolve to 0.1 * theta at run start"
  double omega_plus = 1.1;
  double omega_minus = 0.9;
  double delta = 1e-4;
  int m_points = 20;
  std::int64_t n_mc = 10000;
  int max_outer = 500;
  AcceptanceMode acceptance_mode = AcceptanceMode::kFull;
  // Reusing the acceptance evaluation as the next center evaluation saves one
  // full evaluation per iteration but breaks the counter identity
  // full_evals == surr_constr calls + acceptance checks; off by default.
  bool recycle_acceptance_eval = false;
  SolverOptions solver;

  void validate() const;
  double resolved_eps_star(double theta) const {
    return eps_star > 0.0 ? eps_star : 0.1 * theta;
  }
};

struct IterationRecord {
  int k = 0;
  Vec x;       // candidate produced at this iteration
  double f = 0.0;
  double rho_before = 0.0;
  double rho_after = 0.0;
  double p_hat_accept = 0.0;
  bool accepted = false;
  int inner_rejections = 0;
  std::int64_t full_evals_so_far = 0;
  std::optional<QuadraticSurrogate> surrogate;
};

struct RunResult {
  Vec x_opt;
  double f_opt = 0.0;
  Termination termination = Termination::kMaxOuter;
  double p_hat_accept = 0.0;  // estimate recorded when x_opt was accepted
  std::vector<IterationRecord> iterations;
  EvalCounters counters;
  std::int64_t surr_constr_calls = 0;
  std::int64_t acceptance_checks = 0;
};

/// Derivative-free trust-region solve with sample reweighting: each inner
/// pass certifies a surrogate from a single full evaluation at the center,
/// solves the subproblem, and accepts when the candidate's constraint
/// estimate is negative. Accepted steps expand the radius by omega_plus;
/// rejected passes contract by omega_minus.
RunResult run_dftr(const RboProblem& problem, const Vec& x0,
                   const TrParams& params, RngStream rng);

/// Same driver, but every constraint value at every surrogate design point
/// comes from its own full evaluation (m full evaluations per certification
/// pass, sharing one draw stream per pass).
RunResult run_dftr_no_reweight(const RboProblem& problem, const Vec& x0,
                               const TrParams& params, RngStream rng);

}  // namespace rbopt
