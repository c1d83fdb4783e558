#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "rbopt/problem.hpp"

namespace rbopt {

struct SolverOptions {
  double kkt_tol = 1e-8;
  int n_starts = 5;
  int max_sqp_iters = 200;
  // Cap on the QP step length. Monte Carlo constraint estimates carry no
  // gradient information where the indicator never fires (p_hat is exactly
  // 0 or 1), so an uncapped first step can vault the whole transition zone.
  double max_step = std::numeric_limits<double>::infinity();
  // Stop after three consecutive steps below this relative size. 0 disables.
  // Set for noisy constraints, where the KKT residual never reaches kkt_tol
  // and sub-noise steps are statistically meaningless.
  double stall_step_tol = 0.0;
};

/// Smooth scalar function with gradient: returns the value; fills *grad when
/// grad is non-null.
using SmoothFn = std::function<double(const Vec&, Vec* grad)>;

/// min objective(x)  s.t.  inequalities[i](x) <= 0  and  lower <= x <= upper.
struct Nlp {
  SmoothFn objective;
  std::vector<SmoothFn> inequalities;
  Vec lower;
  Vec upper;
};

struct SqpReport {
  Vec x;
  double f = 0.0;
  Vec lambda;  // multipliers of the nonlinear inequalities
  double kkt_residual = 0.0;
  double max_violation = 0.0;
  int iterations = 0;
  bool converged = false;       // KKT residual met the tolerance
  bool stalled = false;         // line search or step size bottomed out
  bool qp_infeasible = false;   // linearized constraints inconsistent at end
};

/// SQP with a damped-BFGS Lagrangian Hessian, an l1 merit line search, and an
/// active-set QP on the linearized constraints. The box is handled exactly
/// inside the QP, so iterates never leave it.
SqpReport sqp_minimize(const Nlp& nlp, Vec x0, const SolverOptions& opts);

/// Central-difference gradient with step 1e-6 * (1 + |x_i|) per coordinate.
Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x);

}  // namespace rbopt
