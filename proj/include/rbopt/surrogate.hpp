#pragma once

#include <cstdint>

#include "rbopt/reliability.hpp"

namespace rbopt {

/// Quadratic polynomial over the graded-lexicographic monomial basis
/// [1, x_1..x_d, x_1^2, x_1 x_2, ..., x_d^2], with the trust region it was
/// certified on and its leave-one-out error bound.
struct QuadraticSurrogate {
  int dim = 0;
  Vec coeffs;  // length (d+1)(d+2)/2, basis order as above
  Vec center;
  double radius = 0.0;
  double loo_error = 0.0;

  static int basis_size(int d) { return (d + 1) * (d + 2) / 2; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian() const;
};

/// Regression data: M design points inside the ball O(center, radius) with
/// their constraint values.
struct DesignSample {
  Mat points;  // M x d
  Vec values;  // M
  Vec center;
  double radius = 0.0;
};

/// Uniform draws from the ball O(center, radius) intersected with the box
/// (rejection sampling). Throws InfeasibleRegionError when the intersection
/// cannot be hit.
Mat sample_ball(const Vec& center, double radius, int count,
                const DesignSpace& space, RngStream rng);

/// Least-squares quadratic fit. Coordinates are rescaled to the unit ball
/// around the center before fitting (raw monomials at small radii are
/// hopelessly ill-conditioned) and the coefficients mapped back, so the
/// returned coeffs are over the plain monomial basis.
/// Requires M >= basis_size and a full-rank design matrix (PoisednessError).
QuadraticSurrogate fit_quadratic(const DesignSample& sample);

/// max_m |y_m - s^m(x_m)| where s^m is fit with point m left out.
/// Requires M - 1 >= basis_size so every leave-one-out fit is determined.
double loo_error(const DesignSample& sample);

/// How constraint values at the surrogate design points are obtained.
enum class SurrValueMode {
  kReweight,  // one full evaluation at the center, likelihood-ratio reweights
  kFullCrn,   // a full evaluation per point, sharing one draw stream per pass
};

struct SurrogateBuild {
  QuadraticSurrogate model;
  double radius = 0.0;                  // certified radius
  ReliabilityEvaluation center_eval;    // reusable at the center
  int passes = 0;                       // certification passes run
};

/// Certification loop: sample m-1 points in the ball (the center is the m-th
/// point), obtain constraint values, fit, and check the leave-one-out error
/// bound; contract the radius by omega and repeat until the bound passes.
/// In kReweight mode the whole call performs exactly one full evaluation.
/// Throws SurrogateFailureError when the radius falls below rho_min_guard
/// without certification.
SurrogateBuild surr_constr(const RboProblem& problem, const Vec& x_c,
                           double rho_max, double eps_star, double omega,
                           int m_points, std::int64_t n_mc, RngStream rng,
                           EvalCounters& counters,
                           SurrValueMode mode = SurrValueMode::kReweight,
                           double rho_min_guard = 1e-6);

/// Reweight-mode certification that reuses a previously computed evaluation
/// at x_c instead of performing a fresh one (no full evaluation happens).
SurrogateBuild surr_constr_with_eval(const RboProblem& problem, const Vec& x_c,
                                     double rho_max, double eps_star,
                                     double omega, int m_points,
                                     std::int64_t n_mc, RngStream rng,
                                     EvalCounters& counters,
                                     ReliabilityEvaluation center_eval,
                                     double rho_min_guard = 1e-6);

}  // namespace rbopt
