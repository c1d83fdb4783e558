#include "rbopt/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

struct Candidate {
  Vec x;
  double f = kInf;
  double kkt = kInf;
  double infeas = kInf;  // total constraint violation
  bool feasible = false;
};

}  // namespace

SubproblemResult solve_subproblem(const SubproblemSpec& spec,
                                  const SolverOptions& opts, RngStream rng) {
  if (!(spec.radius > 0.0))
    throw InvalidParameterError("subproblem radius must be > 0");
  const int d = spec.box.dim();

  SmoothFn objective = [&](const Vec& x, Vec* grad) {
    if (grad) {
      *grad = spec.cost.gradient ? spec.cost.gradient(x)
                                 : central_gradient(spec.cost.value, x);
    }
    return spec.cost.value(x);
  };
  SmoothFn surrogate_con = [&](const Vec& x, Vec* grad) {
    if (grad) *grad = spec.surrogate.gradient(x);
    return spec.surrogate.value(x);
  };
  // smooth form of the ball constraint; the norm is not differentiable at
  // the center
  SmoothFn ball_con = [&](const Vec& x, Vec* grad) {
    if (grad) *grad = 2.0 * (x - spec.center);
    return (x - spec.center).squaredNorm() - spec.radius * spec.radius;
  };

  Nlp nlp;
  nlp.objective = objective;
  nlp.inequalities = {surrogate_con, ball_con};
  nlp.lower = spec.box.lower;
  nlp.upper = spec.box.upper;

  std::vector<Vec> starts;
  starts.push_back(spec.center);
  if (opts.n_starts > 1) {
    const Mat pts =
        sample_ball(spec.center, spec.radius, opts.n_starts - 1, spec.box,
                    rng.child(stream_label::kMultiStart));
    for (int i = 0; i < pts.rows(); ++i)
      starts.push_back(pts.row(i).transpose());
  }

  const double ball_slack = spec.radius * (1.0 + kSubproblemTolR);
  auto classify = [&](const Vec& x_raw, double kkt) {
    // boundary hits land within solver slack of the ball; pull them onto it
    // exactly (the correction is <= 1e-6 * radius and the box clamp can only
    // shrink the distance further since the center is inside the box)
    Vec x = x_raw;
    const double dist_raw = (x - spec.center).norm();
    if (dist_raw > spec.radius && dist_raw <= spec.radius * (1.0 + 1e-6))
      x = spec.center + (x - spec.center) * (spec.radius / dist_raw);
    x = spec.box.clamp(x);
    Candidate c;
    c.x = x;
    c.f = spec.cost.value(x);
    c.kkt = kkt;
    const double s_val = spec.surrogate.value(x);
    const double dist = (x - spec.center).norm();
    double infeas = std::max(0.0, s_val) + std::max(0.0, dist - ball_slack);
    for (int j = 0; j < d; ++j) {
      infeas += std::max(0.0, spec.box.lower[j] - x[j]);
      infeas += std::max(0.0, x[j] - spec.box.upper[j]);
    }
    c.infeas = infeas;
    const bool in_box = (x.array() >= spec.box.lower.array()).all() &&
                        (x.array() <= spec.box.upper.array()).all();
    c.feasible = s_val <= kSubproblemTolC && dist <= ball_slack && in_box;
    return c;
  };

  std::vector<Candidate> candidates;
  for (const Vec& s : starts) {
    const SqpReport rep = sqp_minimize(nlp, s, opts);
    candidates.push_back(classify(rep.x, rep.kkt_residual));
  }
  // The center itself stays a candidate whenever it is feasible, which
  // guarantees f(x_next) <= f(center) in that case. Pushed last so solver
  // results win ties.
  candidates.push_back(classify(spec.center, kInf));

  auto pick_best_feasible = [&]() -> const Candidate* {
    const Candidate* best = nullptr;
    for (const Candidate& c : candidates) {
      if (!c.feasible) continue;
      if (!best || c.f < best->f || (c.f == best->f && lex_less(c.x, best->x)))
        best = &c;
    }
    return best;
  };

  const Candidate* best = pick_best_feasible();
  if (!best) {
    // Distinguish "solver failed" from "surrogate infeasible in the ball":
    // minimize the surrogate itself over ball and box.
    Nlp restoration;
    restoration.objective = surrogate_con;
    restoration.inequalities = {ball_con};
    restoration.lower = spec.box.lower;
    restoration.upper = spec.box.upper;
    double s_min = kInf;
    Vec s_argmin = spec.center;
    for (const Vec& s : starts) {
      const SqpReport rep = sqp_minimize(restoration, s, opts);
      const double val = spec.surrogate.value(rep.x);
      if (val < s_min && (rep.x - spec.center).norm() <= ball_slack) {
        s_min = val;
        s_argmin = rep.x;
      }
    }
    if (s_min > kSubproblemTolC)
      throw InfeasibleSubproblemError(
          "surrogate constraint admits no feasible point in the trust region");
    // Feasible points exist; retry the full solve from the restoration point.
    const SqpReport rep = sqp_minimize(nlp, s_argmin, opts);
    candidates.push_back(classify(rep.x, rep.kkt_residual));
    best = pick_best_feasible();
  }

  SubproblemResult result;
  if (best) {
    result.feasible = true;
  } else {
    // return the least-infeasible point
    const Candidate* least = &candidates.front();
    for (const Candidate& c : candidates)
      if (c.infeas < least->infeas) least = &c;
    best = least;
    result.feasible = false;
  }
  result.x_next = best->x;
  result.f_value = best->f;
  result.kkt_residual = std::isfinite(best->kkt) ? best->kkt : 0.0;

  const double s_val = spec.surrogate.value(result.x_next);
  const double dist = (result.x_next - spec.center).norm();
  result.active.surrogate = std::abs(s_val) <= 1e-6 * (1.0 + std::abs(s_val));
  result.active.ball = dist >= spec.radius * (1.0 - 1e-6);
  result.active.box.assign(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    const double scale = 1.0 + std::abs(result.x_next[j]);
    if (std::isfinite(spec.box.lower[j]) &&
        result.x_next[j] - spec.box.lower[j] <= 1e-9 * scale)
      result.active.box[static_cast<std::size_t>(j)] = 1;
    if (std::isfinite(spec.box.upper[j]) &&
        spec.box.upper[j] - result.x_next[j] <= 1e-9 * scale)
      result.active.box[static_cast<std::size_t>(j)] = 1;
  }
  return result;
}

}  // namespace rbopt
