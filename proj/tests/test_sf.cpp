#include <cmath>

#include "doctest.h"
#include "rbopt/cantilever.hpp"
#include "rbopt/score_function.hpp"
#include "rbopt/serialize.hpp"

using namespace rbopt;

namespace {

double phi_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
}

// z ~ N(x, 1), failure z < a.
RboProblem shift_problem(double a, double theta = 0.1) {
  RboProblem problem;
  problem.space.lower = Vec::Constant(1, -4.0);
  problem.space.upper = Vec::Constant(1, 4.0);
  problem.theta = theta;
  problem.cost.value = [](const Vec& x) {
    return (x[0] - 0.3) * (x[0] - 0.3);
  };
  AffineMap map;
  map.coeff = Mat::Identity(1, 1);
  map.offset = Vec::Zero(1);
  problem.dist = make_gaussian_family(map, Vec::Ones(1));
  problem.limit.value = [a](const Vec& z) { return z[0] - a; };
  return problem;
}

}  // namespace

TEST_CASE("score gradient vanishes when the density ignores the design") {
  RboProblem problem = shift_problem(0.0);
  AffineMap map;
  map.coeff = Mat::Zero(1, 1);  // mean fixed at 0 regardless of x
  map.offset = Vec::Zero(1);
  problem.dist = make_gaussian_family(map, Vec::Ones(1));
  EvalCounters counters;
  const SfGradientEstimate est = sf_gradient(
      problem, Vec::Zero(1), 5000, RngStream::from_seed(3), counters);
  CHECK(est.grad_p[0] == 0.0);
  CHECK(est.grad_c[0] == 0.0);
}

TEST_CASE("score gradient is unbiased for the analytic gaussian tail") {
  // P(x) = Phi(a - x), dP/dx = -phi(a - x); mean over seeds within 4 SE
  const double a = 0.0;
  const double x0 = -0.5;
  const RboProblem problem = shift_problem(a);
  Vec x(1);
  x << x0;
  const std::int64_t n = 100000;
  const int seeds = 100;
  EvalCounters counters;
  double mean = 0.0, mean_sq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const double g =
        sf_gradient(problem, x, n, RngStream::from_seed(3000 + s), counters)
            .grad_p[0];
    mean += g;
    mean_sq += g * g;
  }
  mean /= seeds;
  mean_sq /= seeds;
  const double se_mean =
      std::sqrt(std::max(0.0, mean_sq - mean * mean) / seeds);
  const double analytic = -phi_pdf(a - x0);
  CHECK(std::abs(mean - analytic) <= 4.0 * se_mean);
  CHECK(counters.g_calls == counters.full_evals * n);
}

TEST_CASE("constraint gradient matches finite differences of reweighted logs") {
  CantileverConfig cfg;
  const RboProblem problem = cantilever_problem(cfg);
  Vec x(2);
  x << 1.9, 2.2;  // near the failure boundary, p well off the floor
  const std::int64_t n = 100000;
  EvalCounters counters;
  const RngStream rng = RngStream::from_seed(55);
  const SfGradientEstimate est = sf_gradient(problem, x, n, rng, counters);

  const ReliabilityEvaluation eval = full_evaluation(problem, x, n, rng,
                                                     counters);
  const double h = 1e-2;
  Vec fd(2);
  for (int i = 0; i < 2; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double up = log_constraint(
        reweighted_evaluation(eval, *problem.dist, xp, counters).p_hat,
        problem.theta, n);
    const double down = log_constraint(
        reweighted_evaluation(eval, *problem.dist, xm, counters).p_hat,
        problem.theta, n);
    fd[i] = (up - down) / (2.0 * h);
  }
  CHECK((est.grad_c - fd).norm() / fd.norm() <= 0.10);
}

TEST_CASE("run_sf with an inactive constraint finds the cost minimizer") {
  const RboProblem problem = shift_problem(-10.0, 0.5);  // failure impossible
  const RunResult result = run_sf(problem, Vec::Zero(1), 2000, SolverOptions{},
                                  RngStream::from_seed(8));
  CHECK(std::abs(result.x_opt[0] - 0.3) <= 1e-5);
  CHECK(result.f_opt <= 1e-9);
}

TEST_CASE("run_sf is deterministic and shares batches") {
  const RboProblem problem = shift_problem(-1.2816);
  const RunResult a = run_sf(problem, Vec::Zero(1), 5000, SolverOptions{},
                             RngStream::from_seed(12));
  const RunResult b = run_sf(problem, Vec::Zero(1), 5000, SolverOptions{},
                             RngStream::from_seed(12));
  CHECK(run_result_to_json(a).dump() == run_result_to_json(b).dump());
  CHECK(a.counters.g_calls == a.counters.full_evals * 5000);
  CHECK(a.counters.full_evals >= 2);
}

TEST_CASE("run_sf lands on the active reliability boundary") {
  // theta = 0.05: feasibility needs Phi(-1.2816 - x) <= 0.05, i.e. x >= 0.36;
  // the cost pulls toward 0.3, so the constraint is active near 0.36
  const RboProblem problem = shift_problem(-1.2816, 0.05);
  const RunResult result = run_sf(problem, Vec::Constant(1, 1.5), 50000,
                                  SolverOptions{}, RngStream::from_seed(14));
  CHECK(result.x_opt[0] == doctest::Approx(0.3603).epsilon(0.05));
  CHECK(result.p_hat_accept <= problem.theta * 1.1);
}
