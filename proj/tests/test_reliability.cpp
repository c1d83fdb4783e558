#include <cmath>

#include "doctest.h"
#include "rbopt/cantilever.hpp"
#include "rbopt/kernels.hpp"
#include "rbopt/reliability.hpp"

using namespace rbopt;

namespace {

double phi_cdf(double q) { return 0.5 * std::erfc(-q / std::sqrt(2.0)); }

// 1-D z ~ N(x, 1) with failure z < q_alpha.
RboProblem tail_problem(double q_alpha, double theta = 0.1) {
  RboProblem problem;
  problem.space = DesignSpace::unbounded(1);
  problem.theta = theta;
  problem.cost.value = [](const Vec& x) { return x[0]; };
  AffineMap map;
  map.coeff = Mat::Identity(1, 1);
  map.offset = Vec::Zero(1);
  problem.dist = make_gaussian_family(map, Vec::Ones(1));
  problem.limit.value = [q_alpha](const Vec& z) { return z[0] - q_alpha; };
  return problem;
}

}  // namespace

TEST_CASE("constant limit states give exact estimates") {
  RboProblem problem = tail_problem(0.0);
  EvalCounters counters;
  problem.limit.value = [](const Vec&) { return -1.0; };
  auto always = full_evaluation(problem, Vec::Zero(1), 1000,
                                RngStream::from_seed(1), counters);
  CHECK(always.p_hat == 1.0);
  CHECK(always.std_err == 0.0);

  problem.limit.value = [](const Vec&) { return 1.0; };
  auto never = full_evaluation(problem, Vec::Zero(1), 1000,
                               RngStream::from_seed(1), counters);
  CHECK(never.p_hat == 0.0);
  CHECK(counters.full_evals == 2);
  CHECK(counters.g_calls == 2000);
}

TEST_CASE("non-finite limit-state values name the offending sample") {
  RboProblem problem = tail_problem(0.0);
  problem.limit.value = [calls = 0](const Vec& z) mutable {
    (void)z;
    return ++calls == 5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  EvalCounters counters;
  kern::set_workers(1);  // make the mutable counter well-defined
  CHECK_THROWS_AS(full_evaluation(problem, Vec::Zero(1), 100,
                                  RngStream::from_seed(3), counters),
                  TaintedSampleError);
  kern::set_workers(0);
}

TEST_CASE("MC unbiasedness against the analytic normal tail") {
  // mean of p_hat over 200 seeds within 4 SE of Phi(q_alpha)
  for (double q_alpha : {-1.2816, 0.0}) {
    RboProblem problem = tail_problem(q_alpha);
    const std::int64_t n = 2000;
    const int seeds = 200;
    EvalCounters counters;
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
      mean += full_evaluation(problem, Vec::Zero(1), n,
                              RngStream::from_seed(9000 + s), counters)
                  .p_hat;
    }
    mean /= seeds;
    const double p = phi_cdf(q_alpha);
    const double se = std::sqrt(p * (1.0 - p) / (n * seeds));
    CHECK(std::abs(mean - p) <= 4.0 * se);
  }
}

TEST_CASE("reweighting at the center is exact") {
  RboProblem problem = tail_problem(-1.2816);
  EvalCounters counters;
  const Vec x = Vec::Zero(1);
  auto eval =
      full_evaluation(problem, x, 20000, RngStream::from_seed(5), counters);
  const std::int64_t g_before = counters.g_calls;
  auto rw = reweighted_evaluation(eval, *problem.dist, x, counters);
  CHECK(rw.p_hat == eval.p_hat);  // bit-for-bit
  CHECK(rw.weights.min == 1.0);
  CHECK(rw.weights.max == 1.0);
  CHECK(rw.ess == doctest::Approx(static_cast<double>(eval.n)));
  CHECK(counters.g_calls == g_before);  // no limit-state calls
  CHECK(counters.reweighted_evals == 1);
}

TEST_CASE("design coordinates outside the mean map leave weights at one") {
  // 2-design-dim problem where only x0 shifts the distribution
  RboProblem problem;
  problem.space = DesignSpace::unbounded(2);
  problem.theta = 0.1;
  problem.cost.value = [](const Vec& x) { return x[0] + x[1]; };
  AffineMap map;
  map.coeff = Mat::Zero(1, 2);
  map.coeff(0, 0) = 1.0;
  map.offset = Vec::Zero(1);
  problem.dist = make_gaussian_family(map, Vec::Ones(1));
  problem.limit.value = [](const Vec& z) { return z[0]; };
  EvalCounters counters;
  Vec center(2);
  center << 0.4, 2.0;
  auto eval = full_evaluation(problem, center, 5000, RngStream::from_seed(8),
                              counters);
  Vec shifted = center;
  shifted[1] = -7.5;  // untouched coordinate
  auto rw = reweighted_evaluation(eval, *problem.dist, shifted, counters);
  CHECK(rw.weights.min == 1.0);
  CHECK(rw.weights.max == 1.0);
  CHECK(rw.p_hat == eval.p_hat);
}

TEST_CASE("reweighted estimates track fresh MC estimates across seeds") {
  // 1-D gaussian mean family, center 0, target 0.3: over 100 seeds, at least
  // 95 reweighted estimates fall within 3 combined SE of a fresh estimate
  RboProblem problem = tail_problem(-1.2816);
  const std::int64_t n = 10000;
  Vec target(1);
  target << 0.3;
  int agree = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    EvalCounters counters;
    auto eval = full_evaluation(problem, Vec::Zero(1), n,
                                RngStream::from_seed(4000 + s), counters);
    auto rw = reweighted_evaluation(eval, *problem.dist, target, counters);
    auto fresh = full_evaluation(problem, target, n,
                                 RngStream::from_seed(77000 + s), counters);
    const double tol = 3.0 * (rw.std_err + fresh.std_err);
    if (std::abs(rw.p_hat - fresh.p_hat) <= tol) ++agree;
  }
  CHECK(agree >= 95);
}

TEST_CASE("reweighting consistency bound at healthy ess") {
  RboProblem problem = tail_problem(-1.2816);
  const std::int64_t n = 20000;
  for (int s = 0; s < 20; ++s) {
    EvalCounters counters;
    auto eval = full_evaluation(problem, Vec::Zero(1), n,
                                RngStream::from_seed(600 + s), counters);
    Vec target(1);
    target << (s % 2 ? 0.25 : -0.25);
    auto rw = reweighted_evaluation(eval, *problem.dist, target, counters);
    auto fresh = full_evaluation(problem, target, n,
                                 RngStream::from_seed(1600 + s), counters);
    if (rw.ess >= n / 10.0) {
      CHECK(std::abs(rw.p_hat - fresh.p_hat) <=
            4.0 * (rw.std_err + fresh.std_err));
    }
  }
}

TEST_CASE("weight degeneracy is flagged, not fatal") {
  RboProblem problem = tail_problem(0.0);
  EvalCounters counters;
  auto eval = full_evaluation(problem, Vec::Zero(1), 2000,
                              RngStream::from_seed(12), counters);
  Vec far(1);
  far << 4.0;  // 4 sigma shift: ess collapses
  auto rw = reweighted_evaluation(eval, *problem.dist, far, counters);
  CHECK(rw.degenerate);
  CHECK(rw.ess < 200.0);
}

TEST_CASE("log_constraint values and monotonicity") {
  CHECK(log_constraint(0.1, 0.1, 10000) == 0.0);
  CHECK(log_constraint(0.0, 0.1, 10000) ==
        doctest::Approx(-7.6009).epsilon(1e-4));
  CHECK(log_constraint(0.2, 0.1, 10000) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  double prev = -std::numeric_limits<double>::infinity();
  for (double p : {0.0, 1e-5, 5e-5, 1e-3, 0.1, 0.5, 1.0}) {
    const double c = log_constraint(p, 0.1, 10000);
    CHECK(c >= prev);
    prev = c;
  }
}
