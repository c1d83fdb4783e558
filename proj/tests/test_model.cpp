#include <cmath>
#include <random>

#include "doctest.h"
#include "rbopt/cantilever.hpp"
#include "rbopt/distribution.hpp"
#include "rbopt/kernels.hpp"

using namespace rbopt;

namespace {

std::shared_ptr<const ParametricDistribution> identity_1d_family() {
  AffineMap map;
  map.coeff = Mat::Identity(1, 1);
  map.offset = Vec::Zero(1);
  return make_gaussian_family(map, Vec::Ones(1));
}

}  // namespace

TEST_CASE("standard normal log-density at the mode") {
  auto family = identity_1d_family();
  const double expected = -0.5 * std::log(2.0 * M_PI);  // -0.9189385
  CHECK(family->log_density(Vec::Zero(1), Vec::Zero(1)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-0.9189).epsilon(1e-4));
}

TEST_CASE("gaussian score matches (z - mu) / sigma^2") {
  auto family = identity_1d_family();
  Vec z(1), x(1);
  z << 1.5;
  x << 0.5;
  CHECK(family->score(z, x)[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("score matches central finite differences of log_density") {
  AffineMap map;
  map.coeff = Mat(3, 2);
  map.coeff << 1.0, 0.0, 0.0, 2.0, -1.5, 0.5;
  map.offset = Vec(3);
  map.offset << 0.3, -1.0, 2.0;
  Vec sigma(3);
  sigma << 0.7, 1.3, 2.1;
  auto family = make_gaussian_family(map, sigma);

  std::mt19937_64 eng(99);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    Vec z(3), x(2);
    for (int i = 0; i < 3; ++i) z[i] = 3.0 * nd(eng);
    for (int i = 0; i < 2; ++i) x[i] = 2.0 * nd(eng);
    const Vec analytic = family->score(z, x);
    Vec fd(2);
    Vec xp = x;
    for (int i = 0; i < 2; ++i) {
      const double h = 1e-6 * (1.0 + std::abs(x[i]));
      xp[i] = x[i] + h;
      const double up = family->log_density(z, xp);
      xp[i] = x[i] - h;
      const double down = family->log_density(z, xp);
      xp[i] = x[i];
      fd[i] = (up - down) / (2.0 * h);
    }
    const double scale = std::max(1e-8, analytic.norm());
    CHECK((analytic - fd).norm() / scale <= 1e-5);
  }
}

TEST_CASE("1-D density integrates to one (quadrature)") {
  AffineMap map;
  map.coeff = Mat::Identity(1, 1);
  map.offset = Vec::Constant(1, 0.4);
  auto family = make_gaussian_family(map, Vec::Constant(1, 1.7));
  Vec x(1);
  x << -0.9;
  // Simpson over +-10 sigma
  const double mu = x[0] + 0.4;
  const double lo = mu - 17.0, hi = mu + 17.0;
  const int steps = 4000;
  const double h = (hi - lo) / steps;
  double integral = 0.0;
  Vec z(1);
  for (int i = 0; i <= steps; ++i) {
    z[0] = lo + i * h;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * std::exp(family->log_density(z, x));
  }
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sampling is bit-identical for equal streams") {
  CantileverConfig cfg;
  auto problem = cantilever_problem(cfg);
  Vec x(2);
  x << 2.0, 4.0;
  const Mat a = problem.dist->sample(x, 512, RngStream::from_seed(21).child(3));
  const Mat b = problem.dist->sample(x, 512, RngStream::from_seed(21).child(3));
  CHECK((a - b).norm() == 0.0);
  kern::set_workers(1);
  const Mat c = problem.dist->sample(x, 512, RngStream::from_seed(21).child(3));
  kern::set_workers(0);
  CHECK((a - c).norm() == 0.0);
}

TEST_CASE("sample moments match the family at 5 standard errors") {
  CantileverConfig cfg;
  auto problem = cantilever_problem(cfg);
  Vec x(2);
  x << 2.0, 4.0;
  const std::int64_t n = 100000;
  const Mat samples =
      problem.dist->sample(x, n, RngStream::from_seed(2024).child(1));
  // W column (index 3): mean 2.0, sd 0.1
  const double mean_w = samples.col(3).mean();
  const double se_mean = 0.1 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean_w - 2.0) <= 5.0 * se_mean);
  const double var_w =
      (samples.col(3).array() - mean_w).square().sum() / (n - 1.0);
  const double se_var = 0.1 * 0.1 * std::sqrt(2.0 / (n - 1.0));
  CHECK(std::abs(var_w - 0.01) <= 5.0 * se_var);
}

TEST_CASE("CLT coverage: W mean within 2 SE of 2.0 in >= 95% of seeds") {
  CantileverConfig cfg;
  auto problem = cantilever_problem(cfg);
  Vec x(2);
  x << 2.0, 4.0;
  const std::int64_t n = 100000;
  const double band = 2.0 * (0.1 / std::sqrt(static_cast<double>(n)));
  const int seeds = 60;
  int covered = 0;
  for (int s = 0; s < seeds; ++s) {
    const Mat samples = problem.dist->sample(
        x, n, RngStream::from_seed(500 + static_cast<std::uint64_t>(s)));
    if (std::abs(samples.col(3).mean() - 2.0) <= band) ++covered;
  }
  // expect ~95.45%; allow two-sigma binomial slack below 0.95 * 60 = 57
  CHECK(covered >= 54);
}

TEST_CASE("reweighting ratio matches the closed-form gaussian ratio") {
  AffineMap map;
  map.coeff = Mat(2, 2);
  map.coeff << 1.0, 0.0, 0.0, 1.0;
  map.offset = Vec::Zero(2);
  Vec sigma(2);
  sigma << 0.5, 2.0;
  auto family = make_gaussian_family(map, sigma);

  std::mt19937_64 eng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    Vec z(2), xa(2), xb(2);
    for (int i = 0; i < 2; ++i) {
      z[i] = 2.0 * nd(eng);
      xa[i] = nd(eng);
      xb[i] = xa[i] + 0.3 * nd(eng);
    }
    const double via_logs =
        std::exp(family->log_density(z, xb) - family->log_density(z, xa));
    double direct = 1.0;
    for (int i = 0; i < 2; ++i) {
      const double ra = (z[i] - xa[i]) / sigma[i];
      const double rb = (z[i] - xb[i]) / sigma[i];
      direct *= std::exp(0.5 * (ra * ra - rb * rb));
    }
    CHECK(via_logs == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("score is zero in coordinates the mean map does not touch") {
  // mean map uses only x0; x1 must not enter the density
  AffineMap map;
  map.coeff = Mat::Zero(1, 2);
  map.coeff(0, 0) = 1.0;
  map.offset = Vec::Zero(1);
  auto family = make_gaussian_family(map, Vec::Ones(1));
  Vec z(1), x(2);
  z << 0.7;
  x << 0.1, -3.0;
  CHECK(family->score(z, x)[1] == 0.0);
}

TEST_CASE("cost_eval enforces the design box") {
  CantileverConfig cfg;
  auto problem = cantilever_problem(cfg);
  Vec x(2);
  x << 2.0, 3.0;
  CHECK(cost_eval(problem, x) == doctest::Approx(6.0).epsilon(1e-15));
  x << 0.0, 5.0;  // below the positive lower bound
  CHECK_THROWS_AS(cost_eval(problem, x), DomainError);
  // identity case on an unconstrained problem
  RboProblem free;
  free.space = DesignSpace::unbounded(2);
  free.cost.value = [](const Vec& v) { return v[0] * v[1]; };
  free.dist = problem.dist;
  free.limit = problem.limit;
  Vec ones = Vec::Ones(2);
  CHECK(cost_eval(free, ones) == 1.0);
}

TEST_CASE("invalid family parameters are rejected") {
  AffineMap map;
  map.coeff = Mat::Identity(1, 1);
  map.offset = Vec::Zero(1);
  CHECK_THROWS_AS(make_gaussian_family(map, Vec::Constant(1, -1.0)),
                  InvalidParameterError);
  CHECK_THROWS_AS(make_gaussian_family(map, Vec::Zero(1)),
                  InvalidParameterError);
}
