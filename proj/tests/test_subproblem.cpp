#include <cmath>

#include "doctest.h"
#include "rbopt/subproblem.hpp"

using namespace rbopt;

namespace {

QuadraticSurrogate constant_surrogate(int d, double value) {
  QuadraticSurrogate s;
  s.dim = d;
  s.center = Vec::Zero(d);
  s.radius = 1.0;
  s.coeffs = Vec::Zero(QuadraticSurrogate::basis_size(d));
  s.coeffs[0] = value;
  return s;
}

SubproblemSpec base_spec() {
  SubproblemSpec spec;
  spec.center = Vec::Zero(2);
  spec.radius = 1.0;
  spec.box = DesignSpace::unbounded(2);
  spec.surrogate = constant_surrogate(2, -1.0);
  return spec;
}

}  // namespace

TEST_CASE("linear cost over the ball lands on the analytic boundary point") {
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return x[0] + x[1]; };
  const SubproblemResult result =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(3));
  REQUIRE(result.feasible);
  const double target = -1.0 / std::sqrt(2.0);
  CHECK(std::abs(result.x_next[0] - target) <= 1e-6);
  CHECK(std::abs(result.x_next[1] - target) <= 1e-6);
  CHECK(std::abs(result.f_value - (-std::sqrt(2.0))) <= 1e-6);
  CHECK(result.active.ball);
  CHECK(!result.active.surrogate);
}

TEST_CASE("strictly convex cost stays at the interior minimum") {
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return x.squaredNorm(); };
  const SubproblemResult result =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(4));
  REQUIRE(result.feasible);
  CHECK(result.x_next.norm() <= 1e-6);
  CHECK(!result.active.ball);
}

TEST_CASE("active linear surrogate constraint with unit multiplier") {
  // min -x0 s.t. x0 <= 0 inside the unit ball: optimum x0 = 0
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return -x[0]; };
  QuadraticSurrogate s = constant_surrogate(2, 0.0);
  s.coeffs[1] = 1.0;  // s(x) = x0
  spec.surrogate = s;
  const SubproblemResult result =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(5));
  REQUIRE(result.feasible);
  CHECK(std::abs(result.x_next[0]) <= 1e-6);
  CHECK(std::abs(result.f_value) <= 1e-6);
  CHECK(result.active.surrogate);
  CHECK(result.kkt_residual <= 1e-6);
}

TEST_CASE("feasible results respect all three constraint families") {
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return x[0] + 2.0 * x[1]; };
  spec.box.lower = Vec::Constant(2, -0.3);
  spec.box.upper = Vec::Constant(2, 3.0);
  QuadraticSurrogate s = constant_surrogate(2, -0.04);
  s.coeffs[3] = 1.0;
  s.coeffs[5] = 1.0;  // s(x) = ||x||^2 - 0.04
  spec.surrogate = s;
  const SubproblemResult result =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(6));
  REQUIRE(result.feasible);
  CHECK(spec.surrogate.value(result.x_next) <= kSubproblemTolC);
  CHECK((result.x_next - spec.center).norm() <=
        spec.radius * (1.0 + kSubproblemTolR));
  CHECK(spec.box.contains(result.x_next));
}

TEST_CASE("cost never exceeds a surrogate-feasible center") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RngStream rng = RngStream::from_seed(100 + seed);
    auto eng = rng.engine();
    std::normal_distribution<double> nd;
    SubproblemSpec spec = base_spec();
    Vec direction(2);
    direction << nd(eng), nd(eng);
    spec.cost.value = [direction](const Vec& x) { return direction.dot(x); };
    QuadraticSurrogate s = constant_surrogate(2, -0.5);
    s.coeffs[1] = 0.5 * nd(eng);
    s.coeffs[2] = 0.5 * nd(eng);
    s.coeffs[3] = std::abs(nd(eng));
    s.coeffs[5] = std::abs(nd(eng));
    spec.surrogate = s;
    if (spec.surrogate.value(spec.center) > 0.0) continue;
    const SubproblemResult result =
        solve_subproblem(spec, SolverOptions{}, rng.child(1));
    REQUIRE(result.feasible);
    CHECK(result.f_value <= spec.cost.value(spec.center) + 1e-10);
  }
}

TEST_CASE("multi-start winner selection is deterministic") {
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return x[0] + x[1]; };
  const SubproblemResult a =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(8));
  const SubproblemResult b =
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(8));
  CHECK((a.x_next - b.x_next).norm() == 0.0);
  CHECK(a.f_value == b.f_value);
}

TEST_CASE("a surrogate infeasible over the whole ball raises the error") {
  SubproblemSpec spec = base_spec();
  spec.cost.value = [](const Vec& x) { return x[0]; };
  QuadraticSurrogate s = constant_surrogate(2, 1.0);
  s.coeffs[3] = 1.0;
  s.coeffs[5] = 1.0;  // s(x) = ||x||^2 + 1 >= 1
  spec.surrogate = s;
  CHECK_THROWS_AS(
      solve_subproblem(spec, SolverOptions{}, RngStream::from_seed(9)),
      InfeasibleSubproblemError);
}
