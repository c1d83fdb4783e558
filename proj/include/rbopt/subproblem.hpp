#pragma once

#include <vector>

#include "rbopt/sqp.hpp"
#include "rbopt/surrogate.hpp"

namespace rbopt {

/// Trust-region subproblem: min cost(x) subject to the quadratic surrogate
/// constraint s(x) <= 0, the ball ||x - center|| <= radius, and the box.
struct SubproblemSpec {
  CostFunction cost;
  QuadraticSurrogate surrogate;
  Vec center;
  double radius = 0.0;
  DesignSpace box;
};

struct ActiveSet {
  bool surrogate = false;
  bool ball = false;
  std::vector<std::uint8_t> box;  // per coordinate, either bound
};

struct SubproblemResult {
  Vec x_next;
  double f_value = 0.0;
  double kkt_residual = 0.0;
  bool feasible = false;
  ActiveSet active;
};

inline constexpr double kSubproblemTolC = 1e-8;   // surrogate value slack
inline constexpr double kSubproblemTolR = 1e-10;  // relative radius slack

/// Multi-start SQP solve (center plus n_starts-1 ball samples); returns the
/// feasible point with least cost, ties broken lexicographically. If no start
/// converges feasibly and minimizing the surrogate itself over the ball still
/// leaves s > tol, throws InfeasibleSubproblemError; otherwise returns the
/// least-infeasible point with feasible = false.
SubproblemResult solve_subproblem(const SubproblemSpec& spec,
                                  const SolverOptions& opts, RngStream rng);

}  // namespace rbopt
