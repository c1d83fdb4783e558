#pragma once

#include <string>

#include "rbopt/distribution.hpp"
#include "rbopt/problem.hpp"

namespace rbopt {

/// Cantilever-beam sizing under uncertainty. The design is the mean width
/// and mean height (w, t); failure is the tip deflection exceeding d_o:
///   g(z) = d_o - (4 L^3 / (E W T)) * sqrt((Y/T^2)^2 + (X/W^2)^2)
/// with z = (E, X, Y, W, T) independent Gaussians. Cost is the cross-section
/// area w*t.
struct CantileverConfig {
  double length = 100.0;
  double d_o = 6.0;
  double e_mean = 29.0e6;
  double e_sd = 1.45e6;
  double load_mean = 500.0;
  double load_sd = 25.0;
  double sigma_wt = 1e-1;  // sd of the realized width/height around (w, t)
  double theta = 0.1;
  double box_lower = 1.0;
  double box_upper = 4.0;

  void validate() const;
};

/// Deflection limit state alone (z = (E, X, Y, W, T)).
double cantilever_g(const CantileverConfig& cfg, const Vec& z);

RboProblem cantilever_problem(const CantileverConfig& cfg);

/// Conventional starting point for the benchmark runs.
Vec cantilever_x0();

/// Built-in problem registry. Known names: "cantilever" (sigma applies to
/// the width/height sd), "normal-tail" (1-D z ~ N(x, 1), failure z < -1.2816,
/// quadratic cost centered at 0.5; sigma ignored).
RboProblem make_problem(const std::string& name, double sigma, double theta);

/// Names accepted by make_problem.
std::vector<std::string> problem_names();

/// Default starting point for a registered problem.
Vec problem_x0(const std::string& name);

}  // namespace rbopt
