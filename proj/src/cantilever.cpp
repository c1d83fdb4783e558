#include "rbopt/cantilever.hpp"

#include <cmath>

namespace rbopt {

void CantileverConfig::validate() const {
  if (!(length > 0.0 && d_o > 0.0))
    throw InvalidParameterError("cantilever geometry must be positive");
  if (!(e_sd > 0.0 && load_sd > 0.0 && sigma_wt > 0.0))
    throw InvalidParameterError("cantilever scale parameters must be positive");
  if (!(theta > 0.0 && theta < 1.0))
    throw InvalidParameterError("theta must lie in (0,1)");
  if (!(box_lower < box_upper))
    throw InvalidParameterError("cantilever box bounds out of order");
}

double cantilever_g(const CantileverConfig& cfg, const Vec& z) {
  const double e = z[0], x_load = z[1], y_load = z[2], w = z[3], t = z[4];
  const double a = y_load / (t * t);
  const double b = x_load / (w * w);
  const double deflection = 4.0 * cfg.length * cfg.length * cfg.length /
                            (e * w * t) * std::sqrt(a * a + b * b);
  return cfg.d_o - deflection;
}

RboProblem cantilever_problem(const CantileverConfig& cfg) {
  cfg.validate();
  RboProblem problem;
  problem.space.lower = Vec::Constant(2, cfg.box_lower);
  problem.space.upper = Vec::Constant(2, cfg.box_upper);
  problem.theta = cfg.theta;

  problem.cost.value = [](const Vec& x) { return x[0] * x[1]; };
  problem.cost.gradient = [](const Vec& x) {
    Vec g(2);
    g[0] = x[1];
    g[1] = x[0];
    return g;
  };

  // z = (E, X, Y, W, T); the design sets the means of W and T only.
  AffineMap mean_map;
  mean_map.coeff = Mat::Zero(5, 2);
  mean_map.coeff(3, 0) = 1.0;
  mean_map.coeff(4, 1) = 1.0;
  mean_map.offset = Vec(5);
  mean_map.offset << cfg.e_mean, cfg.load_mean, cfg.load_mean, 0.0, 0.0;
  Vec sigma(5);
  sigma << cfg.e_sd, cfg.load_sd, cfg.load_sd, cfg.sigma_wt, cfg.sigma_wt;
  problem.dist = make_gaussian_family(mean_map, sigma);

  CantileverConfig cfg_copy = cfg;
  problem.limit.value = [cfg_copy](const Vec& z) {
    return cantilever_g(cfg_copy, z);
  };
  return problem;
}

Vec cantilever_x0() {
  Vec x(2);
  x << 2.5, 2.5;
  return x;
}

namespace {

// 1-D toy: z ~ N(x, 1), failure z < q so P(x) = Phi(q - x); quadratic cost.
RboProblem normal_tail_problem(double theta) {
  RboProblem problem;
  problem.space.lower = Vec::Constant(1, -4.0);
  problem.space.upper = Vec::Constant(1, 4.0);
  problem.theta = theta;
  problem.cost.value = [](const Vec& x) {
    return (x[0] - 0.5) * (x[0] - 0.5);
  };
  problem.cost.gradient = [](const Vec& x) {
    Vec g(1);
    g[0] = 2.0 * (x[0] - 0.5);
    return g;
  };
  AffineMap mean_map;
  mean_map.coeff = Mat::Identity(1, 1);
  mean_map.offset = Vec::Zero(1);
  problem.dist = make_gaussian_family(mean_map, Vec::Ones(1));
  problem.limit.value = [](const Vec& z) { return z[0] + 1.2816; };
  return problem;
}

}  // namespace

RboProblem make_problem(const std::string& name, double sigma, double theta) {
  if (name == "cantilever") {
    CantileverConfig cfg;
    cfg.sigma_wt = sigma;
    cfg.theta = theta;
    return cantilever_problem(cfg);
  }
  if (name == "normal-tail") {
    return normal_tail_problem(theta);
  }
  throw ConfigError("unknown problem '" + name +
                    "'; known problems: cantilever, normal-tail");
}

std::vector<std::string> problem_names() { return {"cantilever", "normal-tail"}; }

Vec problem_x0(const std::string& name) {
  if (name == "cantilever") return cantilever_x0();
  if (name == "normal-tail") return Vec::Zero(1);
  throw ConfigError("unknown problem '" + name + "'");
}

}  // namespace rbopt
