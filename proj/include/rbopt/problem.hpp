#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>

#include "rbopt/errors.hpp"
#include "rbopt/rng.hpp"

namespace rbopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Box design space; bounds may be +-infinity.
struct DesignSpace {
  Vec lower;
  Vec upper;

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }

  Vec clamp(const Vec& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }

  void validate() const {
    if (dim() < 1) throw InvalidParameterError("design space dim must be >= 1");
    if (upper.size() != lower.size())
      throw InvalidParameterError("design space bound sizes differ");
    for (int i = 0; i < dim(); ++i) {
      if (!(lower[i] < upper[i]))
        throw InvalidParameterError("design space requires lower < upper");
    }
  }

  static DesignSpace unbounded(int d) {
    DesignSpace s;
    s.lower = Vec::Constant(d, -std::numeric_limits<double>::infinity());
    s.upper = Vec::Constant(d, std::numeric_limits<double>::infinity());
    return s;
  }
};

/// Deterministic cost; gradient is optional (central differences otherwise).
struct CostFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // may be empty
};

/// Scalar system-performance function of the random vector z; negative
/// values mean failure. Independent of the design by construction: the
/// signature admits no design argument.
struct LimitState {
  std::function<double(const Vec&)> value;
};

/// Parametric density family q(z; x): the uncertainty distribution depends on
/// the design x. Immutable after construction and safe to share across
/// threads; sample() takes an explicit stream so concurrent callers use
/// disjoint streams.
class ParametricDistribution {
 public:
  virtual ~ParametricDistribution() = default;

  virtual int z_dim() const = 0;

  /// n-by-z_dim sample matrix. Equal streams give bit-identical matrices,
  /// independent of worker count.
  virtual Mat sample(const Vec& x, std::int64_t n, RngStream rng) const = 0;

  virtual double log_density(const Vec& z, const Vec& x) const = 0;

  /// Gradient of log_density with respect to the design x.
  virtual Vec score(const Vec& z, const Vec& x) const = 0;

  /// Row-wise log_density over a sample matrix. Default loops; families
  /// should override with a parallel map.
  virtual Vec log_density_rows(const Mat& z, const Vec& x) const {
    Vec out(z.rows());
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      out[i] = log_density(z.row(i).transpose(), x);
    return out;
  }
};

/// The full problem datum: min cost(x) over the design space subject to
/// log P(x) - log theta <= 0, with P the failure probability of limit under
/// dist at design x.
struct RboProblem {
  DesignSpace space;
  CostFunction cost;
  std::shared_ptr<const ParametricDistribution> dist;
  LimitState limit;
  double theta = 0.1;

  void validate() const {
    space.validate();
    if (!(theta > 0.0 && theta < 1.0))
      throw InvalidParameterError("theta must lie in (0,1)");
    if (!dist) throw InvalidParameterError("distribution is required");
    if (!cost.value) throw InvalidParameterError("cost function is required");
    if (!limit.value) throw InvalidParameterError("limit state is required");
  }
};

/// Evaluate the cost at x, enforcing the design-space box.
inline double cost_eval(const RboProblem& problem, const Vec& x) {
  if (!problem.space.contains(x))
    throw DomainError("design point outside the design space");
  return problem.cost.value(x);
}

}  // namespace rbopt
