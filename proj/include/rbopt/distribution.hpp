#pragma once

#include <memory>

#include "rbopt/problem.hpp"

namespace rbopt {

/// Affine map x -> coeff * x + offset used to route design variables into
/// distribution means.
struct AffineMap {
  Mat coeff;   // z_dim x design_dim
  Vec offset;  // z_dim

  Vec apply(const Vec& x) const { return coeff * x + offset; }
  int out_dim() const { return static_cast<int>(offset.size()); }
  int in_dim() const { return static_cast<int>(coeff.cols()); }
};

/// Independent-Gaussian family with design-dependent means: z_i ~ N(mu_i(x),
/// sigma_i^2) with mu(x) = coeff*x + offset. The score is nonzero only in
/// coordinates the mean map touches.
std::shared_ptr<const ParametricDistribution> make_gaussian_family(
    const AffineMap& mean_map, const Vec& sigma);

}  // namespace rbopt
