#include "rbopt/distribution.hpp"

#include <cmath>
#include <random>

#include "rbopt/kernels.hpp"

namespace rbopt {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

class GaussianMeanFamily final : public ParametricDistribution {
 public:
  GaussianMeanFamily(AffineMap mean_map, Vec sigma)
      : mean_map_(std::move(mean_map)), sigma_(std::move(sigma)) {
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
      if (!(sigma_[i] > 0.0))
        throw InvalidParameterError("gaussian family requires sigma > 0");
    }
    if (mean_map_.out_dim() != static_cast<int>(sigma_.size()))
      throw InvalidParameterError("mean map and sigma dimensions differ");
    inv_var_ = sigma_.array().square().inverse().matrix();
    log_norm_ = 0.0;
    for (Eigen::Index i = 0; i < sigma_.size(); ++i)
      log_norm_ += -0.5 * kLogTwoPi - std::log(sigma_[i]);
  }

  int z_dim() const override { return static_cast<int>(sigma_.size()); }

  Mat sample(const Vec& x, std::int64_t n, RngStream rng) const override {
    const Vec mu = mean_map_.apply(x);
    const int d = z_dim();
    Mat out(n, d);
    kern::map(n, [&](std::int64_t row) {
      auto eng = rng.engine(static_cast<std::uint64_t>(row));
      std::normal_distribution<double> nd;
      for (int j = 0; j < d; ++j) out(row, j) = mu[j] + sigma_[j] * nd(eng);
    });
    return out;
  }

  double log_density(const Vec& z, const Vec& x) const override {
    const Vec mu = mean_map_.apply(x);
    double quad = 0.0;
    for (int j = 0; j < z_dim(); ++j) {
      const double r = z[j] - mu[j];
      quad += r * r * inv_var_[j];
    }
    return log_norm_ - 0.5 * quad;
  }

  Vec score(const Vec& z, const Vec& x) const override {
    const Vec mu = mean_map_.apply(x);
    const Vec residual = (z - mu).cwiseProduct(inv_var_);
    return mean_map_.coeff.transpose() * residual;
  }

  Vec log_density_rows(const Mat& z, const Vec& x) const override {
    const Vec mu = mean_map_.apply(x);
    const int d = z_dim();
    Vec out(z.rows());
    kern::map(z.rows(), [&](std::int64_t row) {
      double quad = 0.0;
      for (int j = 0; j < d; ++j) {
        const double r = z(row, j) - mu[j];
        quad += r * r * inv_var_[j];
      }
      out[row] = log_norm_ - 0.5 * quad;
    });
    return out;
  }

 private:
  AffineMap mean_map_;
  Vec sigma_;
  Vec inv_var_;
  double log_norm_ = 0.0;
};

}  // namespace

std::shared_ptr<const ParametricDistribution> make_gaussian_family(
    const AffineMap& mean_map, const Vec& sigma) {
  return std::make_shared<GaussianMeanFamily>(mean_map, sigma);
}

}  // namespace rbopt
