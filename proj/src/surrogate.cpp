#include "rbopt/surrogate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace rbopt {

namespace {

// One row of the graded-lexicographic quadratic basis at u.
Eigen::RowVectorXd basis_row(const Vec& u) {
  const int d = static_cast<int>(u.size());
  Eigen::RowVectorXd row(QuadraticSurrogate::basis_size(d));
  int col = 0;
  row[col++] = 1.0;
  for (int i = 0; i < d; ++i) row[col++] = u[i];
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) row[col++] = u[i] * u[j];
  return row;
}

// Least-squares coefficients in the scaled frame u = (x - center)/radius.
Vec fit_scaled(const Mat& points, const Vec& values, const Vec& center,
               double radius) {
  const int m = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  const int basis = QuadraticSurrogate::basis_size(d);
  Mat design(m, basis);
  for (int row = 0; row < m; ++row) {
    const Vec u = (points.row(row).transpose() - center) / radius;
    design.row(row) = basis_row(u);
  }
  Eigen::ColPivHouseholderQR<Mat> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < basis)
    throw PoisednessError("rank-deficient design matrix in quadratic fit");
  return qr.solve(values);
}

double eval_scaled(const Vec& scaled_coeffs, const Vec& center, double radius,
                   const Vec& x) {
  const Vec u = (x - center) / radius;
  return basis_row(u).dot(scaled_coeffs);
}

// Map scaled-frame coefficients back to the plain monomial basis in x.
QuadraticSurrogate to_plain_basis(const Vec& scaled, const Vec& center,
                                  double radius) {
  const int d = static_cast<int>(center.size());
  const double alpha = scaled[0];
  const Vec beta = scaled.segment(1, d);
  Mat gamma = Mat::Zero(d, d);
  {
    int col = 1 + d;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        if (i == j) {
          gamma(i, i) = scaled[col];
        } else {
          gamma(i, j) = 0.5 * scaled[col];
          gamma(j, i) = 0.5 * scaled[col];
        }
        ++col;
      }
    }
  }
  const double r2 = radius * radius;
  const Mat quad = gamma / r2;
  const Vec lin = beta / radius - 2.0 * (gamma * center) / r2;
  const double constant = alpha - beta.dot(center) / radius +
                          center.dot(gamma * center) / r2;

  QuadraticSurrogate s;
  s.dim = d;
  s.center = center;
  s.radius = radius;
  s.coeffs.resize(QuadraticSurrogate::basis_size(d));
  int col = 0;
  s.coeffs[col++] = constant;
  for (int i = 0; i < d; ++i) s.coeffs[col++] = lin[i];
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      s.coeffs[col++] = i == j ? quad(i, i) : 2.0 * quad(i, j);
    }
  }
  return s;
}

}  // namespace

double QuadraticSurrogate::value(const Vec& x) const {
  return basis_row(x).dot(coeffs);
}

Vec QuadraticSurrogate::gradient(const Vec& x) const {
  Vec g = coeffs.segment(1, dim);
  int col = 1 + dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double c = coeffs[col++];
      if (i == j) {
        g[i] += 2.0 * c * x[i];
      } else {
        g[i] += c * x[j];
        g[j] += c * x[i];
      }
    }
  }
  return g;
}

Mat QuadraticSurrogate::hessian() const {
  Mat h = Mat::Zero(dim, dim);
  int col = 1 + dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double c = coeffs[col++];
      if (i == j) {
        h(i, i) = 2.0 * c;
      } else {
        h(i, j) = c;
        h(j, i) = c;
      }
    }
  }
  return h;
}

Mat sample_ball(const Vec& center, double radius, int count,
                const DesignSpace& space, RngStream rng) {
  if (!(radius > 0.0)) throw InvalidParameterError("ball radius must be > 0");
  if (count < 1) throw InvalidParameterError("point count must be >= 1");
  const int d = static_cast<int>(center.size());
  constexpr int kMaxTries = 10000;

  Mat points(count, d);
  for (int p = 0; p < count; ++p) {
    auto eng = rng.engine(static_cast<std::uint64_t>(p));
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
      Vec dir(d);
      for (int i = 0; i < d; ++i) dir[i] = nd(eng);
      const double norm = dir.norm();
      if (norm == 0.0) continue;
      const double scale =
          radius * std::pow(ud(eng), 1.0 / static_cast<double>(d));
      const Vec x = center + (scale / norm) * dir;
      if (space.contains(x)) {
        points.row(p) = x.transpose();
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw InfeasibleRegionError(
          "could not sample the ball/box intersection (empty or negligible)");
  }
  return points;
}

QuadraticSurrogate fit_quadratic(const DesignSample& sample) {
  const int m = static_cast<int>(sample.points.rows());
  const int d = static_cast<int>(sample.points.cols());
  const int basis = QuadraticSurrogate::basis_size(d);
  if (m < basis)
    throw InvalidParameterError("quadratic fit needs at least " +
                                std::to_string(basis) + " points, got " +
                                std::to_string(m));
  const Vec scaled =
      fit_scaled(sample.points, sample.values, sample.center, sample.radius);
  return to_plain_basis(scaled, sample.center, sample.radius);
}

double loo_error(const DesignSample& sample) {
  const int m = static_cast<int>(sample.points.rows());
  const int d = static_cast<int>(sample.points.cols());
  const int basis = QuadraticSurrogate::basis_size(d);
  if (m - 1 < basis)
    throw InvalidParameterError(
        "leave-one-out needs at least " + std::to_string(basis + 1) +
        " points, got " + std::to_string(m));

  Mat reduced_pts(m - 1, d);
  Vec reduced_vals(m - 1);
  double worst = 0.0;
  for (int leave = 0; leave < m; ++leave) {
    int row = 0;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      reduced_pts.row(row) = sample.points.row(i);
      reduced_vals[row] = sample.values[i];
      ++row;
    }
    const Vec scaled =
        fit_scaled(reduced_pts, reduced_vals, sample.center, sample.radius);
    const double predicted = eval_scaled(scaled, sample.center, sample.radius,
                                         sample.points.row(leave).transpose());
    worst = std::max(worst, std::abs(sample.values[leave] - predicted));
  }
  return worst;
}

namespace {

SurrogateBuild surr_constr_impl(const RboProblem& problem, const Vec& x_c,
                                double rho_max, double eps_star, double omega,
                                int m_points, std::int64_t n_mc, RngStream rng,
                                EvalCounters& counters, SurrValueMode mode,
                                double rho_min_guard,
                                ReliabilityEvaluation center_eval,
                                bool have_center_eval) {
  const int d = problem.space.dim();
  const int basis = QuadraticSurrogate::basis_size(d);
  if (!(rho_max > 0.0)) throw InvalidParameterError("rho_max must be > 0");
  if (!(eps_star > 0.0)) throw InvalidParameterError("eps_star must be > 0");
  if (!(omega > 0.0 && omega < 1.0))
    throw InvalidParameterError("contraction factor must lie in (0,1)");
  if (m_points <= basis)
    throw InvalidParameterError("m_points must exceed the basis size " +
                                std::to_string(basis));

  // In reweight mode this is the single full evaluation of the whole call;
  // every constraint value below comes from reweighting its samples.
  double center_value = 0.0;
  if (mode == SurrValueMode::kReweight) {
    if (!have_center_eval) {
      center_eval = full_evaluation(
          problem, x_c, n_mc, rng.child(stream_label::kSampling), counters);
    }
    center_value = log_constraint(center_eval.p_hat, problem.theta, n_mc);
  }

  constexpr int kPoisednessRetries = 3;
  double rho = rho_max;
  for (int pass = 0;; ++pass) {
    if (rho < rho_min_guard)
      throw SurrogateFailureError(
          "certification radius fell below the guard without meeting the "
          "error bound");

    if (mode == SurrValueMode::kFullCrn) {
      // Fresh draws per pass, shared across all m points of the pass.
      const RngStream crn = rng.child(stream_label::kCrn,
                                      static_cast<std::uint64_t>(pass));
      center_eval = full_evaluation(problem, x_c, n_mc, crn, counters);
      center_value = log_constraint(center_eval.p_hat, problem.theta, n_mc);
    }

    bool certified = false;
    DesignSample sample;
    double eps = 0.0;
    for (int attempt = 0; attempt <= kPoisednessRetries; ++attempt) {
      const Mat pts = sample_ball(
          x_c, rho, m_points - 1, problem.space,
          rng.child(stream_label::kBallPoints,
                    static_cast<std::uint64_t>(pass) * 8 + attempt));
      sample.points.resize(m_points, d);
      sample.values.resize(m_points);
      sample.points.topRows(m_points - 1) = pts;
      sample.points.row(m_points - 1) = x_c.transpose();
      sample.center = x_c;
      sample.radius = rho;
      for (int j = 0; j < m_points - 1; ++j) {
        const Vec xj = pts.row(j).transpose();
        if (mode == SurrValueMode::kReweight) {
          const ReweightedEstimate est =
              reweighted_evaluation(center_eval, *problem.dist, xj, counters);
          sample.values[j] = log_constraint(est.p_hat, problem.theta, n_mc);
        } else {
          const RngStream crn = rng.child(stream_label::kCrn,
                                          static_cast<std::uint64_t>(pass));
          const ReliabilityEvaluation ev =
              full_evaluation(problem, xj, n_mc, crn, counters);
          sample.values[j] = log_constraint(ev.p_hat, problem.theta, n_mc);
        }
      }
      sample.values[m_points - 1] = center_value;
      try {
        eps = loo_error(sample);
        certified = true;
        break;
      } catch (const PoisednessError&) {
        // uniform ball draws are almost surely poised; retry covers
        // degenerate box intersections
        continue;
      }
    }
    if (!certified)
      throw SurrogateFailureError("poisedness retries exhausted");

    if (eps < eps_star) {
      SurrogateBuild build;
      build.model = fit_quadratic(sample);
      build.model.loo_error = eps;
      build.radius = rho;
      build.center_eval = std::move(center_eval);
      build.passes = pass + 1;
      return build;
    }
    rho *= omega;
  }
}

}  // namespace

SurrogateBuild surr_constr(const RboProblem& problem, const Vec& x_c,
                           double rho_max, double eps_star, double omega,
                           int m_points, std::int64_t n_mc, RngStream rng,
                           EvalCounters& counters, SurrValueMode mode,
                           double rho_min_guard) {
  return surr_constr_impl(problem, x_c, rho_max, eps_star, omega, m_points,
                          n_mc, rng, counters, mode, rho_min_guard,
                          ReliabilityEvaluation{}, false);
}

SurrogateBuild surr_constr_with_eval(const RboProblem& problem, const Vec& x_c,
                                     double rho_max, double eps_star,
                                     double omega, int m_points,
                                     std::int64_t n_mc, RngStream rng,
                                     EvalCounters& counters,
                                     ReliabilityEvaluation center_eval,
                                     double rho_min_guard) {
  return surr_constr_impl(problem, x_c, rho_max, eps_star, omega, m_points,
                          n_mc, rng, counters, SurrValueMode::kReweight,
                          rho_min_guard, std::move(center_eval), true);
}

}  // namespace rbopt
