#include "rbopt/sqp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rbopt/qp.hpp"

namespace rbopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;

struct Point {
  double f = 0.0;
  Vec grad_f;
  Vec c;       // inequality values
  Mat jac;     // d x m, column i = grad c_i
};

Point evaluate(const Nlp& nlp, const Vec& x, bool with_gradients) {
  Point p;
  const int m = static_cast<int>(nlp.inequalities.size());
  const int d = static_cast<int>(x.size());
  p.c.resize(m);
  if (with_gradients) {
    p.grad_f.resize(d);
    p.jac.resize(d, m);
    Vec g(d);
    p.f = nlp.objective(x, &g);
    p.grad_f = g;
    for (int i = 0; i < m; ++i) {
      p.c[i] = nlp.inequalities[static_cast<std::size_t>(i)](x, &g);
      p.jac.col(i) = g;
    }
  } else {
    p.f = nlp.objective(x, nullptr);
    for (int i = 0; i < m; ++i)
      p.c[i] = nlp.inequalities[static_cast<std::size_t>(i)](x, nullptr);
  }
  return p;
}

double merit(const Point& p, double nu) {
  double viol = 0.0;
  for (int i = 0; i < p.c.size(); ++i) viol += std::max(0.0, p.c[i]);
  return p.f + nu * viol;
}

double violation_sum(const Point& p) {
  double viol = 0.0;
  for (int i = 0; i < p.c.size(); ++i) viol += std::max(0.0, p.c[i]);
  return viol;
}

}  // namespace

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  const int d = static_cast<int>(x.size());
  Vec g(d);
  Vec xp = x;
  for (int i = 0; i < d; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

SqpReport sqp_minimize(const Nlp& nlp, Vec x0, const SolverOptions& opts) {
  const int d = static_cast<int>(x0.size());
  const int m = static_cast<int>(nlp.inequalities.size());

  Vec x = x0.cwiseMax(nlp.lower).cwiseMin(nlp.upper);
  Mat B = Mat::Identity(d, d);
  double nu = 1.0;

  Point cur = evaluate(nlp, x, true);
  int small_steps = 0;

  SqpReport report;
  report.lambda = Vec::Zero(m);

  auto kkt_residual = [&](const Point& p, const Vec& lambda_nl,
                          const Vec& mu_lo, const Vec& mu_hi) {
    Vec stat = p.grad_f;
    for (int i = 0; i < m; ++i) stat += lambda_nl[i] * p.jac.col(i);
    stat -= mu_lo;  // lower bound rows enter with +e_j in ">=" form
    stat += mu_hi;
    double comp = 0.0;
    for (int i = 0; i < m; ++i)
      comp = std::max(comp, std::abs(lambda_nl[i] * p.c[i]));
    return std::max(stat.lpNorm<Eigen::Infinity>(), comp);
  };

  for (int iter = 0; iter < opts.max_sqp_iters; ++iter) {
    report.iterations = iter + 1;

    // Assemble QP rows: nonlinear linearizations first, then finite bounds.
    int n_lo = 0, n_hi = 0;
    for (int j = 0; j < d; ++j) {
      if (std::isfinite(nlp.lower[j])) ++n_lo;
      if (std::isfinite(nlp.upper[j])) ++n_hi;
    }
    const int rows = m + n_lo + n_hi;
    Mat Ci(d, rows);
    Vec ci0(rows);
    for (int i = 0; i < m; ++i) Ci.col(i) = -cur.jac.col(i);
    {
      int col = m;
      for (int j = 0; j < d; ++j) {
        if (std::isfinite(nlp.lower[j])) {
          Ci.col(col) = Vec::Unit(d, j);
          ci0[col] = x[j] - nlp.lower[j];
          ++col;
        }
      }
      for (int j = 0; j < d; ++j) {
        if (std::isfinite(nlp.upper[j])) {
          Ci.col(col) = -Vec::Unit(d, j);
          ci0[col] = nlp.upper[j] - x[j];
          ++col;
        }
      }
    }

    // Powell relaxation: violated linearizations are softened until the QP
    // admits a point (beta -> 0 always does, since p = 0 then satisfies it).
    QpResult qp;
    double beta = 1.0;
    for (int relax = 0; relax < 30; ++relax) {
      for (int i = 0; i < m; ++i)
        ci0[i] = cur.c[i] > 0.0 ? -beta * cur.c[i] : -cur.c[i];
      Eigen::LLT<Mat> probe(B);
      if (probe.info() != Eigen::Success) B = Mat::Identity(d, d);
      qp = solve_qp(B, cur.grad_f, Ci, ci0);
      if (qp.feasible) break;
      beta = relax >= 28 ? 0.0 : beta * 0.25;
    }
    if (!qp.feasible) {
      report.qp_infeasible = true;
      break;
    }

    Vec p = qp.x;
    if (p.norm() > opts.max_step) p *= opts.max_step / p.norm();
    const Vec lambda_nl = qp.lambda.head(m);
    Vec mu_lo = Vec::Zero(d), mu_hi = Vec::Zero(d);
    {
      int col = m;
      for (int j = 0; j < d; ++j)
        if (std::isfinite(nlp.lower[j])) mu_lo[j] = qp.lambda[col++];
      for (int j = 0; j < d; ++j)
        if (std::isfinite(nlp.upper[j])) mu_hi[j] = qp.lambda[col++];
    }
    report.lambda = lambda_nl;

    const double kkt = kkt_residual(cur, lambda_nl, mu_lo, mu_hi);
    const double viol = [&] {
      double v = 0.0;
      for (int i = 0; i < m; ++i) v = std::max(v, cur.c[i]);
      return std::max(0.0, v);
    }();
    report.kkt_residual = kkt;
    report.max_violation = viol;
    if (kkt <= opts.kkt_tol && viol <= kFeasTol) {
      report.converged = true;
      break;
    }

    const double step_scale = 1.0 + x.norm();
    if (p.norm() <= 1e-13 * step_scale) {
      report.stalled = true;
      break;
    }

    // l1 merit line search
    nu = std::max(nu, 1.5 * lambda_nl.lpNorm<Eigen::Infinity>() + 1e-2);
    const double phi0 = merit(cur, nu);
    const double descent = cur.grad_f.dot(p) - nu * violation_sum(cur);
    if (descent >= 0.0) {
      report.stalled = true;
      break;
    }
    double alpha = 1.0;
    bool accepted = false;
    Point trial;
    Vec x_trial;
    for (int ls = 0; ls < 40; ++ls) {
      x_trial = x + alpha * p;
      trial = evaluate(nlp, x_trial, false);
      if (merit(trial, nu) <= phi0 + 1e-4 * alpha * descent) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      report.stalled = true;
      break;
    }

    // damped BFGS on the Lagrangian
    Point next = evaluate(nlp, x_trial, true);
    Vec grad_l_old = cur.grad_f;
    Vec grad_l_new = next.grad_f;
    for (int i = 0; i < m; ++i) {
      grad_l_old += lambda_nl[i] * cur.jac.col(i);
      grad_l_new += lambda_nl[i] * next.jac.col(i);
    }
    const Vec s = x_trial - x;
    Vec y = grad_l_new - grad_l_old;
    const Vec bs = B * s;
    const double s_bs = s.dot(bs);
    double s_y = s.dot(y);
    if (s_bs > 0.0 && s_y < 0.2 * s_bs) {
      const double theta = 0.8 * s_bs / (s_bs - s_y);
      y = theta * y + (1.0 - theta) * bs;
      s_y = s.dot(y);
    }
    if (s_y > 1e-14 * step_scale && s_bs > 0.0) {
      B += (y * y.transpose()) / s_y - (bs * bs.transpose()) / s_bs;
    }

    if (opts.stall_step_tol > 0.0) {
      if (s.norm() <= opts.stall_step_tol * step_scale) {
        if (++small_steps >= 3) {
          x = x_trial;
          cur = next;
          report.stalled = true;
          break;
        }
      } else {
        small_steps = 0;
      }
    }

    x = x_trial;
    cur = next;
  }

  report.x = x;
  report.f = cur.f;
  {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v = std::max(v, cur.c[i]);
    report.max_violation = std::max(0.0, v);
  }
  return report;
}

}  // namespace rbopt
