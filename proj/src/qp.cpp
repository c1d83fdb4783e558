#include "rbopt/qp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

namespace rbopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rotation application used by the QR updates: annihilates one component
// while keeping J orthogonal-times-L^{-T}.
inline void apply_rotation(double& t1, double& t2, double cc, double ss,
                           double xny) {
  const double a = t1;
  t1 = a * cc + t2 * ss;
  t2 = xny * (a + t1) - t2;
}

// Append the current np direction (d = J' np) to the factorization.
// Returns false when the new constraint is linearly dependent on the
// active set.
bool add_constraint(Mat& R, Mat& J, Vec& d, int& iq, double& r_norm) {
  const int n = static_cast<int>(J.rows());
  for (int j = n - 1; j >= iq + 1; --j) {
    double cc = d[j - 1];
    double ss = d[j];
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    d[j] = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      d[j - 1] = -h;
    } else {
      d[j - 1] = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = 0; k < n; ++k)
      apply_rotation(J(k, j - 1), J(k, j), cc, ss, xny);
  }
  ++iq;
  for (int i = 0; i < iq; ++i) R(i, iq - 1) = d[i];
  r_norm = std::max(r_norm, std::abs(d[iq - 1]));
  return std::abs(d[iq - 1]) > std::numeric_limits<double>::epsilon() * r_norm;
}

// Drop active constraint l and re-triangularize R.
void delete_constraint(Mat& R, Mat& J, std::vector<int>& active, Vec& u,
                       int& iq, int l) {
  const int n = static_cast<int>(J.rows());
  int qq = -1;
  for (int i = 0; i < iq; ++i) {
    if (active[static_cast<std::size_t>(i)] == l) {
      qq = i;
      break;
    }
  }
  for (int i = qq; i < iq - 1; ++i) {
    active[static_cast<std::size_t>(i)] = active[static_cast<std::size_t>(i + 1)];
    u[i] = u[i + 1];
    R.col(i) = R.col(i + 1);
  }
  active[static_cast<std::size_t>(iq - 1)] = 0;
  u[iq - 1] = u[iq];
  u[iq] = 0.0;
  for (int i = 0; i < iq; ++i) R(i, iq - 1) = 0.0;
  --iq;
  if (iq == 0) return;

  for (int j = qq; j < iq; ++j) {
    double cc = R(j, j);
    double ss = R(j + 1, j);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    cc /= h;
    ss /= h;
    R(j + 1, j) = 0.0;
    if (cc < 0.0) {
      R(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      R(j, j) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = j + 1; k < iq; ++k)
      apply_rotation(R(j, k), R(j + 1, k), cc, ss, xny);
    for (int k = 0; k < n; ++k)
      apply_rotation(J(k, j), J(k, j + 1), cc, ss, xny);
  }
}

}  // namespace

QpResult solve_qp(const Mat& G, const Vec& g0, const Mat& Ci, const Vec& ci0) {
  const int n = static_cast<int>(G.rows());
  const int m = static_cast<int>(Ci.cols());

  QpResult result;
  result.lambda = Vec::Zero(m);

  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success)
    throw InvalidParameterError("QP Hessian is not positive definite");

  // J = L^{-T}; the unconstrained minimizer seeds the dual iteration.
  Mat J = llt.matrixU().solve(Mat::Identity(n, n));
  Vec x = -llt.solve(g0);

  Mat R = Mat::Zero(n, n);
  double r_norm = 1.0;
  std::vector<int> active(static_cast<std::size_t>(std::min(m, n) + 1), 0);
  Vec u = Vec::Zero(n + 1);
  int iq = 0;

  // per-constraint violation scales
  Vec tol(m);
  for (int i = 0; i < m; ++i)
    tol[i] = 1e-11 * (1.0 + std::abs(ci0[i]) + Ci.col(i).norm());

  std::vector<bool> dropped_for(static_cast<std::size_t>(m), false);
  const int max_iter = 64 * (n + m + 1);
  int iter = 0;

  while (true) {
    if (++iter > max_iter) {
      result.feasible = false;
      result.iterations = iter;
      return result;
    }

    // most violated inactive constraint, ties by lowest index
    int ip = -1;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      bool is_active = false;
      for (int k = 0; k < iq; ++k)
        if (active[static_cast<std::size_t>(k)] == i) is_active = true;
      if (is_active) continue;
      const double s = Ci.col(i).dot(x) + ci0[i];
      if (s < -tol[i] && s < worst) {
        worst = s;
        ip = i;
      }
    }
    if (ip < 0) {
      for (int k = 0; k < iq; ++k)
        result.lambda[active[static_cast<std::size_t>(k)]] = u[k];
      result.x = x;
      result.feasible = true;
      result.iterations = iter;
      return result;
    }

    const Vec np = Ci.col(ip);
    double s_ip = np.dot(x) + ci0[ip];
    u[iq] = 0.0;

    while (true) {
      if (++iter > max_iter) {
        result.feasible = false;
        result.iterations = iter;
        return result;
      }
      const Vec d = J.transpose() * np;
      Vec z = Vec::Zero(n);
      if (iq < n) z = J.rightCols(n - iq) * d.tail(n - iq);
      Vec r = Vec::Zero(iq);
      if (iq > 0)
        r = R.topLeftCorner(iq, iq)
                .triangularView<Eigen::Upper>()
                .solve(d.head(iq));

      // partial step: smallest multiplier ratio among blocking constraints
      double t2 = kInf;
      int l = -1;
      for (int k = 0; k < iq; ++k) {
        if (r[k] > 0.0) {
          const double ratio = u[k] / r[k];
          if (ratio < t2) {
            t2 = ratio;
            l = k;
          }
        }
      }

      const double z_norm2 = z.squaredNorm();
      double t1 = kInf;
      if (z_norm2 > 1e-26) {
        const double ztn = z.dot(np);
        if (ztn > 0.0) t1 = -s_ip / ztn;
      }
      const double t = std::min(t1, t2);

      if (t >= kInf) {
        // dual unbounded: primal constraints inconsistent
        result.feasible = false;
        result.iterations = iter;
        return result;
      }

      if (t1 >= kInf) {
        // step in dual space only: drop the blocking constraint
        for (int k = 0; k < iq; ++k) u[k] -= t * r[k];
        u[iq] += t;
        delete_constraint(R, J, active, u, iq, active[static_cast<std::size_t>(l)]);
        continue;
      }

      x += t * z;
      for (int k = 0; k < iq; ++k) u[k] -= t * r[k];
      u[iq] += t;
      s_ip = np.dot(x) + ci0[ip];

      if (t == t2 && t1 > t2) {
        delete_constraint(R, J, active, u, iq, active[static_cast<std::size_t>(l)]);
        continue;
      }

      // full step: activate ip
      Vec d_mut = d;
      if (!add_constraint(R, J, d_mut, iq, r_norm)) {
        // linearly dependent constraint: accept current point if satisfied
        if (s_ip < -tol[ip]) {
          result.feasible = false;
          result.iterations = iter;
          return result;
        }
        --iq;  // roll back the bookkeeping add_constraint performed
        break;
      }
      active[static_cast<std::size_t>(iq - 1)] = ip;
      break;
    }
    (void)dropped_for;
  }
}

}  // namespace rbopt
