#pragma once

#include "rbopt/problem.hpp"

namespace rbopt {

struct QpResult {
  Vec x;
  Vec lambda;  // one multiplier per constraint row, >= 0
  bool feasible = false;
  int iterations = 0;
};

/// Strictly convex quadratic program
///   min 1/2 x'Gx + g0'x   s.t.   Ci' x + ci0 >= 0
/// solved with the Goldfarb-Idnani dual active-set method. G must be
/// positive definite (Ci is n-by-m, one column per constraint).
/// Returns feasible = false when the constraints are inconsistent.
QpResult solve_qp(const Mat& G, const Vec& g0, const Mat& Ci, const Vec& ci0);

}  // namespace rbopt
