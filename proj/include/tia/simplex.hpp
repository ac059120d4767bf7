#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "tia/types.hpp"

namespace tia {

/// Linear program in computational standard form:
///   min c'x   s.t.  A x = b,  x >= 0.
struct LpProblem {
  Eigen::SparseMatrix<double> A;  // m x n, compressed
  VecX b;
  VecX c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0.0;
  VecX x;  ///< primal solution (n)
  VecX y;  ///< dual multipliers (m), y = B^-T c_B at the final basis
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 500000;
  double tol = 1e-9;
  int refactor_every = 64;
  int stall_limit = 2000;  ///< degenerate iterations before Bland's rule
};

/// Two-phase revised simplex with a dense LU basis and product-form
/// updates. Handles rank-deficient equality systems (redundant rows keep
/// their artificial pinned at zero).
LpResult lp_solve(const LpProblem& prob, const LpOptions& opts = {});

}  // namespace tia
