#pragma once

#include <Eigen/SparseCore>

#include "tia/types.hpp"

namespace tia {

/// Lawson-Hanson nonnegative least squares: min ||A x - b||, x >= 0.
struct NnlsResult {
  VecX x;
  double residual = 0.0;  ///< ||A x - b||_2
  int iterations = 0;
  bool converged = false;
};

NnlsResult nnls_solve(const Eigen::SparseMatrix<double>& A, const VecX& b,
                      int max_iterations = 0 /* 0: 10*cols+100 */,
                      double tol = 1e-11);

/// Minimum-norm nonnegative solution of A lambda = -f:
///   min 1/2 ||lambda||^2  s.t.  A lambda + f = 0, lambda >= 0,
/// solved through the unconstrained dual (semismooth Newton), with a
/// regularized projected-gradient fallback when the equality system is
/// only approximately attainable.
struct MinNormQpResult {
  VecX lambda;
  double residual = 0.0;  ///< ||A lambda + f||_2
  int iterations = 0;
  bool converged = false;
};

MinNormQpResult min_norm_contact_qp(const Eigen::SparseMatrix<double>& A, const VecX& f,
                                    int max_iterations = 200, double tol = 1e-10);

}  // namespace tia
