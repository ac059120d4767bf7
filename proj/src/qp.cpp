#include "tia/qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tia {

namespace {

// Incremental upper-triangular Cholesky of the active-set Gram matrix.
class GramChol {
 public:
  explicit GramChol(int max_dim) : R_(max_dim, max_dim) {}

  int size() const { return k_; }

  bool push(const VecX& gram_col) {
    // gram_col: inner products with current active columns plus the new
    // column's self inner product at [k].
    VecX r(k_);
    for (int i = 0; i < k_; ++i) {
      double s = gram_col[i];
      for (int l = 0; l < i; ++l) s -= R_(l, i) * r[l];
      r[i] = s / R_(i, i);
    }
    double diag2 = gram_col[k_] - r.squaredNorm();
    if (diag2 <= 1e-14 * std::max(1.0, gram_col[k_])) return false;
    for (int i = 0; i < k_; ++i) R_(i, k_) = r[i];
    R_(k_, k_) = std::sqrt(diag2);
    ++k_;
    return true;
  }

  void clear() { k_ = 0; }

  // Solve (R'R) x = rhs.
  VecX solve(const VecX& rhs) const {
    VecX y(k_);
    for (int i = 0; i < k_; ++i) {
      double s = rhs[i];
      for (int l = 0; l < i; ++l) s -= R_(l, i) * y[l];
      y[i] = s / R_(i, i);
    }
    VecX x(k_);
    for (int i = k_ - 1; i >= 0; --i) {
      double s = y[i];
      for (int l = i + 1; l < k_; ++l) s -= R_(i, l) * x[l];
      x[i] = s / R_(i, i);
    }
    return x;
  }

 private:
  MatX R_;
  int k_ = 0;
};

double sparse_col_dot(const Eigen::SparseMatrix<double>& A, int j, const VecX& v) {
  double s = 0.0;
  for (Eigen::SparseMatrix<double>::InnerIterator it(A, j); it; ++it)
    s += it.value() * v[static_cast<int>(it.row())];
  return s;
}

void sparse_col_axpy(const Eigen::SparseMatrix<double>& A, int j, double alpha, VecX& v) {
  for (Eigen::SparseMatrix<double>::InnerIterator it(A, j); it; ++it)
    v[static_cast<int>(it.row())] += alpha * it.value();
}

}  // namespace

NnlsResult nnls_solve(const Eigen::SparseMatrix<double>& A, const VecX& b,
                      int max_iterations, double tol) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  if (max_iterations <= 0) max_iterations = 10 * n + 100;

  NnlsResult res;
  res.x = VecX::Zero(n);

  std::vector<int> active;  // indices in P, insertion order
  std::vector<char> in_active(n, 0);
  const int cap = std::min(n, 4 * m + 16);
  GramChol chol(cap);

  VecX resid = b;  // b - A x
  const double scale = std::max(1.0, b.norm());
  VecX xp;  // solution on the active set

  auto rebuild_chol = [&]() {
    chol.clear();
    std::vector<int> keep = active;
    active.clear();
    for (int j : keep) {
      VecX g(chol.size() + 1);
      // inner products of column j with existing active columns
      // (dense via scatter for robustness)
      VecX aj = VecX::Zero(m);
      sparse_col_axpy(A, j, 1.0, aj);
      for (int i = 0; i < static_cast<int>(active.size()); ++i)
        g[i] = sparse_col_dot(A, active[i], aj);
      g[chol.size()] = aj.squaredNorm();
      if (chol.push(g)) {
        active.push_back(j);
      } else {
        in_active[j] = 0;
      }
    }
  };

  for (int outer = 0; outer < max_iterations; ++outer, ++res.iterations) {
    // Pricing: w = A' resid.
    int best = -1;
    double best_w = tol * scale;
    for (int j = 0; j < n; ++j) {
      if (in_active[j]) continue;
      const double w = sparse_col_dot(A, j, resid);
      if (w > best_w) {
        best_w = w;
        best = j;
      }
    }
    if (best < 0) {
      res.converged = true;
      break;
    }
    if (static_cast<int>(active.size()) >= cap) {
      res.converged = true;  // active set saturated the row space
      break;
    }

    // Try to add the column.
    {
      VecX aj = VecX::Zero(m);
      sparse_col_axpy(A, best, 1.0, aj);
      VecX g(static_cast<int>(active.size()) + 1);
      for (int i = 0; i < static_cast<int>(active.size()); ++i)
        g[i] = sparse_col_dot(A, active[i], aj);
      g[static_cast<int>(active.size())] = aj.squaredNorm();
      if (!chol.push(g)) continue;  // dependent column; gradient noise
      active.push_back(best);
      in_active[best] = 1;
    }

    // Inner loop: least squares on P with nonnegativity repair.
    for (;;) {
      VecX rhs(static_cast<int>(active.size()));
      for (int i = 0; i < static_cast<int>(active.size()); ++i)
        rhs[i] = sparse_col_dot(A, active[i], b);
      xp = chol.solve(rhs);

      double min_xp = std::numeric_limits<double>::infinity();
      for (int i = 0; i < xp.size(); ++i) min_xp = std::min(min_xp, xp[i]);
      if (min_xp > 0.0) break;

      // Step from current feasible x toward xp until the first variable
      // hits zero, then drop all zeros.
      double alpha = 1.0;
      for (int i = 0; i < xp.size(); ++i) {
        const double xi = res.x[active[i]];
        if (xp[i] <= 0.0 && xi - xp[i] > 0.0)
          alpha = std::min(alpha, xi / (xi - xp[i]));
      }
      std::vector<int> next;
      for (int i = 0; i < xp.size(); ++i) {
        const double v = res.x[active[i]] + alpha * (xp[i] - res.x[active[i]]);
        res.x[active[i]] = v;
        if (v > 1e-13 * scale) {
          next.push_back(active[i]);
        } else {
          res.x[active[i]] = 0.0;
          in_active[active[i]] = 0;
        }
      }
      active = next;
      rebuild_chol();
      if (active.empty()) break;
    }

    // Commit xp and refresh the residual.
    for (int j = 0; j < n; ++j)
      if (!in_active[j]) res.x[j] = 0.0;
    for (int i = 0; i < static_cast<int>(active.size()); ++i) res.x[active[i]] = xp[i];
    resid = b;
    for (int i = 0; i < static_cast<int>(active.size()); ++i)
      sparse_col_axpy(A, active[i], -xp[i], resid);
  }

  res.residual = resid.norm();
  return res;
}

namespace {

double largest_singular_value(const Eigen::SparseMatrix<double>& A, int iters = 40) {
  VecX v = VecX::Ones(A.cols()).normalized();
  double sigma = 0.0;
  for (int i = 0; i < iters; ++i) {
    VecX u = A * v;
    VecX w = A.transpose() * u;
    sigma = std::sqrt(w.norm());
    if (w.norm() < 1e-300) break;
    v = w.normalized();
  }
  return sigma;
}

}  // namespace

MinNormQpResult min_norm_contact_qp(const Eigen::SparseMatrix<double>& A, const VecX& f,
                                    int max_iterations, double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MinNormQpResult res;
  res.lambda = VecX::Zero(n);
  const double fscale = std::max(1.0, f.norm());

  // Dual: minimize Phi(u) = 1/2 ||[A'u]_+||^2 + f'u; at a minimizer,
  // lambda = [A'u]_+ satisfies A lambda + f = 0 and is the min-norm
  // feasible multiplier vector.
  VecX u = VecX::Zero(m);
  VecX atu = VecX::Zero(n);
  const auto phi = [&](const VecX& atu_val, const VecX& u_val) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (atu_val[j] > 0.0) s += atu_val[j] * atu_val[j];
    return 0.5 * s + f.dot(u_val);
  };

  bool newton_ok = false;
  for (int it = 0; it < max_iterations; ++it, ++res.iterations) {
    atu = A.transpose() * u;
    VecX lambda = atu.cwiseMax(0.0);
    VecX grad = A * lambda + f;
    const double gn = grad.norm();
    if (gn <= tol * fscale) {
      newton_ok = true;
      res.lambda = lambda;
      break;
    }

    // Active-set Hessian A D A' with a small ridge.
    MatX H = MatX::Zero(m, m);
    for (int j = 0; j < n; ++j) {
      if (atu[j] <= 0.0) continue;
      // rank-one update with the sparse column
      std::vector<std::pair<int, double>> nz;
      for (Eigen::SparseMatrix<double>::InnerIterator itc(A, j); itc; ++itc)
        nz.emplace_back(static_cast<int>(itc.row()), itc.value());
      for (const auto& [r1, v1] : nz)
        for (const auto& [r2, v2] : nz) H(r1, r2) += v1 * v2;
    }
    const double ridge = 1e-10 * std::max(1.0, H.trace() / m);
    H.diagonal().array() += ridge;

    Eigen::LDLT<MatX> ldlt(H);
    VecX step = ldlt.solve(-grad);
    if (!(step.allFinite())) break;

    // Backtracking line search on Phi.
    const double phi0 = phi(atu, u);
    const double slope = grad.dot(step);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      VecX u_try = u + alpha * step;
      VecX atu_try = A.transpose() * u_try;
      if (phi(atu_try, u_try) <= phi0 + 1e-4 * alpha * slope) {
        u = u_try;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // stalled; fall through to regularized path
  }

  if (newton_ok) {
    res.residual = (A * res.lambda + f).norm();
    res.converged = true;
    return res;
  }

  // Fallback: regularized projected gradient (FISTA) on
  //   1/2 ||A l + f||^2 + mu/2 ||l||^2, l >= 0, with mu -> 0.
  const double sigma = largest_singular_value(A);
  VecX lam = res.lambda.cwiseMax(0.0);
  for (double mu : {1e-6 * sigma * sigma, 1e-9 * sigma * sigma, 1e-12 * sigma * sigma}) {
    const double lip = sigma * sigma + mu;
    VecX z = lam, lam_prev = lam;
    double tk = 1.0;
    for (int it = 0; it < 4000; ++it) {
      VecX grad = A.transpose() * (A * z + f) + mu * z;
      VecX lam_next = (z - grad / lip).cwiseMax(0.0);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      z = lam_next + ((tk - 1.0) / t_next) * (lam_next - lam_prev);
      lam_prev = lam;
      lam = lam_next;
      tk = t_next;
      if (it % 64 == 0) {
        const VecX kkt = A.transpose() * (A * lam + f) + mu * lam;
        double viol = 0.0;
        for (int j = 0; j < n; ++j)
          viol = std::max(viol, lam[j] > 0 ? std::abs(kkt[j]) : std::max(0.0, -kkt[j]));
        if (viol <= 1e-9 * fscale * std::max(1.0, sigma)) break;
      }
    }
  }
  res.lambda = lam;
  res.residual = (A * lam + f).norm();
  res.converged = res.residual <= 1e-6 * fscale;
  return res;
}

}  // namespace tia
