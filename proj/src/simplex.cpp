#include "tia/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tia/errors.hpp"

namespace tia {

namespace {

struct Eta {
  int row;
  VecX d;  // pivot column in the old basis frame
};

class Simplex {
 public:
  Simplex(const LpProblem& prob, const LpOptions& opts)
      : A_(prob.A), b_(prob.b), opts_(opts) {
    m_ = static_cast<int>(A_.rows());
    n_ = static_cast<int>(A_.cols());
    // Full cost vector: structurals then artificials.
    cost_.resize(n_ + m_);
    cost_.head(n_) = prob.c;
    cost_.tail(m_).setZero();
    scale_b_ = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
  }

  LpResult run() {
    LpResult res;
    setup_artificial_basis();

    // Phase 1: minimize the artificial sum.
    VecX phase1_cost = VecX::Zero(n_ + m_);
    phase1_cost.tail(m_).setOnes();
    const LpStatus s1 = iterate(phase1_cost, /*phase1=*/true, res.iterations);
    if (s1 != LpStatus::Optimal) {
      res.status = s1 == LpStatus::Unbounded ? LpStatus::Infeasible : s1;
      return res;
    }
    double art_sum = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= n_) art_sum += std::max(0.0, xb_[r]);
    if (art_sum > 1e-7 * scale_b_) {
      res.status = LpStatus::Infeasible;
      return res;
    }

    // Phase 2 on the true costs. Artificials left in the basis (redundant
    // rows) are pinned at zero by the ratio-test guard.
    const LpStatus s2 = iterate(cost_, /*phase1=*/false, res.iterations);
    res.status = s2;
    if (s2 == LpStatus::Optimal || s2 == LpStatus::IterLimit) {
      res.x = VecX::Zero(n_);
      for (int r = 0; r < m_; ++r)
        if (basis_[r] < n_) res.x[basis_[r]] = xb_[r];
      res.objective = cost_.head(n_).dot(res.x);
      res.y = duals(cost_);
    }
    return res;
  }

 private:
  void setup_artificial_basis() {
    basis_.resize(m_);
    in_basis_.assign(n_ + m_, false);
    art_sign_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      in_basis_[n_ + r] = true;
      art_sign_[r] = (b_[r] >= 0.0) ? 1.0 : -1.0;
    }
    refactor();
    xb_ = solve_B(b_);
  }

  // Column j of the working matrix [A | signed identity].
  void gather_column(int j, VecX& out) const {
    out.setZero();
    if (j < n_) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
        out[static_cast<int>(it.row())] = it.value();
    } else {
      out[j - n_] = art_sign_[j - n_];
    }
  }

  void refactor() {
    MatX B(m_, m_);
    VecX col(m_);
    for (int r = 0; r < m_; ++r) {
      gather_column(basis_[r], col);
      B.col(r) = col;
    }
    lu_.compute(B);
    etas_.clear();
  }

  VecX solve_B(const VecX& v) const {
    VecX x = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = x[e.row] / e.d[e.row];
      x -= e.d * t;
      x[e.row] = t;
    }
    return x;
  }

  VecX solve_BT(const VecX& v) const {
    VecX x = v;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      const double s = e.d.dot(x) - e.d[e.row] * x[e.row];
      x[e.row] = (x[e.row] - s) / e.d[e.row];
    }
    return lu_.transpose().solve(x);
  }

  VecX duals(const VecX& full_cost) const {
    VecX cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = full_cost[basis_[r]];
    return solve_BT(cb);
  }

  LpStatus iterate(const VecX& full_cost, bool phase1, int& iter_accum) {
    const double tol = opts_.tol;
    int stall = 0;
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    VecX col(m_);

    for (int iter = 0; iter < opts_.max_iterations; ++iter, ++iter_accum) {
      const VecX y = duals(full_cost);

      // Pricing: most negative reduced cost (Dantzig) or Bland.
      int enter = -1;
      double best = -tol;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        double rc = full_cost[j];
        for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
          rc -= y[static_cast<int>(it.row())] * it.value();
        if (bland) {
          if (rc < -tol) {
            enter = j;
            break;
          }
        } else if (rc < best) {
          best = rc;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      gather_column(enter, col);
      const VecX d = solve_B(col);

      // Ratio test. Basic artificials must stay at zero in phase 2, so any
      // pivot that would move one off zero forces it out instead.
      int leave = -1;
      double step = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const bool is_art = basis_[r] >= n_;
        if (!phase1 && is_art && std::abs(d[r]) > tol) {
          step = 0.0;
          leave = r;
          break;
        }
        if (d[r] > tol) {
          const double ratio = std::max(0.0, xb_[r]) / d[r];
          if (ratio < step - 1e-12 ||
              (ratio < step + 1e-12 && (leave < 0 || basis_[r] < basis_[leave]))) {
            step = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;

      xb_ -= step * d;
      xb_[leave] = step;
      in_basis_[basis_[leave]] = false;
      in_basis_[enter] = true;
      basis_[leave] = enter;
      etas_.push_back({leave, d});

      if (static_cast<int>(etas_.size()) >= opts_.refactor_every) {
        refactor();
        xb_ = solve_B(b_);
      }

      // Objective progress / stall bookkeeping.
      double obj = 0.0;
      for (int r = 0; r < m_; ++r) obj += full_cost[basis_[r]] * xb_[r];
      if (obj < last_obj - tol * (1.0 + std::abs(last_obj))) {
        stall = 0;
        last_obj = obj;
      } else if (++stall > opts_.stall_limit) {
        bland = true;
      }
    }
    return LpStatus::IterLimit;
  }

  Eigen::SparseMatrix<double> A_;
  VecX b_;
  LpOptions opts_;
  int m_ = 0, n_ = 0;
  VecX cost_;
  double scale_b_ = 1.0;

  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  std::vector<double> art_sign_;
  Eigen::PartialPivLU<MatX> lu_;
  std::vector<Eta> etas_;
  VecX xb_;
};

}  // namespace

LpResult lp_solve(const LpProblem& prob, const LpOptions& opts) {
  if (prob.A.rows() != prob.b.size() || prob.A.cols() != prob.c.size())
    throw SolverFailureError("lp_solve: inconsistent problem dimensions");
  Simplex solver(prob, opts);
  return solver.run();
}

}  // namespace tia
