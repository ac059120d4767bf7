#include "tia/statics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tia/errors.hpp"
#include "tia/qp.hpp"
#include "tia/simplex.hpp"

namespace tia {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Locked: return "locked";
    case Classification::Activated: return "activated";
    case Classification::Neutral: return "neutral";
    case Classification::Suppressed: return "suppressed";
  }
  return "?";
}

namespace {

// Rank and a basis of range(G)^perp (the gap-preserving motions).
std::pair<Index, MatX> range_complement(const Eigen::SparseMatrix<double>& G) {
  const Index m = G.rows();
  if (G.cols() == 0) return {0, MatX::Identity(m, m)};
  MatX dense = MatX(G);
  Eigen::ColPivHouseholderQR<MatX> qr(dense);
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();
  const Index nullity = m - rank;
  MatX Q = qr.householderQ();
  return {rank, Q.rightCols(nullity)};
}

}  // namespace

KinematicFeasibility kinematic_feasibility(const Eigen::SparseMatrix<double>& G) {
  KinematicFeasibility out;
  const Index m = G.rows();
  const Index nc = G.cols();

  const auto [rank, null_basis] = range_complement(G);
  out.nullity = m - rank;

  // Fast certificate of z* = 0: a nonnegative beta with G beta = -G 1
  // is dual-feasible with zero objective.
  bool certified_zero = false;
  if (nc > 0) {
    const VecX g1 = G * VecX::Ones(nc);
    const double scale = std::max(1.0, g1.norm());
    NnlsResult cert = nnls_solve(G, -g1);
    if (cert.converged && cert.residual <= 1e-8 * scale) certified_zero = true;

    if (!certified_zero) {
      // Exact value by LP: the dual of
      //   max 1'(G'dq)  s.t. 0 <= G'dq <= 1
      // is  min 1'alpha  s.t. G alpha - G beta = G 1, alpha, beta >= 0.
      LpProblem lp;
      lp.b = g1;
      lp.c = VecX::Zero(2 * nc);
      lp.c.head(nc).setOnes();
      Eigen::SparseMatrix<double> A(m, 2 * nc);
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(2 * G.nonZeros());
      for (Index j = 0; j < nc; ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(G, j); it; ++it) {
          trips.emplace_back(it.row(), j, it.value());
          trips.emplace_back(it.row(), nc + j, -it.value());
        }
      A.setFromTriplets(trips.begin(), trips.end());
      A.makeCompressed();
      lp.A = std::move(A);
      const LpResult r = lp_solve(lp);
      if (r.status != LpStatus::Optimal)
        throw SolverFailureError("kinematic feasibility LP did not reach optimality (status " +
                                 std::to_string(static_cast<int>(r.status)) + ", iterations " +
                                 std::to_string(r.iterations) + ")");
      if (r.objective > 1e-7 * std::max<double>(1, nc)) {
        out.z_star = r.objective;
        out.mechanism = r.y;  // LP duals realize the admissible direction
        return out;
      }
      certified_zero = true;
    }
  }

  if (certified_zero || nc == 0) {
    if (out.nullity > 0) {
      // Only gap-preserving (sliding) directions remain. Report the
      // subspace dimension so z_star stays nonzero exactly when a
      // mechanism exists, and surface one such direction.
      out.z_star = static_cast<double>(out.nullity);
      VecX v = null_basis.col(0);
      out.mechanism = v / v.lpNorm<Eigen::Infinity>();
    } else {
      out.z_star = 0.0;
    }
  }
  return out;
}

namespace {

// Shared machinery for the activation/suppression LPs:
//   max f'dq  s.t.  G'dq >= 0, ||dq||_1 <= 1
// solved through its dual
//   min mu  s.t.  mu 1 - G y >= f, mu 1 + G y >= -f, y >= 0, mu >= 0,
// whose row multipliers w1, w2 recover dq = w1 - w2.
double max_work_rate(const Eigen::SparseMatrix<double>& G, const VecX& f, VecX* arg) {
  const Index m = G.rows();
  const Index nc = G.cols();

  LpProblem lp;
  lp.b.resize(2 * m);
  lp.b.head(m) = f;
  lp.b.tail(m) = -f;
  const Index nvar = nc + 1 + 2 * m;
  lp.c = VecX::Zero(nvar);
  lp.c[nc] = 1.0;  // mu

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * G.nonZeros() + 6 * m);
  for (Index j = 0; j < nc; ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, j); it; ++it) {
      trips.emplace_back(it.row(), j, -it.value());
      trips.emplace_back(m + it.row(), j, it.value());
    }
  for (Index r = 0; r < 2 * m; ++r) {
    trips.emplace_back(r, nc, 1.0);
    trips.emplace_back(r, nc + 1 + r, -1.0);  // surplus
  }
  Eigen::SparseMatrix<double> A(2 * m, nvar);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  lp.A = std::move(A);

  const LpResult r = lp_solve(lp);
  if (r.status != LpStatus::Optimal)
    throw SolverFailureError("mechanism LP did not reach optimality (status " +
                             std::to_string(static_cast<int>(r.status)) + ", iterations " +
                             std::to_string(r.iterations) + ")");
  if (arg) *arg = r.y.head(m) - r.y.tail(m);
  return r.objective;
}

}  // namespace

double mechanism_activation(const Eigen::SparseMatrix<double>& G, const VecX& f_ext,
                            VecX* argmax) {
  return std::max(0.0, max_work_rate(G, f_ext, argmax));
}

double mechanism_suppression(const Eigen::SparseMatrix<double>& G, const VecX& f_ext,
                             VecX* argmin) {
  const double v = max_work_rate(G, -f_ext, argmin);
  return std::min(0.0, -v);
}

Classification classify(double z_star, std::optional<double> gamma_max,
                        std::optional<double> gamma_min, double f_ext_norm) {
  if (z_star <= 0.0) return Classification::Locked;
  const double eps = 1e-9 * f_ext_norm;
  if (gamma_max && *gamma_max > eps) return Classification::Activated;
  if (gamma_min && *gamma_min < -eps) return Classification::Suppressed;
  return Classification::Neutral;
}

KinematicReport analyze_kinematics(const Eigen::SparseMatrix<double>& G,
                                   const VecX& f_ext) {
  KinematicReport rep;
  KinematicFeasibility kf = kinematic_feasibility(G);
  rep.z_star = kf.z_star;
  rep.nullity = kf.nullity;
  rep.mechanism = kf.mechanism;
  if (kf.z_star > 0.0) {
    VecX dq_max, dq_min;
    rep.gamma_max = mechanism_activation(G, f_ext, &dq_max);
    rep.gamma_min = mechanism_suppression(G, f_ext, &dq_min);
    // Prefer the load-relevant direction in the report.
    if (*rep.gamma_max > 0.0)
      rep.mechanism = dq_max;
    else if (*rep.gamma_min < 0.0)
      rep.mechanism = dq_min;
  }
  rep.classification = classify(rep.z_star, rep.gamma_max, rep.gamma_min, f_ext.norm());
  return rep;
}

EquilibriumReport solve_contact_forces(const Eigen::SparseMatrix<double>& G,
                                       const VecX& f_ext, Classification classification) {
  if (classification == Classification::Activated ||
      classification == Classification::Neutral)
    throw ContractViolationError(
        "contact forces are only defined for locked or suppressed states");

  EquilibriumReport rep;
  const double fn = f_ext.norm();
  if (fn == 0.0) {
    rep.lambdas = VecX::Zero(G.cols());
    rep.residual = 0.0;
    rep.feasible = true;
    return rep;
  }

  // Phase 1: can the contact set carry the load at all?
  NnlsResult ls = nnls_solve(G, -f_ext);
  if (!ls.converged)
    throw SolverFailureError("contact force NNLS did not converge after " +
                             std::to_string(ls.iterations) + " iterations");
  if (ls.residual > 1e-6 * fn) {
    rep.lambdas = ls.x;
    rep.residual = ls.residual / fn;
    rep.feasible = false;
    return rep;
  }

  // Phase 2: minimum-norm selection among the equilibria.
  MinNormQpResult qp = min_norm_contact_qp(G, f_ext);
  if (qp.converged && qp.residual <= 1e-6 * fn) {
    rep.lambdas = qp.lambda;
    rep.residual = qp.residual / fn;
  } else {
    rep.lambdas = ls.x;  // feasible but not minimum norm; surfaced via residual
    rep.residual = ls.residual / fn;
    if (!(rep.residual <= 1e-6))
      throw SolverFailureError("minimum-norm contact force selection failed");
  }
  rep.feasible = rep.residual <= 1e-6;
  return rep;
}

bool explosion_check(const Assembly& asm_, const std::vector<ContactPair>& pairs) {
  const double eps = 1e-9 * asm_.r_i;
  const auto radial = [](const Vec3& c) {
    const double r = std::hypot(c.x(), c.y());
    if (r < 1e-12) return Vec3(0, 0, 0);
    return Vec3(c.x() / r, c.y() / r, 0.0);
  };
  for (const ContactPair& p : pairs) {
    const Body& bm = asm_.bodies[p.master_body];
    const Body& bs = asm_.bodies[p.slave_body];
    if (bm.is_frame || bs.is_frame) continue;
    const Vec3 rel = radial(bs.centroid) - radial(bm.centroid);
    if (p.normal.dot(rel) < -eps) return false;
  }
  return true;
}

}  // namespace tia
