#include <doctest.h>

#include <Eigen/SparseCore>
#include <random>

#include "oracles.hpp"
#include "tia/qp.hpp"
#include "tia/simplex.hpp"
#include "tia/statics.hpp"

using namespace tia;

namespace {

Eigen::SparseMatrix<double> to_sparse(const MatX& dense) {
  Eigen::SparseMatrix<double> s(dense.rows(), dense.cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (Index j = 0; j < dense.cols(); ++j)
    for (Index i = 0; i < dense.rows(); ++i)
      if (dense(i, j) != 0.0) trips.emplace_back(i, j, dense(i, j));
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

MatX random_matrix(std::mt19937& rng, int m, int nc) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> zero(0.0, 1.0);
  MatX G(m, nc);
  for (int j = 0; j < nc; ++j)
    for (int i = 0; i < m; ++i) G(i, j) = zero(rng) < 0.35 ? 0.0 : u(rng);
  return G;
}

double oracle_z_star(const MatX& G) {
  const double lp = oracle::z_star_enumeration(G);
  if (lp > 0.0) return lp;
  const Index nul = oracle::nullity(G);
  return nul > 0 ? static_cast<double>(nul) : 0.0;
}

}  // namespace

TEST_CASE("simplex: tiny known problems") {
  SUBCASE("bounded optimum with a slack") {
    // min -x1 - x2  s.t. x1 + x2 + s = 1
    LpProblem lp;
    MatX A(1, 3);
    A << 1, 1, 1;
    lp.A = to_sparse(A);
    lp.b = VecX::Constant(1, 1.0);
    lp.c = (VecX(3) << -1, -1, 0).finished();
    const LpResult r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-1.0).epsilon(1e-10));
  }
  SUBCASE("infeasible") {
    // x1 = -1, x1 >= 0
    LpProblem lp;
    MatX A(1, 1);
    A << 1;
    lp.A = to_sparse(A);
    lp.b = VecX::Constant(1, -1.0);
    lp.c = VecX::Zero(1);
    CHECK(lp_solve(lp).status == LpStatus::Infeasible);
  }
  SUBCASE("unbounded") {
    // min -x1 s.t. x1 - x2 = 0
    LpProblem lp;
    MatX A(1, 2);
    A << 1, -1;
    lp.A = to_sparse(A);
    lp.b = VecX::Zero(1);
    lp.c = (VecX(2) << -1, 0).finished();
    CHECK(lp_solve(lp).status == LpStatus::Unbounded);
  }
  SUBCASE("degenerate equality with redundant row") {
    // duplicated constraint row: rank-deficient but feasible
    LpProblem lp;
    MatX A(2, 2);
    A << 1, 1, 1, 1;
    lp.A = to_sparse(A);
    lp.b = (VecX(2) << 1, 1).finished();
    lp.c = (VecX(2) << 1, 2).finished();
    const LpResult r = lp_solve(lp);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("nnls: small dense checks against the enumeration oracle") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 4);
    const int n = 3 + static_cast<int>(rng() % 6);
    const MatX A = random_matrix(rng, m, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    VecX b(m);
    for (int i = 0; i < m; ++i) b[i] = u(rng);

    const NnlsResult mine = nnls_solve(to_sparse(A), b);
    const VecX x_oracle = oracle::nnls_enumeration(A, b);
    CHECK(mine.converged);
    CHECK(mine.residual ==
          doctest::Approx((A * x_oracle - b).norm()).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("oracle suite: LP values and QP minimizers on micro instances") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;

  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 4);   // 3..6 DOFs
    const int nc = 3 + static_cast<int>(rng() % 8);  // 3..10 contacts
    const MatX G = random_matrix(rng, m, nc);
    const auto Gs = to_sparse(G);

    VecX f(m);
    for (int i = 0; i < m; ++i) f[i] = u(rng);

    // z*
    const KinematicFeasibility kf = kinematic_feasibility(Gs);
    CHECK(kf.z_star == doctest::Approx(oracle_z_star(G)).epsilon(1e-8).scale(1.0));

    // gamma_max / gamma_min with mechanism certificates
    VecX dq;
    const double gmax = mechanism_activation(Gs, f, &dq);
    const double gmax_oracle = std::max(0.0, oracle::max_work_enumeration(G, f));
    CHECK(gmax == doctest::Approx(gmax_oracle).epsilon(1e-8).scale(1.0));
    if (dq.size() > 0) {
      CHECK((G.transpose() * dq).minCoeff() > -1e-7);
      CHECK(dq.lpNorm<1>() < 1.0 + 1e-7);
      CHECK(f.dot(dq) == doctest::Approx(gmax).epsilon(1e-7).scale(1.0));
    }

    const double gmin = mechanism_suppression(Gs, f);
    const double gmin_oracle = std::min(0.0, -oracle::max_work_enumeration(G, -f));
    CHECK(gmin == doctest::Approx(gmin_oracle).epsilon(1e-8).scale(1.0));

    // QP: half the trials feasible by construction
    VecX rhs;
    if (trial % 2 == 0) {
      VecX lam_true(nc);
      for (int p = 0; p < nc; ++p) lam_true[p] = std::abs(u(rng));
      rhs = -(G * lam_true);
    } else {
      rhs = f;
    }
    const auto [lam_oracle, feasible_oracle] = oracle::min_norm_qp_enumeration(G, rhs);
    const MinNormQpResult qp = min_norm_contact_qp(Gs, rhs);
    const double scale = std::max(1.0, rhs.norm());
    if (feasible_oracle) {
      CHECK(qp.residual <= 1e-6 * scale);
      CHECK((qp.lambda - lam_oracle).lpNorm<Eigen::Infinity>() < 1e-6 * scale);
    } else {
      // equality unattainable: the two-phase path reports it via NNLS
      const NnlsResult ls = nnls_solve(Gs, -rhs);
      const VecX x_oracle = oracle::nnls_enumeration(G, -rhs);
      CHECK(ls.residual ==
            doctest::Approx((G * x_oracle + rhs).norm()).epsilon(1e-7).scale(1.0));
    }
    ++checked;
  }
  CHECK(checked >= 25);
}

TEST_CASE("caged box: cone is trivial") {
  // columns +-e_i for each of 6 dofs
  MatX G(6, 12);
  G.setZero();
  for (int i = 0; i < 6; ++i) {
    G(i, 2 * i) = 1.0;
    G(i, 2 * i + 1) = -1.0;
  }
  const KinematicFeasibility kf = kinematic_feasibility(to_sparse(G));
  CHECK(kf.z_star == 0.0);
  CHECK(kf.nullity == 0);
}
