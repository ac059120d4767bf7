#pragma once

#include <optional>
#include <string>

#include "tia/contact.hpp"
#include "tia/types.hpp"

namespace tia {

enum class Classification { Locked, Activated, Neutral, Suppressed };

const char* to_string(Classification c);

/// Outcome of the kinematic feasibility test.
struct KinematicReport {
  double z_star = 0.0;
  std::optional<double> gamma_max;  ///< present iff z_star > 0
  std::optional<double> gamma_min;
  std::optional<VecX> mechanism;  ///< an admissible direction when z_star > 0
  Classification classification = Classification::Locked;
  Index nullity = 0;  ///< dimension of the gap-preserving (sliding) subspace
};

struct EquilibriumReport {
  VecX lambdas;
  double residual = 0.0;  ///< ||G lambda + f|| / ||f||
  bool feasible = false;
};

struct KinematicFeasibility {
  double z_star = 0.0;
  std::optional<VecX> mechanism;
  Index nullity = 0;
};

/// Auxiliary LP deciding whether the admissible cone {dq : G'dq >= 0}
/// contains a nonzero direction, so z_star = 0 exactly when the cone is
/// {0}. When only gap-preserving (sliding) directions exist the LP value
/// vanishes and z_star reports the sliding-subspace dimension instead.
KinematicFeasibility kinematic_feasibility(const Eigen::SparseMatrix<double>& G);

/// max f'dq over {G'dq >= 0, ||dq||_1 <= 1}; always >= 0.
double mechanism_activation(const Eigen::SparseMatrix<double>& G, const VecX& f_ext,
                            VecX* argmax = nullptr);

/// min f'dq over the same set; always <= 0.
double mechanism_suppression(const Eigen::SparseMatrix<double>& G, const VecX& f_ext,
                             VecX* argmin = nullptr);

/// Scale-aware zero threshold for the work rates: 1e-9 * ||f_ext||.
Classification classify(double z_star, std::optional<double> gamma_max,
                        std::optional<double> gamma_min, double f_ext_norm);

/// Full kinematic pipeline: feasibility LP, then (if a mechanism exists)
/// the activation and suppression LPs.
KinematicReport analyze_kinematics(const Eigen::SparseMatrix<double>& G,
                                   const VecX& f_ext);

/// Two-phase contact force solve for locked/suppressed states:
/// feasibility by nonnegative least squares, then the minimum-norm
/// multiplier selection. Throws ContractViolationError for activated
/// or neutral classifications.
EquilibriumReport solve_contact_forces(const Eigen::SparseMatrix<double>& G,
                                       const VecX& f_ext, Classification classification);

/// Simultaneous radially-outward translation test over free-free pairs;
/// true when no such pair's gap rate drops below -1e-9 * r_i.
bool explosion_check(const Assembly& asm_, const std::vector<ContactPair>& pairs);

}  // namespace tia
