#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "tia/geometry.hpp"
#include "tia/types.hpp"

namespace tia {

/// Matched pair of opposing surface faces at the reference configuration.
struct ContactPair {
  Index master_body = 0;  ///< m < s
  Index slave_body = 0;
  Index master_face = 0;
  Index slave_face = 0;
  Vec3 normal = Vec3::UnitZ();  ///< unit, from master body toward slave body
  double area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec3 lever_m = Vec3::Zero();  ///< centroid - master body centroid
  Vec3 lever_s = Vec3::Zero();  ///< centroid - slave body centroid
};

/// Rodrigues closed form of exp([theta]x).
Mat3 rotation(const Vec3& theta);

/// Rigid-body generalized coordinates (translation of the centroid
/// reference point plus rotation vector).
struct BodyCoords {
  Vec3 translation = Vec3::Zero();
  Vec3 rotation = Vec3::Zero();
};

/// Signed normal separation of a pair at configuration q (one entry per
/// body; frame bodies are expected to stay at zero coordinates).
double gap(const Assembly& asm_, const ContactPair& pair,
           const std::vector<BodyCoords>& q);

/// Face-centroid matching over the whole assembly. Conforming meshes make
/// matches exact up to round-off; `tol` is the centroid distance bound.
/// Pairs between two frame bodies are dropped. Throws PairingError when a
/// face has two candidate partners.
std::vector<ContactPair> detect_contacts(const Assembly& asm_, double tol);

/// Global gap-variation matrix: one sparse column per pair carrying
/// (-n, -(p_m x n), +n, +(p_s x n)) in the two body slots; rows of
/// non-free (frame) bodies removed.
struct ContactJacobian {
  Eigen::SparseMatrix<double> G;        ///< 6*n_free x n_pairs
  std::vector<Index> body_dof_offset;   ///< per body: row offset, -1 if fixed
  Index n_free_bodies = 0;
};

ContactJacobian assemble_jacobian(const Assembly& asm_,
                                  const std::vector<ContactPair>& pairs);

/// Same with an explicit free mask (used when a frame layer is released).
ContactJacobian assemble_jacobian(const Assembly& asm_,
                                  const std::vector<ContactPair>& pairs,
                                  const std::vector<bool>& body_is_free);

}  // namespace tia
