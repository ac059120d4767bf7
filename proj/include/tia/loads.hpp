#pragma once

#include <string>
#include <vector>

#include "tia/contact.hpp"
#include "tia/geometry.hpp"
#include "tia/types.hpp"

namespace tia {

enum class Bvp { Pipe, Tunnel, Pillar, Beam, Shaft };

const char* to_string(Bvp bvp);
Bvp bvp_from_string(const std::string& name);

/// The pillar load nominally acts on the fixed top frame, which cannot
/// transmit anything in a rigid-body model. Two realizations:
///  - TopInteriorLayer (default): press down on the topmost interior
///    layer's upward faces;
///  - ReleasedTopFrame: free the top frame bodies and load their flat
///    exposed faces.
enum class PillarVariant { TopInteriorLayer, ReleasedTopFrame };

struct LoadCase {
  Bvp kind = Bvp::Pipe;
  double p0 = 0.01;      ///< MPa
  int target_layer = 0;  ///< 1-based beam/shaft layer; 0 = default (7 when L = 12)
  PillarVariant pillar_variant = PillarVariant::TopInteriorLayer;
  bool gravity = false;
  double rho = 2400e-12;  ///< mass density per mm^3 (consistent units: tonne/mm^3)
  double g = 9810.0;      ///< mm/s^2
};

struct BodyLoad {
  Vec3 force = Vec3::Zero();   ///< N
  Vec3 torque = Vec3::Zero();  ///< N mm, about the body centroid
};

struct GeneralizedLoad {
  std::vector<BodyLoad> per_body;
};

/// "we select the seventh layer" for L = 12; ceil(L/2)+1 otherwise.
int default_target_layer(int L);

/// Surface tractions integrated over tagged faces, per §boundary cases:
/// pipe = pressurize inner faces, tunnel = outer, pillar = axial on top,
/// beam = one block's outer faces, shaft = tangential ring load.
GeneralizedLoad assemble_load(const Assembly& asm_, const LoadCase& load);

/// Stack per-body loads into the free-DOF vector matching a Jacobian.
VecX to_free_vector(const GeneralizedLoad& load, const ContactJacobian& jac);

/// Body freedom mask for a load case (top frame released for the pillar
/// ReleasedTopFrame variant; frames fixed otherwise).
std::vector<bool> free_mask_for(const Assembly& asm_, const LoadCase& load);

}  // namespace tia
