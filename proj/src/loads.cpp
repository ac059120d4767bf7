#include "tia/loads.hpp"

#include <cmath>

#include "tia/errors.hpp"

namespace tia {

const char* to_string(Bvp bvp) {
  switch (bvp) {
    case Bvp::Pipe: return "pipe";
    case Bvp::Tunnel: return "tunnel";
    case Bvp::Pillar: return "pillar";
    case Bvp::Beam: return "beam";
    case Bvp::Shaft: return "shaft";
  }
  return "?";
}

Bvp bvp_from_string(const std::string& name) {
  if (name == "pipe") return Bvp::Pipe;
  if (name == "tunnel") return Bvp::Tunnel;
  if (name == "pillar") return Bvp::Pillar;
  if (name == "beam") return Bvp::Beam;
  if (name == "shaft") return Bvp::Shaft;
  throw Error("unknown BVP name: " + name);
}

int default_target_layer(int L) {
  if (L == 12) return 7;
  return (L + 1) / 2 + 1;
}

namespace {

void add_face_load(const Assembly& asm_, GeneralizedLoad& out, Index body, Index face,
                   const Vec3& force) {
  const Body& b = asm_.bodies[body];
  out.per_body[body].force += force;
  out.per_body[body].torque += (b.mesh.face_centroid(face) - b.centroid).cross(force);
}

}  // namespace

GeneralizedLoad assemble_load(const Assembly& asm_, const LoadCase& load) {
  GeneralizedLoad out;
  out.per_body.resize(asm_.bodies.size());

  const int target =
      load.target_layer > 0 ? load.target_layer : default_target_layer(asm_.L);
  if (target < 1 || target > asm_.L)
    throw TaggingError("load target layer out of range: " + std::to_string(target));
  const Index target0 = target - 1;

  Index loaded_faces = 0;
  for (const Body& b : asm_.bodies) {
    const Index nf = static_cast<Index>(b.mesh.surface_faces.size());
    for (Index f = 0; f < nf; ++f) {
      const FaceTag tag = b.mesh.face_tags[f];
      Vec3 dir = Vec3::Zero();
      double magnitude = 0.0;

      switch (load.kind) {
        case Bvp::Pipe:
          if (b.is_frame || tag != FaceTag::Inner) continue;
          dir = -b.mesh.face_normal(f);  // pressure pushes into the wall
          magnitude = load.p0 * b.mesh.face_area(f);
          break;
        case Bvp::Tunnel:
          if (b.is_frame || tag != FaceTag::Outer) continue;
          dir = -b.mesh.face_normal(f);
          magnitude = load.p0 * b.mesh.face_area(f);
          break;
        case Bvp::Pillar: {
          if (load.pillar_variant == PillarVariant::TopInteriorLayer) {
            if (b.is_frame || b.layer != asm_.L - 1 || tag != FaceTag::Top) continue;
          } else {
            if (b.layer != asm_.L || tag != FaceTag::FrameExposed) continue;
          }
          const Vec3 n = b.mesh.face_normal(f);
          dir = -Vec3::UnitZ();
          magnitude = load.p0 * b.mesh.face_area(f) * std::abs(n.z());  // projected
          break;
        }
        case Bvp::Beam:
          if (b.is_frame || b.layer != target0 || b.slot != 0 || tag != FaceTag::Outer)
            continue;
          dir = -b.mesh.face_normal(f);
          magnitude = load.p0 * b.mesh.face_area(f);
          break;
        case Bvp::Shaft: {
          if (b.is_frame || b.layer != target0 || tag != FaceTag::Outer) continue;
          const Vec3 c = b.mesh.face_centroid(f);
          const double phi = std::atan2(c.y(), c.x());
          dir = Vec3(-std::sin(phi), std::cos(phi), 0.0);  // counter-clockwise
          magnitude = load.p0 * b.mesh.face_area(f);
          break;
        }
      }
      add_face_load(asm_, out, b.id, f, magnitude * dir);
      ++loaded_faces;
    }
  }
  if (loaded_faces == 0)
    throw TaggingError(std::string("load case '") + to_string(load.kind) +
                       "' found no faces to load");

  if (load.gravity) {
    for (const Body& b : asm_.bodies) {
      if (b.is_frame) continue;
      out.per_body[b.id].force += Vec3(0, 0, -load.rho * b.mesh.volume() * load.g);
    }
  }
  return out;
}

VecX to_free_vector(const GeneralizedLoad& load, const ContactJacobian& jac) {
  VecX f = VecX::Zero(6 * jac.n_free_bodies);
  for (size_t b = 0; b < load.per_body.size(); ++b) {
    const Index off = jac.body_dof_offset[b];
    if (off < 0) continue;
    f.segment<3>(off) = load.per_body[b].force;
    f.segment<3>(off + 3) = load.per_body[b].torque;
  }
  return f;
}

std::vector<bool> free_mask_for(const Assembly& asm_, const LoadCase& load) {
  std::vector<bool> mask(asm_.bodies.size());
  const bool release_top = load.kind == Bvp::Pillar &&
                           load.pillar_variant == PillarVariant::ReleasedTopFrame;
  for (size_t i = 0; i < asm_.bodies.size(); ++i) {
    const Body& b = asm_.bodies[i];
    mask[i] = !b.is_frame || (release_top && b.layer == asm_.L);
  }
  return mask;
}

}  // namespace tia
