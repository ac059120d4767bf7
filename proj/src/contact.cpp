#include "tia/contact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "tia/errors.hpp"

namespace tia {

Mat3 rotation(const Vec3& theta) {
  const double angle = theta.norm();
  Mat3 K;
  K << 0, -theta.z(), theta.y(), theta.z(), 0, -theta.x(), -theta.y(), theta.x(), 0;
  if (angle < 1e-12) return Mat3::Identity() + K + 0.5 * K * K;
  const double s = std::sin(angle) / angle;
  const double c = (1.0 - std::cos(angle)) / (angle * angle);
  return Mat3::Identity() + s * K + c * (K * K);
}

double gap(const Assembly& asm_, const ContactPair& pair,
           const std::vector<BodyCoords>& q) {
  const Body& bm = asm_.bodies[pair.master_body];
  const Body& bs = asm_.bodies[pair.slave_body];
  const BodyCoords& qm = q[pair.master_body];
  const BodyCoords& qs = q[pair.slave_body];
  const Vec3 rm = bm.centroid + qm.translation + rotation(qm.rotation) * pair.lever_m;
  const Vec3 rs = bs.centroid + qs.translation + rotation(qs.rotation) * pair.lever_s;
  return pair.normal.dot(rs - rm);
}

namespace {

struct FaceRef {
  Index body;
  Index face;
  Vec3 centroid;
  Vec3 normal;
  double area;
};

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    const std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ull ^
                            static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4full ^
                            static_cast<std::uint64_t>(k.z) * 0x165667b19e3779f9ull;
    return static_cast<size_t>(h);
  }
};

}  // namespace

std::vector<ContactPair> detect_contacts(const Assembly& asm_, double tol) {
  std::vector<FaceRef> faces;
  for (const auto& body : asm_.bodies) {
    const Index nf = static_cast<Index>(body.mesh.surface_faces.size());
    for (Index f = 0; f < nf; ++f)
      faces.push_back({body.id, f, body.mesh.face_centroid(f), body.mesh.face_normal(f),
                       body.mesh.face_area(f)});
  }

  const double cell = std::max(tol, 1e-12);
  std::unordered_map<CellKey, std::vector<Index>, CellKeyHash> grid;
  grid.reserve(faces.size() * 2);
  const auto key_of = [cell](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / cell)),
                   static_cast<std::int64_t>(std::floor(p.y() / cell)),
                   static_cast<std::int64_t>(std::floor(p.z() / cell))};
  };
  for (Index i = 0; i < static_cast<Index>(faces.size()); ++i)
    grid[key_of(faces[i].centroid)].push_back(i);

  const double cos_tol = -std::cos(1e-6);
  std::vector<ContactPair> pairs;
  std::vector<Index> partner(faces.size(), -1);

  for (Index i = 0; i < static_cast<Index>(faces.size()); ++i) {
    const FaceRef& fi = faces[i];
    const CellKey base = key_of(fi.centroid);
    Index found = -1;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find(CellKey{base.x + dx, base.y + dy, base.z + dz});
          if (it == grid.end()) continue;
          for (Index j : it->second) {
            if (j == i) continue;
            const FaceRef& fj = faces[j];
            if (fj.body == fi.body) continue;
            if ((fj.centroid - fi.centroid).norm() > tol) continue;
            if (fi.normal.dot(fj.normal) > cos_tol) continue;
            if (found >= 0 && found != j)
              throw PairingError("ambiguous contact pairing: body " +
                                 std::to_string(fi.body) + " face " +
                                 std::to_string(fi.face) + " matches faces on bodies " +
                                 std::to_string(faces[found].body) + " and " +
                                 std::to_string(fj.body));
            found = j;
          }
        }
    if (found < 0) continue;
    if (partner[i] >= 0 && partner[i] != found)
      throw PairingError("contact pairing is not one-to-one at body " +
                         std::to_string(fi.body) + " face " + std::to_string(fi.face));
    partner[i] = found;
    partner[found] = i;

    const FaceRef& fj = faces[found];
    if (fi.body > fj.body) continue;  // emit once, master = lower body id
    const Body& bm = asm_.bodies[fi.body];
    const Body& bs = asm_.bodies[fj.body];
    if (bm.is_frame && bs.is_frame) continue;  // both fixed: no constraint

    ContactPair pair;
    pair.master_body = fi.body;
    pair.slave_body = fj.body;
    pair.master_face = fi.face;
    pair.slave_face = fj.face;
    pair.normal = fi.normal;
    pair.area = fi.area;
    pair.centroid = 0.5 * (fi.centroid + fj.centroid);
    pair.lever_m = pair.centroid - bm.centroid;
    pair.lever_s = pair.centroid - bs.centroid;
    pairs.push_back(pair);
  }

  std::sort(pairs.begin(), pairs.end(), [](const ContactPair& a, const ContactPair& b) {
    return std::tie(a.master_body, a.slave_body, a.master_face, a.slave_face) <
           std::tie(b.master_body, b.slave_body, b.master_face, b.slave_face);
  });
  return pairs;
}

ContactJacobian assemble_jacobian(const Assembly& asm_,
                                  const std::vector<ContactPair>& pairs) {
  std::vector<bool> free_mask(asm_.bodies.size());
  for (size_t i = 0; i < asm_.bodies.size(); ++i) free_mask[i] = !asm_.bodies[i].is_frame;
  return assemble_jacobian(asm_, pairs, free_mask);
}

ContactJacobian assemble_jacobian(const Assembly& asm_,
                                  const std::vector<ContactPair>& pairs,
                                  const std::vector<bool>& body_is_free) {
  ContactJacobian jac;
  jac.body_dof_offset.assign(asm_.bodies.size(), -1);
  Index offset = 0;
  for (size_t i = 0; i < asm_.bodies.size(); ++i) {
    if (body_is_free[i]) {
      jac.body_dof_offset[i] = offset;
      offset += 6;
    }
  }
  jac.n_free_bodies = offset / 6;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(pairs.size() * 12);
  for (Index col = 0; col < static_cast<Index>(pairs.size()); ++col) {
    const ContactPair& p = pairs[col];
    const Index om = jac.body_dof_offset[p.master_body];
    const Index os = jac.body_dof_offset[p.slave_body];
    if (om >= 0) {
      const Vec3 tm = p.lever_m.cross(p.normal);
      for (int k = 0; k < 3; ++k) {
        trips.emplace_back(om + k, col, -p.normal[k]);
        trips.emplace_back(om + 3 + k, col, -tm[k]);
      }
    }
    if (os >= 0) {
      const Vec3 ts = p.lever_s.cross(p.normal);
      for (int k = 0; k < 3; ++k) {
        trips.emplace_back(os + k, col, p.normal[k]);
        trips.emplace_back(os + 3 + k, col, ts[k]);
      }
    }
  }
  jac.G.resize(offset, static_cast<Index>(pairs.size()));
  jac.G.setFromTriplets(trips.begin(), trips.end());
  jac.G.makeCompressed();
  return jac;
}

}  // namespace tia
