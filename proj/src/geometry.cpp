#include "tia/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tia {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w;
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

// Bilinear patch over a quad a->b->c->d; corners at (u,w) in {0,1}^2.
struct BilinearFace {
  Vec3 a, b, c, d;

  Vec3 at(double u, double w) const {
    return a * ((1 - u) * (1 - w)) + b * (u * (1 - w)) + c * (u * w) + d * ((1 - u) * w);
  }
  Vec3 du(double u, double w) const {
    (void)u;
    return (b - a) * (1 - w) + (c - d) * w;
  }
  Vec3 dw(double u, double w) const {
    (void)w;
    return (d - a) * (1 - u) + (c - b) * u;
  }
};

constexpr std::array<std::array<int, 4>, 6> kHexFaces = {{
    {0, 3, 2, 1},
    {4, 5, 6, 7},
    {0, 1, 5, 4},
    {1, 2, 6, 5},
    {2, 3, 7, 6},
    {3, 0, 4, 7},
}};

const std::array<double, 2> kGauss = {0.5 - 0.5 / std::numbers::sqrt3,
                                      0.5 + 0.5 / std::numbers::sqrt3};

// Exact volume and first moment of a trilinear hexahedron by the
// divergence theorem over its six bilinear faces (2x2 Gauss is exact
// for the resulting bicubic integrands).
void hex_volume_moment(const std::array<Vec3, 8>& v, double& vol, Vec3& moment) {
  vol = 0.0;
  moment.setZero();
  for (const auto& fidx : kHexFaces) {
    BilinearFace f{v[fidx[0]], v[fidx[1]], v[fidx[2]], v[fidx[3]]};
    for (double gu : kGauss) {
      for (double gw : kGauss) {
        const Vec3 p = f.at(gu, gw);
        const Vec3 nrm = f.du(gu, gw).cross(f.dw(gu, gw));
        vol += 0.25 * p.dot(nrm) / 3.0;
        moment += 0.25 * 0.5 * p.cwiseProduct(p).cwiseProduct(nrm);
      }
    }
  }
}

}  // namespace

void SineBlockParams::validate() const {
  if (!(h > 0.0) || !(t > 0.0) || !(r_i > 0.0))
    throw InvalidParamsError("sine block: h, t, r_i must be positive");
  if (!(a >= 0.0)) throw InvalidParamsError("sine block: amplitude must be >= 0");
  if (!(a < 0.5 * h))
    throw InvalidParamsError("sine block: amplitude must satisfy a < h/2");
  if (!(f > 0.0)) throw InvalidParamsError("sine block: frequency must be positive");
  if (n < 2) throw InvalidParamsError("sine block: n must be >= 2");
  if (L < 1) throw InvalidParamsError("sine block: L must be >= 1");
  if (!near_integer(2.0 * f * n, 1e-9))
    throw InvalidParamsError(
        "sine block: 2*f*n must be an integer so the layer surface closes "
        "around the tube");
}

void HexBlockParams::validate() const {
  if (!(r_i > 0.0) || !(r_o > r_i))
    throw InvalidParamsError("hex block: need r_o > r_i > 0");
  if (n < 2) throw InvalidParamsError("hex block: n must be >= 2");
  if (L < 1) throw InvalidParamsError("hex block: L must be >= 1");
}

MeshResolution MeshResolution::defaults_for(const SineBlockParams& p) {
  MeshResolution res;
  res.div_x = static_cast<int>(std::lround(24.0 * p.f));
  res.div_y = 4;
  res.div_z = 24;
  return res;
}

MeshResolution MeshResolution::defaults_for(const HexBlockParams&) {
  return MeshResolution{24, 4, 24};
}

const char* to_string(FaceTag tag) {
  switch (tag) {
    case FaceTag::Inner: return "inner";
    case FaceTag::Outer: return "outer";
    case FaceTag::Top: return "top";
    case FaceTag::Bottom: return "bottom";
    case FaceTag::Lateral: return "lateral";
    case FaceTag::FrameExposed: return "frame_exposed";
  }
  return "?";
}

double BlockMesh::cell_volume(Index c) const {
  std::array<Vec3, 8> v;
  for (int i = 0; i < 8; ++i) v[i] = vertices[hex_cells[c][i]];
  double vol;
  Vec3 m;
  hex_volume_moment(v, vol, m);
  return vol;
}

Vec3 BlockMesh::cell_centroid(Index c) const {
  std::array<Vec3, 8> v;
  for (int i = 0; i < 8; ++i) v[i] = vertices[hex_cells[c][i]];
  double vol;
  Vec3 m;
  hex_volume_moment(v, vol, m);
  return m / vol;
}

double BlockMesh::volume() const {
  double total = 0.0;
  for (Index c = 0; c < static_cast<Index>(hex_cells.size()); ++c)
    total += cell_volume(c);
  return total;
}

Vec3 BlockMesh::volume_centroid() const {
  double total = 0.0;
  Vec3 m = Vec3::Zero();
  std::array<Vec3, 8> v;
  for (const auto& cell : hex_cells) {
    for (int i = 0; i < 8; ++i) v[i] = vertices[cell[i]];
    double vol;
    Vec3 mm;
    hex_volume_moment(v, vol, mm);
    total += vol;
    m += mm;
  }
  return m / total;
}

double BlockMesh::face_area(Index f) const {
  const auto& q = surface_faces[f];
  const Vec3 &p0 = vertices[q[0]], &p1 = vertices[q[1]], &p2 = vertices[q[2]],
             &p3 = vertices[q[3]];
  const Vec3 n1 = 0.5 * (p1 - p0).cross(p2 - p0);
  const Vec3 n2 = 0.5 * (p2 - p0).cross(p3 - p0);
  return n1.norm() + n2.norm();
}

Vec3 BlockMesh::face_normal(Index f) const {
  const auto& q = surface_faces[f];
  const Vec3 &p0 = vertices[q[0]], &p1 = vertices[q[1]], &p2 = vertices[q[2]],
             &p3 = vertices[q[3]];
  const Vec3 n1 = 0.5 * (p1 - p0).cross(p2 - p0);
  const Vec3 n2 = 0.5 * (p2 - p0).cross(p3 - p0);
  return (n1 + n2).normalized();
}

Vec3 BlockMesh::face_centroid(Index f) const {
  const auto& q = surface_faces[f];
  const Vec3 &p0 = vertices[q[0]], &p1 = vertices[q[1]], &p2 = vertices[q[2]],
             &p3 = vertices[q[3]];
  const double a1 = 0.5 * (p1 - p0).cross(p2 - p0).norm();
  const double a2 = 0.5 * (p2 - p0).cross(p3 - p0).norm();
  const Vec3 c1 = (p0 + p1 + p2) / 3.0;
  const Vec3 c2 = (p0 + p2 + p3) / 3.0;
  return (c1 * a1 + c2 * a2) / (a1 + a2);
}

Index Assembly::free_body_count() const {
  Index k = 0;
  for (const auto& b : bodies)
    if (!b.is_frame) ++k;
  return k;
}

double block_length(int n, double r_i) {
  return r_i * std::sqrt(2.0 * (1.0 - std::cos(kPi / n)));
}

double sine_offset(double x, double y, const SineBlockParams& p) {
  const double l = block_length(p.n, p.r_i);
  return (y / p.t) * p.a * std::sin(2.0 * kPi * p.f * (x / l) + p.s * kPi);
}

namespace detail {

BlockMesh build_structured_mesh(int nx, int ny, int nz, const VertexFn& pos,
                                const std::array<FaceTag, 6>& side_tags) {
  // Handedness check at the grid center; flip the j axis if the
  // parameterization is left-handed so cells stay positive and
  // boundary quads wind outward.
  {
    const int ic = nx / 2, jc = ny / 2, kc = nz / 2;
    const Vec3 o = pos(ic, jc, kc);
    const Vec3 d1 = pos(ic + 1, jc, kc) - o;
    const Vec3 d2 = pos(ic, jc + 1, kc) - o;
    const Vec3 d3 = pos(ic, jc, kc + 1) - o;
    if (d1.cross(d2).dot(d3) < 0.0) {
      VertexFn flipped = [&pos, ny](int i, int j, int k) { return pos(i, ny - j, k); };
      std::array<FaceTag, 6> tags = side_tags;
      std::swap(tags[2], tags[3]);
      // Re-detection inside the recursive call is a no-op; guard against
      // degenerate parameterizations by not recursing twice.
      const int icc = nx / 2, jcc = ny / 2, kcc = nz / 2;
      const Vec3 oo = flipped(icc, jcc, kcc);
      const Vec3 e1 = flipped(icc + 1, jcc, kcc) - oo;
      const Vec3 e2 = flipped(icc, jcc + 1, kcc) - oo;
      const Vec3 e3 = flipped(icc, jcc, kcc + 1) - oo;
      if (e1.cross(e2).dot(e3) < 0.0)
        throw Error("structured mesh: degenerate parameterization");
      return build_structured_mesh(nx, ny, nz, flipped, tags);
    }
  }

  BlockMesh mesh;
  const auto vid = [nx, ny](int i, int j, int k) {
    return static_cast<Index>(i + (nx + 1) * (j + (ny + 1) * k));
  };
  mesh.vertices.resize(static_cast<size_t>((nx + 1) * (ny + 1) * (nz + 1)));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) mesh.vertices[vid(i, j, k)] = pos(i, j, k);

  mesh.hex_cells.reserve(static_cast<size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        mesh.hex_cells.push_back({vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k),
                                  vid(i, j + 1, k), vid(i, j, k + 1), vid(i + 1, j, k + 1),
                                  vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)});

  const auto add_face = [&mesh](Index a, Index b, Index c, Index d, FaceTag tag) {
    mesh.surface_faces.push_back({a, b, c, d});
    mesh.face_tags.push_back(tag);
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      add_face(vid(0, j, k), vid(0, j, k + 1), vid(0, j + 1, k + 1), vid(0, j + 1, k),
               side_tags[0]);
      add_face(vid(nx, j, k), vid(nx, j + 1, k), vid(nx, j + 1, k + 1), vid(nx, j, k + 1),
               side_tags[1]);
    }
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      add_face(vid(i, 0, k), vid(i + 1, 0, k), vid(i + 1, 0, k + 1), vid(i, 0, k + 1),
               side_tags[2]);
      add_face(vid(i, ny, k), vid(i, ny, k + 1), vid(i + 1, ny, k + 1), vid(i + 1, ny, k),
               side_tags[3]);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      add_face(vid(i, j, 0), vid(i, j + 1, 0), vid(i + 1, j + 1, 0), vid(i + 1, j, 0),
               side_tags[4]);
      add_face(vid(i, j, nz), vid(i + 1, j, nz), vid(i + 1, j + 1, nz), vid(i, j + 1, nz),
               side_tags[5]);
    }
  return mesh;
}

double sine_surface_offset(const SineBlockParams& p, double phi, double r) {
  const double fn = p.f * p.n;
  const double taper = (r - p.r_i) / p.t;
  if (near_integer(fn, 1e-9)) {
    return taper * p.a * std::sin(std::round(fn) * phi + p.s * kPi);
  }
  // Half-integer wave count: the wave closes only with the seam pinned
  // to a zero crossing; the phase-shift parameter cannot act globally.
  return taper * p.a * std::sin(fn * wrap_2pi(phi));
}

}  // namespace detail

namespace {

void validate_resolution_common(const MeshResolution& res) {
  if (res.div_x < 1 || res.div_y < 1 || res.div_z < 1)
    throw InvalidResolutionError("mesh resolution: all subdivisions must be >= 1");
}

// Sine extrema must land on mesh lines: the grid step along the wave is
// 2*pi*f/div_x radians of phase, extrema are pi apart.
void validate_sine_resolution(const SineBlockParams& p, const MeshResolution& res) {
  validate_resolution_common(res);
  if (res.div_x % 2 != 0)
    throw InvalidResolutionError(
        "sine block: div_x must be even (half-block layer shift must fall on "
        "mesh lines)");
  const double cells_per_half_wave = res.div_x / (2.0 * p.f);
  if (!near_integer(cells_per_half_wave, 1e-9) || cells_per_half_wave < 1.0 - 1e-9)
    throw InvalidResolutionError(
        "sine block: div_x must be a positive integer multiple of 2*f");
  // Offset of the first extremum from the block edge, in grid cells; with the
  // half-wave spacing already on-grid, one aligned extremum aligns them all.
  const double dtheta = 2.0 * kPi * p.f / res.div_x;
  const double theta_edge = -kPi * p.f + p.s * kPi;  // phase at x = -l/2
  const double u = (kPi / 2.0 - theta_edge) / dtheta;
  if (std::abs(u - std::round(u)) > 1e-6)
    throw InvalidResolutionError(
        "sine block: sine extrema do not land on mesh lines for this div_x");
}

void validate_hex_resolution(const MeshResolution& res) {
  validate_resolution_common(res);
  if (res.div_x % 2 != 0 || res.div_z % 2 != 0)
    throw InvalidResolutionError(
        "hex block: div_x and div_z must be even (arc midpoints and layer "
        "interleave must fall on mesh lines)");
}

}  // namespace

BlockMesh build_planar_sine_block(const SineBlockParams& p, const MeshResolution& res,
                                  double extra_phase) {
  p.validate();
  validate_sine_resolution(p, res);
  const double l = block_length(p.n, p.r_i);
  const double dx = l / res.div_x;
  const double dy = p.t / res.div_y;
  const double dz = p.h / res.div_z;
  const auto pos = [&](int i, int j, int k) {
    const double x = -0.5 * l + i * dx;
    const double y = j * dy;
    const double w = (y / p.t) * p.a *
                     std::sin(2.0 * kPi * p.f * (x / l) + p.s * kPi + extra_phase);
    return Vec3(x, y, k * dz + w);
  };
  return detail::build_structured_mesh(
      res.div_x, res.div_y, res.div_z, pos,
      {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Inner, FaceTag::Outer,
       FaceTag::Bottom, FaceTag::Top});
}

BlockMesh map_to_cylinder(const BlockMesh& planar, const SineBlockParams& p,
                          double phi0) {
  const double l = block_length(p.n, p.r_i);
  BlockMesh out = planar;
  for (auto& v : out.vertices) {
    const double phi = (v.x() / l) * (2.0 * kPi / p.n) + phi0;
    const double r = p.r_i + v.y();
    v = Vec3(r * std::cos(phi), r * std::sin(phi), v.z());
  }
  // The map reverses handedness ((phi, r, z) is left-handed): mirror the
  // cells and rewind faces so orientations stay outward.
  for (auto& c : out.hex_cells)
    c = {c[4], c[5], c[6], c[7], c[0], c[1], c[2], c[3]};
  for (auto& f : out.surface_faces) std::swap(f[1], f[3]);
  return out;
}

namespace {

Body finish_body(BlockMesh&& mesh, Index id, Index layer, Index slot, bool is_frame) {
  Body b;
  b.id = id;
  b.mesh = std::move(mesh);
  b.centroid = b.mesh.volume_centroid();
  b.layer = layer;
  b.slot = slot;
  b.is_frame = is_frame;
  return b;
}

}  // namespace

Assembly build_assembly(const SineBlockParams& p, const MeshResolution& res) {
  p.validate();
  validate_sine_resolution(p, res);

  Assembly out;
  out.kind = AssemblyKind::Sine;
  out.n = p.n;
  out.L = p.L;
  out.r_i = p.r_i;
  out.r_o = p.r_i + p.t;
  out.layer_height = p.h;
  out.sine_params = p;

  const double span = 2.0 * kPi / p.n;
  const double dr = p.t / res.div_y;

  const auto cyl = [&](double phi, double r, double z) {
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
  };

  Index id = 0;
  // Interior layers: every second layer rotated by half a block.
  for (int layer = 0; layer < p.L; ++layer) {
    const double off = (layer % 2 == 0) ? 0.0 : 0.5;
    for (int slot = 0; slot < p.n; ++slot) {
      const double phi_l = (slot + off) * span;
      const double z0 = layer * p.h;
      const auto pos = [&](int i, int j, int k) {
        const double phi = phi_l + i * span / res.div_x;
        const double r = p.r_i + j * dr;
        const double w = detail::sine_surface_offset(p, phi, r);
        return cyl(phi, r, z0 + k * (p.h / res.div_z) + w);
      };
      out.bodies.push_back(finish_body(
          detail::build_structured_mesh(
              res.div_x, res.div_y, res.div_z, pos,
              {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Inner, FaceTag::Outer,
               FaceTag::Bottom, FaceTag::Top}),
          id++, layer, slot, false));
    }
  }
  // Frame layers: mating side keeps the wave, exposed side trimmed flat.
  for (int which = 0; which < 2; ++which) {
    const bool bottom = which == 0;
    const int layer = bottom ? -1 : p.L;
    const double off = (((layer % 2) + 2) % 2 == 0) ? 0.0 : 0.5;
    for (int slot = 0; slot < p.n; ++slot) {
      const double phi_l = (slot + off) * span;
      const auto pos = [&](int i, int j, int k) {
        const double phi = phi_l + i * span / res.div_x;
        const double r = p.r_i + j * dr;
        const double w = detail::sine_surface_offset(p, phi, r);
        double z;
        if (bottom) {
          // blend from the flat plane z = -h up to the wavy interface at z = w
          z = -p.h + (static_cast<double>(k) / res.div_z) * (p.h + w);
        } else {
          const double zb = p.L * p.h + w;  // wavy underside
          z = zb + (static_cast<double>(k) / res.div_z) * (p.h * (p.L + 1) - zb);
        }
        return cyl(phi, r, z);
      };
      out.bodies.push_back(finish_body(
          detail::build_structured_mesh(
              res.div_x, res.div_y, res.div_z, pos,
              {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Inner, FaceTag::Outer,
               bottom ? FaceTag::FrameExposed : FaceTag::Bottom,
               bottom ? FaceTag::Top : FaceTag::FrameExposed}),
          id++, layer, slot, true));
    }
  }
  return out;
}

namespace {

// Hexagon-with-arcs cross-section in local (u, zeta) coordinates.
// Edge length l_hex; zeta in [-sqrt(3)/2 l, sqrt(3)/2 l]. The right
// boundary is the block's own circumscribed arc, the left boundary the
// concave arcs of the two diagonal neighbours, so translated copies tile
// the strip.
struct HexSection {
  double l;

  double right(double zeta) const { return std::sqrt(std::max(0.0, l * l - zeta * zeta)); }
  double left(double zeta) const {
    const double half = 0.5 * std::numbers::sqrt3 * l;
    const double d = (zeta >= 0.0) ? (zeta - half) : (zeta + half);
    return -1.5 * l + std::sqrt(std::max(0.0, l * l - d * d));
  }
};

}  // namespace

Assembly build_hex_assembly(const HexBlockParams& p, const MeshResolution& res) {
  p.validate();
  validate_hex_resolution(res);

  const double t = p.r_o - p.r_i;
  const double l_hex = block_length(p.n, p.r_i) / 1.5;
  const double half_h = 0.5 * std::numbers::sqrt3 * l_hex;  // half flat-to-flat
  const double pitch_z = half_h;                            // axial layer pitch
  const double x_to_phi = (2.0 * kPi / p.n) / (3.0 * l_hex);
  const HexSection sec{l_hex};

  Assembly out;
  out.kind = AssemblyKind::Hexagon;
  out.n = p.n;
  out.L = p.L;
  out.r_i = p.r_i;
  out.r_o = p.r_o;
  out.layer_height = pitch_z;
  out.hex_params = p;

  const double dr = t / res.div_y;
  const auto cyl = [&](double x, double r, double z) {
    const double phi = x * x_to_phi;
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
  };

  Index id = 0;
  for (int layer = 0; layer < p.L; ++layer) {
    const int parity = layer % 2;
    for (int slot = 0; slot < p.n; ++slot) {
      const double xc = (parity * 1.5 + slot * 3.0) * l_hex;
      const double zc = layer * pitch_z;
      const auto pos = [&](int i, int j, int k) {
        const double zeta = -half_h + k * (2.0 * half_h / res.div_z);
        const double xl = sec.left(zeta), xr = sec.right(zeta);
        const double u = xl + (static_cast<double>(i) / res.div_x) * (xr - xl);
        return cyl(xc + u, p.r_i + j * dr, zc + zeta);
      };
      out.bodies.push_back(finish_body(
          detail::build_structured_mesh(
              res.div_x, res.div_y, res.div_z, pos,
              {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Inner, FaceTag::Outer,
               FaceTag::Bottom, FaceTag::Top}),
          id++, layer, slot, false));
    }
  }
  // Frames: half blocks trimmed flat at the assembly's end planes.
  for (int which = 0; which < 2; ++which) {
    const bool bottom = which == 0;
    const int layer = bottom ? -1 : p.L;
    const int parity = ((layer % 2) + 2) % 2;
    for (int slot = 0; slot < p.n; ++slot) {
      const double xc = (parity * 1.5 + slot * 3.0) * l_hex;
      const double zc = layer * pitch_z;
      const auto pos = [&](int i, int j, int k) {
        // bottom frame keeps the upper half of the section, top frame the lower half
        const double zeta = bottom ? (k * (half_h / res.div_z))
                                   : (-half_h + k * (half_h / res.div_z));
        const double xl = sec.left(zeta), xr = sec.right(zeta);
        const double u = xl + (static_cast<double>(i) / res.div_x) * (xr - xl);
        return cyl(xc + u, p.r_i + j * dr, zc + zeta);
      };
      out.bodies.push_back(finish_body(
          detail::build_structured_mesh(
              res.div_x, res.div_y, res.div_z / 2, pos,
              {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Inner, FaceTag::Outer,
               bottom ? FaceTag::FrameExposed : FaceTag::Bottom,
               bottom ? FaceTag::Top : FaceTag::FrameExposed}),
          id++, layer, slot, true));
    }
  }
  return out;
}

namespace {

double angle_of(const Vec3& v) { return std::atan2(v.y(), v.x()); }

// Smallest signed angular distance phi - base, wrapped to (-pi, pi].
double ang_diff(double phi, double base) {
  double d = std::fmod(phi - base, 2.0 * kPi);
  if (d > kPi) d -= 2.0 * kPi;
  if (d <= -kPi) d += 2.0 * kPi;
  return d;
}

}  // namespace

bool point_inside_body(const Assembly& asm_, const Body& body, const Vec3& point,
                       double tol) {
  const double r = std::hypot(point.x(), point.y());
  if (r <= asm_.r_i + tol || r >= asm_.r_o - tol) return false;
  const double phi = angle_of(point);
  const double span = 2.0 * kPi / asm_.n;
  const double off = ((((body.layer % 2) + 2) % 2) == 0) ? 0.0 : 0.5;

  if (asm_.kind == AssemblyKind::Sine) {
    const SineBlockParams& p = asm_.sine_params;
    const double phi_c = (body.slot + off + 0.5) * span;
    if (std::abs(ang_diff(phi, phi_c)) * r >= 0.5 * span * r - tol) return false;
    const double w = detail::sine_surface_offset(p, phi, r);
    double zlo, zhi;
    if (body.layer == -1) {
      zlo = -p.h;
      zhi = w;
    } else if (body.layer == asm_.L) {
      zlo = asm_.L * p.h + w;
      zhi = (asm_.L + 1) * p.h;
    } else {
      zlo = body.layer * p.h + w;
      zhi = (body.layer + 1) * p.h + w;
    }
    return point.z() > zlo + tol && point.z() < zhi - tol;
  }

  // Hexagon: work in the planar cross-section coordinates.
  const double l_hex = block_length(asm_.n, asm_.r_i) / 1.5;
  const double half_h = 0.5 * std::numbers::sqrt3 * l_hex;
  const double x_to_phi = span / (3.0 * l_hex);
  const HexSection sec{l_hex};
  const double phi_c = (off * 1.5 + body.slot * 3.0) * l_hex * x_to_phi;
  const double u = ang_diff(phi, phi_c) / x_to_phi;
  const double zc = body.layer * asm_.layer_height;
  const double zeta = point.z() - zc;
  double zeta_lo = -half_h, zeta_hi = half_h;
  if (body.layer == -1) zeta_lo = 0.0;
  if (body.layer == asm_.L) zeta_hi = 0.0;
  if (zeta <= zeta_lo + tol || zeta >= zeta_hi - tol) return false;
  return u > sec.left(zeta) + tol && u < sec.right(zeta) - tol;
}

bool assembly_is_penetration_free(const Assembly& asm_, double tol) {
  for (const auto& probe : asm_.bodies) {
    for (const auto& v : probe.mesh.vertices) {
      for (const auto& b : asm_.bodies) {
        if (b.id == probe.id) continue;
        if (std::abs(b.layer - probe.layer) > 2) continue;
        if (point_inside_body(asm_, b, v, tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace tia
