#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tia/errors.hpp"
#include "tia/types.hpp"

namespace tia {

/// Design parameters of the tubular sine block family.
/// Units: lengths in mm, f and s dimensionless, s in [0,1).
struct SineBlockParams {
  double h = 200.0;   ///< block height (layer height)
  double a = 20.0;    ///< sine amplitude
  double f = 1.0;     ///< sine frequency (full waves per block)
  double s = 0.0;     ///< phase shift; 0 = sine block, 0.5 = cosine block
  int n = 4;          ///< blocks per layer
  double r_i = 120.0; ///< inner radius
  double t = 40.0;    ///< wall thickness
  int L = 12;         ///< interior layers (frames excluded)

  void validate() const;  // throws InvalidParamsError
};

/// Parameters of the hexagon-based tubular block.
struct HexBlockParams {
  int n = 4;
  double r_i = 120.0;
  double r_o = 160.0;
  int L = 12;

  void validate() const;
};

/// Structured-mesh subdivision counts. div_x runs along the block
/// width (azimuth after mapping), div_y through the thickness,
/// div_z along the height.
struct MeshResolution {
  int div_x = 24;
  int div_y = 4;
  int div_z = 24;

  /// Default used throughout: div_x = 24*f (sine extrema on grid),
  /// div_y = 4, div_z = 24.
  static MeshResolution defaults_for(const SineBlockParams& p);
  static MeshResolution defaults_for(const HexBlockParams& p);
};

enum class FaceTag : std::uint8_t {
  Inner,
  Outer,
  Top,
  Bottom,
  Lateral,
  FrameExposed,
};

const char* to_string(FaceTag tag);

/// Conforming hexahedral volume mesh with tagged boundary quads.
struct BlockMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<Index, 8>> hex_cells;      // VTK vertex order
  std::vector<std::array<Index, 4>> surface_faces;  // outward orientation
  std::vector<FaceTag> face_tags;

  double cell_volume(Index c) const;
  Vec3 cell_centroid(Index c) const;
  double volume() const;
  Vec3 volume_centroid() const;

  /// Face geometry via the fixed two-triangle split (diagonal v0-v2);
  /// normal is the area-weighted triangle average, unit length.
  double face_area(Index f) const;
  Vec3 face_normal(Index f) const;
  Vec3 face_centroid(Index f) const;
};

struct Body {
  Index id = 0;
  BlockMesh mesh;
  Vec3 centroid = Vec3::Zero();
  Index layer = 0;  ///< -1 = bottom frame, L = top frame
  Index slot = 0;
  bool is_frame = false;
};

enum class AssemblyKind { Sine, Hexagon };

struct Assembly {
  std::vector<Body> bodies;
  AssemblyKind kind = AssemblyKind::Sine;
  int n = 0;
  int L = 0;
  double r_i = 0.0;
  double r_o = 0.0;
  double layer_height = 0.0;  ///< h for sine, axial pitch for hexagon

  // Build parameters, kept for analytic queries (containment, loads).
  SineBlockParams sine_params;
  HexBlockParams hex_params;

  Index free_body_count() const;
};

/// Planar block width from the layer partition:
/// l = r_i * sqrt(2 (1 - cos(pi/n))).
double block_length(int n, double r_i);

/// Vertical offset applied to the point (x, y, .) of the planar brick:
/// (y/t) * a * sin(2 pi f x/l + s pi). The taper (y/t) takes the
/// amplitude to zero at the inner surface.
double sine_offset(double x, double y, const SineBlockParams& p);

/// Structured mesh of the brick [-l/2,l/2] x [0,t] x [0,h] with every
/// vertex sheared vertically by sine_offset. extra_phase shifts the
/// sine argument (used when a block is cut from a shifted layer).
BlockMesh build_planar_sine_block(const SineBlockParams& p, const MeshResolution& res,
                                  double extra_phase = 0.0);

/// Wrap the planar block around the axis: (x,y,z) -> radius r_i + y,
/// angle phi_0 + (x/l)(2 pi / n), height z.
BlockMesh map_to_cylinder(const BlockMesh& planar, const SineBlockParams& p,
                          double phi0 = 0.0);

/// Layered tube of sine blocks: L interior layers (odd layers rotated
/// by pi/n) plus one frame layer below and one above, trimmed flat on
/// their exposed horizontal sides.
Assembly build_assembly(const SineBlockParams& p, const MeshResolution& res);

/// Layered tube of hexagon-based blocks (honeycomb arrangement, zigzag
/// sides replaced by circumscribed-circle arcs), frames trimmed flat.
Assembly build_hex_assembly(const HexBlockParams& p, const MeshResolution& res);

/// True if the point lies strictly inside the given body by more than
/// `tol` (analytic containment from the build parameters).
bool point_inside_body(const Assembly& asm_, const Body& body, const Vec3& point,
                       double tol);

/// Vertex-in-volume non-penetration scan over all bodies.
bool assembly_is_penetration_free(const Assembly& asm_, double tol = 1e-9);

namespace detail {

using VertexFn = std::function<Vec3(int, int, int)>;

/// Structured box-topology mesh over an (nx, ny, nz) cell grid.
/// side_tags order: x-, x+, y-, y+, z-, z+. Handedness of the
/// parameterization is detected and corrected so cells are positive
/// and boundary quads wind outward.
BlockMesh build_structured_mesh(int nx, int ny, int nz, const VertexFn& pos,
                                const std::array<FaceTag, 6>& side_tags);

/// Global layer-interface wave evaluated at azimuth phi and radius r.
/// Continuous around the circle; for half-integer f*n the phase is
/// anchored so the seam falls on a zero of the wave.
double sine_surface_offset(const SineBlockParams& p, double phi, double r);

}  // namespace detail

}  // namespace tia
