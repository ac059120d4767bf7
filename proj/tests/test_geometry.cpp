#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "tia/geometry.hpp"

using namespace tia;

namespace {

SineBlockParams tsb1() {
  SineBlockParams p;
  p.h = 200;
  p.a = 20;
  p.f = 1.5;
  p.s = 0.0;
  p.n = 4;
  p.r_i = 120;
  p.t = 40;
  p.L = 12;
  return p;
}

}  // namespace

TEST_CASE("block_length matches the chord formula") {
  CHECK(block_length(2, 120) == doctest::Approx(169.7056274847714).epsilon(1e-12));
  CHECK(block_length(4, 120) == doctest::Approx(91.84402376762154).epsilon(1e-12));
}

TEST_CASE("block_length small-angle limit") {
  const double ratio = block_length(360, 120) * 360 / (std::numbers::pi * 120);
  CHECK(std::abs(ratio - 1.0) < 1e-4);
}

TEST_CASE("block_length decreases in n, linear in r_i") {
  for (int n = 2; n < 12; ++n) CHECK(block_length(n + 1, 77.0) < block_length(n, 77.0));
  for (int n = 2; n <= 6; ++n)
    CHECK(block_length(n, 240.0) ==
          doctest::Approx(2.0 * block_length(n, 120.0)).epsilon(1e-13));
}

TEST_CASE("sine_offset spec values") {
  SineBlockParams p = tsb1();
  p.f = 1.0;

  SUBCASE("zero at x=0 for s=0") {
    CHECK(sine_offset(0.0, p.t, p) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("cosine block peaks at x=0") {
    p.s = 0.5;
    CHECK(sine_offset(0.0, p.t, p) == doctest::Approx(20.0).epsilon(1e-12));
  }
  SUBCASE("taper halves the amplitude at mid-thickness") {
    const double l = block_length(p.n, p.r_i);
    CHECK(sine_offset(l / 4.0, p.t / 2.0, p) == doctest::Approx(10.0).epsilon(1e-12));
  }
}

TEST_CASE("planar block: zero amplitude gives the plain brick") {
  SineBlockParams p = tsb1();
  p.a = 0;
  p.f = 1;
  MeshResolution res{24, 4, 6};
  const BlockMesh mesh = build_planar_sine_block(p, res);
  for (Index f = 0; f < static_cast<Index>(mesh.surface_faces.size()); ++f) {
    const Vec3 n = mesh.face_normal(f);
    const double axis_align = std::max({std::abs(n.x()), std::abs(n.y()), std::abs(n.z())});
    CHECK(axis_align == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("planar block: deformed vertex position") {
  SineBlockParams p = tsb1();
  p.f = 1;
  MeshResolution res{24, 4, 6};
  const BlockMesh mesh = build_planar_sine_block(p, res);
  const double l = block_length(p.n, p.r_i);
  bool found = false;
  for (const Vec3& v : mesh.vertices) {
    if (std::abs(v.x() - l / 4) < 1e-9 && std::abs(v.y() - p.t) < 1e-9 &&
        v.z() < p.h / res.div_z) {
      CHECK(v.z() == doctest::Approx(20.0).epsilon(1e-12));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("planar block volume is l*t*h for any (a, f, s)") {
  const double l = block_length(4, 120);
  for (double a : {0.0, 10.0, 25.0}) {
    for (double f : {1.0, 1.5, 2.0}) {
      for (double s : {0.0, 0.5}) {
        SineBlockParams p = tsb1();
        p.a = a;
        p.f = f;
        p.s = s;
        MeshResolution res{static_cast<int>(std::lround(24 * f)), 4, 6};
        const BlockMesh mesh = build_planar_sine_block(p, res);
        CHECK(mesh.volume() == doctest::Approx(l * p.t * p.h).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("map_to_cylinder spec points") {
  SineBlockParams p = tsb1();
  p.f = 1;
  p.a = 0;
  MeshResolution res{24, 2, 2};
  const BlockMesh planar = build_planar_sine_block(p, res);
  const BlockMesh tube = map_to_cylinder(planar, p);
  const double l = block_length(p.n, p.r_i);

  // (x=0, y=0, z=0) -> (r_i, 0, 0); (l/2, t, h) -> edge of the span.
  bool seam = false, edge = false;
  for (size_t i = 0; i < planar.vertices.size(); ++i) {
    const Vec3& src = planar.vertices[i];
    const Vec3& dst = tube.vertices[i];
    if (src.norm() < 1e-12) {
      CHECK((dst - Vec3(p.r_i, 0, 0)).norm() < 1e-9);
      seam = true;
    }
    if (std::abs(src.x() - l / 2) < 1e-9 && std::abs(src.y() - p.t) < 1e-9 &&
        std::abs(src.z() - p.h) < 1e-9) {
      const double phi = std::numbers::pi / p.n;
      CHECK((dst - Vec3((p.r_i + p.t) * std::cos(phi), (p.r_i + p.t) * std::sin(phi),
                        p.h))
                .norm() < 1e-9);
      edge = true;
    }
  }
  CHECK(seam);
  CHECK(edge);

  // Inner surface vertices stay on the inner cylinder.
  for (size_t i = 0; i < planar.vertices.size(); ++i) {
    if (std::abs(planar.vertices[i].y()) < 1e-12) {
      const double r = std::hypot(tube.vertices[i].x(), tube.vertices[i].y());
      CHECK(r == doctest::Approx(p.r_i).epsilon(1e-12));
    }
  }

  // Mapped cells keep positive volume.
  CHECK(tube.volume() > 0.0);
}

TEST_CASE("resolution validation rejects off-grid extrema and odd div_x") {
  SineBlockParams p = tsb1();
  CHECK_THROWS_AS(build_planar_sine_block(p, MeshResolution{15, 4, 6}),
                  InvalidResolutionError);
  CHECK_THROWS_AS(build_planar_sine_block(p, MeshResolution{16, 4, 6}),
                  InvalidResolutionError);  // 16 not a multiple of 2f = 3
}

TEST_CASE("parameter validation") {
  SineBlockParams p = tsb1();
  p.a = 120;  // >= h/2
  CHECK_THROWS_AS(p.validate(), InvalidParamsError);
  p = tsb1();
  p.n = 1;
  CHECK_THROWS_AS(p.validate(), InvalidParamsError);
  p = tsb1();
  p.f = 1.3;  // 2 f n not an integer
  CHECK_THROWS_AS(p.validate(), InvalidParamsError);
  HexBlockParams hp;
  hp.r_o = hp.r_i;
  CHECK_THROWS_AS(hp.validate(), InvalidParamsError);
}

TEST_CASE("sine assembly: counts, layering, conformity") {
  SineBlockParams p = tsb1();
  MeshResolution res{12, 2, 4};  // coarse but valid: 12 = 4 * 2f? 2f=3 -> 12 ok
  const Assembly asm_ = build_assembly(p, res);

  SUBCASE("body count 4*12 + 8") {
    CHECK(asm_.bodies.size() == 56);
    Index frames = 0;
    for (const auto& b : asm_.bodies) frames += b.is_frame ? 1 : 0;
    CHECK(frames == 8);
    CHECK(asm_.free_body_count() == 48);
  }

  SUBCASE("interior height L*h and frame extent") {
    double zmin = 1e300, zmax = -1e300;
    for (const auto& b : asm_.bodies) {
      if (b.is_frame) continue;
      for (const auto& v : b.mesh.vertices) {
        zmin = std::min(zmin, v.z());
        zmax = std::max(zmax, v.z());
      }
    }
    CHECK(zmin == doctest::Approx(0.0 - p.a).epsilon(1e-9));
    CHECK(zmax == doctest::Approx(p.L * p.h + p.a).epsilon(1e-9));
    // frames close the stack flat
    double fmin = 1e300, fmax = -1e300;
    for (const auto& b : asm_.bodies) {
      if (!b.is_frame) continue;
      for (const auto& v : b.mesh.vertices) {
        fmin = std::min(fmin, v.z());
        fmax = std::max(fmax, v.z());
      }
    }
    CHECK(fmin == doctest::Approx(-p.h).epsilon(1e-12));
    CHECK(fmax == doctest::Approx((p.L + 1) * p.h).epsilon(1e-12));
  }

  SUBCASE("mating faces conform: coincident centroids within 1e-6 mm") {
    // every interior top face must have a partner bottom face above
    std::multimap<long long, Vec3> tops;
    const auto quantize = [](const Vec3& c) {
      return static_cast<long long>(std::llround(c.x() * 1e3)) * 1000003LL +
             static_cast<long long>(std::llround(c.y() * 1e3)) * 10007LL +
             static_cast<long long>(std::llround(c.z() * 1e3));
    };
    (void)quantize;
    std::vector<Vec3> top_centroids, bottom_centroids;
    for (const auto& b : asm_.bodies) {
      for (Index f = 0; f < static_cast<Index>(b.mesh.surface_faces.size()); ++f) {
        if (b.mesh.face_tags[f] == FaceTag::Top && b.layer < p.L)
          top_centroids.push_back(b.mesh.face_centroid(f));
        if (b.mesh.face_tags[f] == FaceTag::Bottom && b.layer >= 0)
          bottom_centroids.push_back(b.mesh.face_centroid(f));
      }
    }
    REQUIRE(top_centroids.size() == bottom_centroids.size());
    Index matched = 0;
    for (const auto& tc : top_centroids) {
      for (const auto& bc : bottom_centroids) {
        if ((tc - bc).norm() < 1e-6) {
          ++matched;
          break;
        }
      }
    }
    CHECK(matched == static_cast<Index>(top_centroids.size()));
  }
}

TEST_CASE("sine assembly is penetration-free at reference") {
  SineBlockParams p = tsb1();
  MeshResolution res{12, 2, 4};
  const Assembly asm_ = build_assembly(p, res);
  CHECK(assembly_is_penetration_free(asm_, 1e-9));
}

TEST_CASE("phase shift is an isometry: volume and contact-eligible area") {
  MeshResolution res{12, 2, 4};
  SineBlockParams p0 = tsb1();
  SineBlockParams p5 = tsb1();
  p5.s = 0.5;
  const Assembly a0 = build_assembly(p0, res);
  const Assembly a5 = build_assembly(p5, res);

  const auto interior_volume = [](const Assembly& a) {
    double v = 0;
    for (const auto& b : a.bodies)
      if (!b.is_frame) v += b.mesh.volume();
    return v;
  };
  const auto eligible_area = [](const Assembly& a) {
    double s = 0;
    for (const auto& b : a.bodies) {
      if (b.is_frame) continue;
      for (Index f = 0; f < static_cast<Index>(b.mesh.surface_faces.size()); ++f) {
        const FaceTag tag = b.mesh.face_tags[f];
        if (tag == FaceTag::Top || tag == FaceTag::Bottom || tag == FaceTag::Lateral)
          s += b.mesh.face_area(f);
      }
    }
    return s;
  };
  CHECK(interior_volume(a0) == doctest::Approx(interior_volume(a5)).epsilon(1e-9));
  CHECK(eligible_area(a0) == doctest::Approx(eligible_area(a5)).epsilon(1e-9));

  // per-block volume is the sector slab volume for both phases
  for (const auto& b : a0.bodies) {
    if (b.is_frame) continue;
    CHECK(b.mesh.volume() ==
          doctest::Approx(a5.bodies[b.id].mesh.volume()).epsilon(1e-9));
  }
}

TEST_CASE("hex assembly: counts and conformity") {
  HexBlockParams p;  // THB 0
  MeshResolution res{8, 2, 8};
  const Assembly asm_ = build_hex_assembly(p, res);

  CHECK(asm_.bodies.size() == 56);

  SUBCASE("inner surface vertices at r_i") {
    for (const auto& b : asm_.bodies) {
      for (Index f = 0; f < static_cast<Index>(b.mesh.surface_faces.size()); ++f) {
        if (b.mesh.face_tags[f] != FaceTag::Inner) continue;
        for (int k = 0; k < 4; ++k) {
          const Vec3& v = b.mesh.vertices[b.mesh.surface_faces[f][k]];
          CHECK(std::hypot(v.x(), v.y()) == doctest::Approx(p.r_i).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("penetration-free") { CHECK(assembly_is_penetration_free(asm_, 1e-9)); }
}
