#include <doctest.h>

#include <random>

#include "tia/contact.hpp"
#include "tia/geometry.hpp"
#include "tia/statics.hpp"

using namespace tia;

namespace {

Body make_box_body(Index id, const Vec3& lo, const Vec3& hi, int nx, int ny, int nz,
                   bool is_frame) {
  const auto pos = [&](int i, int j, int k) {
    return Vec3(lo.x() + (hi.x() - lo.x()) * i / nx, lo.y() + (hi.y() - lo.y()) * j / ny,
                lo.z() + (hi.z() - lo.z()) * k / nz);
  };
  Body b;
  b.id = id;
  b.mesh = detail::build_structured_mesh(
      nx, ny, nz, pos,
      {FaceTag::Lateral, FaceTag::Lateral, FaceTag::Lateral, FaceTag::Lateral,
       FaceTag::Bottom, FaceTag::Top});
  b.centroid = b.mesh.volume_centroid();
  b.is_frame = is_frame;
  return b;
}

// Unit cube resting on a fixed plane, interface meshed res x res.
struct CubeOnPlane {
  Assembly assembly;
  std::vector<ContactPair> pairs;
  ContactJacobian jac;

  explicit CubeOnPlane(int res) {
    assembly.kind = AssemblyKind::Sine;
    assembly.r_i = 1;
    assembly.r_o = 2;
    assembly.bodies.push_back(
        make_box_body(0, Vec3(0, 0, -1), Vec3(1, 1, 0), res, res, 1, true));
    assembly.bodies.push_back(
        make_box_body(1, Vec3(0, 0, 0), Vec3(1, 1, 1), res, res, 1, false));
    pairs = detect_contacts(assembly, 1e-6);
    jac = assemble_jacobian(assembly, pairs);
  }
};

}  // namespace

TEST_CASE("cube on plane: one contact column admits motion") {
  CubeOnPlane fix(1);
  REQUIRE(fix.pairs.size() == 1);
  const KinematicFeasibility kf = kinematic_feasibility(fix.jac.G);
  CHECK(kf.z_star > 0.0);

  const double W = 9.0;
  VecX gravity = VecX::Zero(6);
  gravity[2] = -W;

  SUBCASE("gravity: suppressed") {
    const double gmax = mechanism_activation(fix.jac.G, gravity);
    const double gmin = mechanism_suppression(fix.jac.G, gravity);
    CHECK(gmax == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(gmin == doctest::Approx(-W).epsilon(1e-9));
    CHECK(classify(kf.z_star, gmax, gmin, gravity.norm()) ==
          Classification::Suppressed);
  }
  SUBCASE("upward pull: activated") {
    VecX pull = -gravity;
    VecX dq;
    const double gmax = mechanism_activation(fix.jac.G, pull, &dq);
    CHECK(gmax == doctest::Approx(W).epsilon(1e-9));
    CHECK(dq[2] > 0.0);
    CHECK(classify(kf.z_star, gmax, mechanism_suppression(fix.jac.G, pull),
                   pull.norm()) == Classification::Activated);
  }
}

TEST_CASE("classify spec triples") {
  CHECK(classify(0.0, std::nullopt, std::nullopt, 1.0) == Classification::Locked);
  CHECK(classify(2.0, 0.0, -3.0, 1.0) == Classification::Suppressed);
  CHECK(classify(2.0, 0.0, 0.0, 1.0) == Classification::Neutral);
  CHECK(classify(2.0, 1.5, -3.0, 1.0) == Classification::Activated);
}

TEST_CASE("contact forces: cube weight") {
  SUBCASE("single centered contact carries the weight") {
    CubeOnPlane fix(1);
    VecX f = VecX::Zero(6);
    f[2] = -5.0;
    const EquilibriumReport eq =
        solve_contact_forces(fix.jac.G, f, Classification::Suppressed);
    CHECK(eq.feasible);
    CHECK(eq.residual <= 1e-6);
    REQUIRE(eq.lambdas.size() == 1);
    CHECK(eq.lambdas[0] == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("four symmetric contacts split the weight by minimum norm") {
    CubeOnPlane fix(2);
    REQUIRE(fix.pairs.size() == 4);
    VecX f = VecX::Zero(6);
    f[2] = -8.0;
    const EquilibriumReport eq =
        solve_contact_forces(fix.jac.G, f, Classification::Suppressed);
    CHECK(eq.feasible);
    for (Index i = 0; i < 4; ++i)
      CHECK(eq.lambdas[i] == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("lateral push cannot be carried by +z normals") {
    CubeOnPlane fix(1);
    VecX f = VecX::Zero(6);
    f[0] = 1.0;
    const EquilibriumReport eq =
        solve_contact_forces(fix.jac.G, f, Classification::Suppressed);
    CHECK(!eq.feasible);
  }
  SUBCASE("activated classification violates the contract") {
    CubeOnPlane fix(1);
    VecX f = VecX::Zero(6);
    CHECK_THROWS_AS(solve_contact_forces(fix.jac.G, f, Classification::Activated),
                    ContractViolationError);
  }
  SUBCASE("scale covariance") {
    CubeOnPlane fix(2);
    VecX f = VecX::Zero(6);
    f[2] = -3.0;
    f[4] = 0.2;  // small torque to break symmetry
    const auto eq1 = solve_contact_forces(fix.jac.G, f, Classification::Suppressed);
    const auto eq2 =
        solve_contact_forces(fix.jac.G, 2.0 * f, Classification::Suppressed);
    CHECK((eq2.lambdas - 2.0 * eq1.lambdas).lpNorm<Eigen::Infinity>() < 1e-7);
  }
}

TEST_CASE("locked sine tube at coarse resolution") {
  SineBlockParams p;
  p.h = 200;
  p.a = 20;
  p.f = 1.5;
  p.n = 4;
  p.r_i = 120;
  p.t = 40;
  p.L = 4;  // short stack keeps the LP small
  const Assembly a = build_assembly(p, MeshResolution{12, 2, 4});
  const auto pairs = detect_contacts(a, 1e-6 * p.r_i);
  const auto jac = assemble_jacobian(a, pairs);

  const KinematicFeasibility kf = kinematic_feasibility(jac.G);
  CHECK(kf.z_star == 0.0);
  CHECK(kf.nullity == 0);

  // locked: every bounded load admits an equilibrium
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    VecX f(jac.G.rows());
    for (Index i = 0; i < f.size(); ++i) f[i] = u(rng);
    const EquilibriumReport eq = solve_contact_forces(jac.G, f, Classification::Locked);
    CHECK(eq.feasible);
    CHECK(eq.residual <= 1e-6);
    CHECK(eq.lambdas.minCoeff() >= 0.0);
  }
}

TEST_CASE("explosion dichotomy at coarse resolution") {
  SUBCASE("sine with a > 0 does not explode") {
    SineBlockParams p;
    p.h = 200;
    p.a = 20;
    p.f = 1.5;
    p.n = 4;
    p.r_i = 120;
    p.t = 40;
    p.L = 3;
    const Assembly a = build_assembly(p, MeshResolution{12, 2, 4});
    CHECK(!explosion_check(a, detect_contacts(a, 1e-6 * p.r_i)));
  }
  SUBCASE("flat stack (a = 0) explodes") {
    SineBlockParams p;
    p.h = 200;
    p.a = 0;
    p.f = 1.5;
    p.n = 4;
    p.r_i = 120;
    p.t = 40;
    p.L = 3;
    const Assembly a = build_assembly(p, MeshResolution{12, 2, 4});
    CHECK(explosion_check(a, detect_contacts(a, 1e-6 * p.r_i)));
  }
  SUBCASE("hexagon block explodes") {
    HexBlockParams p;
    p.L = 3;
    const Assembly a = build_hex_assembly(p, MeshResolution{8, 2, 8});
    CHECK(explosion_check(a, detect_contacts(a, 1e-6 * p.r_i)));
  }
}
