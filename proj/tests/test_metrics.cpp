#include <doctest.h>

#include "tia/metrics.hpp"

using namespace tia;

namespace {

BodyPressures make_bp(std::initializer_list<double> pressures) {
  BodyPressures bp;
  const Index n = static_cast<Index>(pressures.size());
  bp.pressure.resize(n);
  bp.area = VecX::Ones(n);
  Index i = 0;
  for (double p : pressures) {
    bp.pressure[i] = p;
    bp.own_face.push_back(i);
    bp.pair_index.push_back(i);
    ++i;
  }
  return bp;
}

}  // namespace

TEST_CASE("participation ratio") {
  CHECK(participation_ratio((VecX(4) << 1, 1, 1, 1).finished()) ==
        doctest::Approx(4.0));
  CHECK(participation_ratio((VecX(4) << 2, 1, 1, 0).finished()) ==
        doctest::Approx(16.0 / 6.0));
  CHECK(participation_ratio((VecX(4) << 5, 0, 0, 0).finished()) ==
        doctest::Approx(1.0));
  CHECK(participation_ratio(VecX::Zero(3)) == 0.0);
}

TEST_CASE("effective mask with deterministic tie break") {
  SUBCASE("tie at the cut goes to the lower face index") {
    const auto mask = effective_mask(make_bp({2, 1, 1, 0}));  // N_eff = 2.67, K = 2
    CHECK(mask == std::vector<char>{1, 1, 0, 0});
  }
  SUBCASE("uniform pressures select everything") {
    const auto mask = effective_mask(make_bp({1, 1, 1, 1}));
    CHECK(mask == std::vector<char>{1, 1, 1, 1});
  }
  SUBCASE("single carrier") {
    const auto mask = effective_mask(make_bp({5, 0, 0, 0}));
    CHECK(mask == std::vector<char>{1, 0, 0, 0});
  }
}

TEST_CASE("aggregate metrics on a synthetic two-body assembly") {
  Assembly a;
  a.bodies.resize(2);
  a.bodies[0].id = 0;
  a.bodies[1].id = 1;
  a.bodies[1].is_frame = true;

  PressureField field;
  field.bodies.resize(2);
  field.bodies[0] = make_bp({2, 1, 1, 0});
  field.bodies[0].body = 0;
  field.bodies[1] = make_bp({9, 9});  // frame: ignored by aggregates
  field.bodies[1].body = 1;

  const MetricsReport rep = compute_metrics(a, field);
  CHECK(rep.effective_area_pct == doctest::Approx(50.0));  // 2 of 4 unit faces
  CHECK(rep.p_eff_bar == doctest::Approx(1.5));            // (2+1)/2
  CHECK(rep.p_max_bar == doctest::Approx(2.0));
  CHECK(rep.n_eff[0] == doctest::Approx(16.0 / 6.0));
}

TEST_CASE("uniform pressure reproduces itself and scaling invariance") {
  Assembly a;
  a.bodies.resize(1);
  a.bodies[0].id = 0;

  PressureField field;
  field.bodies.resize(1);
  field.bodies[0] = make_bp({0.7, 0.7, 0.7});
  field.bodies[0].body = 0;

  MetricsReport rep = compute_metrics(a, field);
  CHECK(rep.effective_area_pct == doctest::Approx(100.0));
  CHECK(rep.p_eff_bar == doctest::Approx(0.7));
  CHECK(rep.p_max_bar == doctest::Approx(0.7));

  // scaling pressures scales the means, keeps N_eff and the mask
  PressureField scaled = field;
  scaled.bodies[0].pressure *= 3.0;
  const MetricsReport rep3 = compute_metrics(a, scaled);
  CHECK(rep3.effective_area_pct == doctest::Approx(rep.effective_area_pct));
  CHECK(rep3.p_eff_bar == doctest::Approx(3.0 * rep.p_eff_bar));
  CHECK(rep3.p_max_bar == doctest::Approx(3.0 * rep.p_max_bar));
  CHECK(rep3.n_eff[0] == doctest::Approx(rep.n_eff[0]));
}
