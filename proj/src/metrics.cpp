#include "tia/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tia {

PressureField build_pressure_field(const Assembly& asm_,
                                   const std::vector<ContactPair>& pairs,
                                   const VecX& lambdas) {
  PressureField field;
  field.bodies.resize(asm_.bodies.size());
  for (size_t b = 0; b < asm_.bodies.size(); ++b) field.bodies[b].body = b;

  std::vector<std::vector<std::tuple<Index, Index, double, double>>> acc(
      asm_.bodies.size());
  for (Index k = 0; k < static_cast<Index>(pairs.size()); ++k) {
    const ContactPair& p = pairs[k];
    const double pc = lambdas[k] / p.area;
    acc[p.master_body].emplace_back(k, p.master_face, pc, p.area);
    acc[p.slave_body].emplace_back(k, p.slave_face, pc, p.area);
  }
  for (size_t b = 0; b < asm_.bodies.size(); ++b) {
    auto& rows = acc[b];
    std::sort(rows.begin(), rows.end(),
              [](const auto& x, const auto& y) { return std::get<1>(x) < std::get<1>(y); });
    BodyPressures& bp = field.bodies[b];
    const Index n = static_cast<Index>(rows.size());
    bp.pair_index.resize(n);
    bp.own_face.resize(n);
    bp.pressure.resize(n);
    bp.area.resize(n);
    for (Index i = 0; i < n; ++i) {
      bp.pair_index[i] = std::get<0>(rows[i]);
      bp.own_face[i] = std::get<1>(rows[i]);
      bp.pressure[i] = std::get<2>(rows[i]);
      bp.area[i] = std::get<3>(rows[i]);
    }
  }
  return field;
}

double participation_ratio(const VecX& pressures) {
  const double s1 = pressures.sum();
  const double s2 = pressures.squaredNorm();
  if (s2 <= 0.0) return 0.0;
  return s1 * s1 / s2;
}

std::vector<char> effective_mask(const BodyPressures& bp) {
  const Index n = bp.pressure.size();
  std::vector<char> mask(n, 0);
  const double neff = participation_ratio(bp.pressure);
  const Index k = static_cast<Index>(std::floor(neff));
  if (k <= 0) return mask;

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&bp](Index a, Index b) {
    if (bp.pressure[a] != bp.pressure[b]) return bp.pressure[a] > bp.pressure[b];
    return bp.own_face[a] < bp.own_face[b];
  });
  for (Index i = 0; i < std::min(k, n); ++i) mask[order[i]] = 1;
  return mask;
}

MetricsReport compute_metrics(const Assembly& asm_, const PressureField& field) {
  MetricsReport rep;
  rep.n_eff.assign(asm_.bodies.size(), 0.0);
  rep.masks.resize(asm_.bodies.size());

  double masked_area = 0.0, eligible_area = 0.0;
  double sum_peff = 0.0, sum_pmax = 0.0;
  Index defined = 0;

  for (const Body& b : asm_.bodies) {
    if (b.is_frame) continue;
    const BodyPressures& bp = field.bodies[b.id];
    eligible_area += bp.area.sum();

    const double neff = participation_ratio(bp.pressure);
    rep.n_eff[b.id] = neff;
    if (neff <= 0.0) continue;  // unloaded body: excluded from the means

    const auto mask = effective_mask(bp);
    rep.masks[b.id] = mask;
    const Index k = static_cast<Index>(std::floor(neff));

    double body_masked_p = 0.0;
    for (Index i = 0; i < bp.pressure.size(); ++i) {
      if (mask[i]) {
        masked_area += bp.area[i];
        body_masked_p += bp.pressure[i];
      }
    }
    sum_peff += body_masked_p / k;
    sum_pmax += bp.pressure.maxCoeff();
    ++defined;
  }

  rep.effective_area_pct = eligible_area > 0.0 ? 100.0 * masked_area / eligible_area : 0.0;
  if (defined > 0) {
    rep.p_eff_bar = sum_peff / defined;
    rep.p_max_bar = sum_pmax / defined;
  }
  return rep;
}

}  // namespace tia
