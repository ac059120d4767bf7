#pragma once

#include <vector>

#include "tia/contact.hpp"
#include "tia/geometry.hpp"
#include "tia/types.hpp"

namespace tia {

/// Per-body view of the contact pressures p = lambda / A. A body sees
/// every pair it participates in, keyed by its own face index.
struct BodyPressures {
  Index body = 0;
  std::vector<Index> pair_index;
  std::vector<Index> own_face;
  VecX pressure;  ///< MPa
  VecX area;      ///< mm^2
};

struct PressureField {
  std::vector<BodyPressures> bodies;  ///< one entry per assembly body
};

PressureField build_pressure_field(const Assembly& asm_,
                                   const std::vector<ContactPair>& pairs,
                                   const VecX& lambdas);

/// Participation ratio (sum p)^2 / sum p^2; the effective number of
/// loaded faces. Undefined (returns 0) when every pressure vanishes.
double participation_ratio(const VecX& pressures);

/// Binary mask selecting the floor(N_eff) largest pressures; ties at the
/// cut broken toward the lower face index.
std::vector<char> effective_mask(const BodyPressures& bp);

struct MetricsReport {
  double effective_area_pct = 0.0;
  double p_eff_bar = 0.0;  ///< MPa
  double p_max_bar = 0.0;  ///< MPa
  std::vector<double> n_eff;              ///< per body; 0 where undefined
  std::vector<std::vector<char>> masks;   ///< per body, aligned with BodyPressures
};

/// The aggregate evaluation measures over non-frame bodies; bodies whose
/// pressures are identically zero are excluded from the means.
MetricsReport compute_metrics(const Assembly& asm_, const PressureField& field);

}  // namespace tia
