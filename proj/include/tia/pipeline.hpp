#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tia/geometry.hpp"
#include "tia/loads.hpp"
#include "tia/metrics.hpp"
#include "tia/statics.hpp"
#include "tia/types.hpp"

namespace tia {

/// One evaluation point: a block configuration plus one load case.
struct EvalConfig {
  AssemblyKind kind = AssemblyKind::Sine;
  SineBlockParams sine;
  HexBlockParams hex;
  std::optional<MeshResolution> resolution;  ///< default derived per block
  LoadCase load;
};

/// One CSV row. Optional fields serialize as empty cells.
struct ResultRow {
  std::string block;  // "sine" | "hex"
  double h = 0, a = 0, f = 0, s = 0;
  int n = 0;
  double r_i = 0, t = 0;
  int L = 0;
  double p0 = 0;
  std::string bvp;
  std::string classification;
  double z_star = 0;
  std::optional<double> gamma_max, gamma_min;
  std::optional<double> residual;
  std::optional<double> effective_area_pct, p_eff_bar, p_max_bar;
  bool exploding = false;
  std::optional<double> n_w;
  double wall_clock_s = 0;
  int div_x = 0, div_y = 0, div_z = 0;
  std::string error;
};

/// Full gated pipeline for one configuration and one load case.
ResultRow evaluate(const EvalConfig& config);

/// Same block configuration evaluated under several load cases, sharing
/// geometry, contact detection and the feasibility LP across cases.
std::vector<ResultRow> evaluate_cases(const EvalConfig& base,
                                      const std::vector<LoadCase>& cases);

struct SweepConfig {
  std::vector<double> a_set{10, 15, 20, 25};
  std::vector<double> s_set{0.0, 0.5};
  std::vector<double> f_set{1.0, 1.5, 2.0};
  std::vector<int> n_set{2, 3, 4, 5, 6};
  std::vector<double> t_set{30, 40, 50, 60};
  double h = 200.0;
  double r_i = 120.0;
  int L = 12;
  double p0 = 0.01;
  std::optional<MeshResolution> resolution;
  std::vector<Bvp> bvps{Bvp::Pipe};
  std::string out_dir;  ///< empty: keep rows in memory only
  int jobs = 1;

  size_t grid_size() const {
    return a_set.size() * s_set.size() * f_set.size() * n_set.size() * t_set.size();
  }
};

SweepConfig sweep_config_from_json_file(const std::string& path);

/// Evaluates the whole grid (parallel across grid points), appending rows
/// to <out_dir>/results.partial.csv as they complete and finally writing
/// the sorted results.csv plus a results.json sidecar. Row content is
/// independent of scheduling; per-row errors are recorded, never thrown.
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

std::string csv_header();
std::string to_csv(const ResultRow& row);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);
void write_sidecar_json(const std::string& path, const SweepConfig& cfg);

}  // namespace tia
