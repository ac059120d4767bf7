#include "tia/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "tia/errors.hpp"

namespace tia {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

ResultRow base_row(const EvalConfig& cfg, const MeshResolution& res) {
  ResultRow row;
  if (cfg.kind == AssemblyKind::Sine) {
    row.block = "sine";
    row.h = cfg.sine.h;
    row.a = cfg.sine.a;
    row.f = cfg.sine.f;
    row.s = cfg.sine.s;
    row.n = cfg.sine.n;
    row.r_i = cfg.sine.r_i;
    row.t = cfg.sine.t;
    row.L = cfg.sine.L;
    row.n_w = 2.0 * cfg.sine.f * cfg.sine.n;
  } else {
    row.block = "hex";
    row.a = row.f = row.s = 0;
    row.n = cfg.hex.n;
    row.r_i = cfg.hex.r_i;
    row.t = cfg.hex.r_o - cfg.hex.r_i;
    row.L = cfg.hex.L;
  }
  row.p0 = cfg.load.p0;
  row.div_x = res.div_x;
  row.div_y = res.div_y;
  row.div_z = res.div_z;
  return row;
}

MeshResolution resolve_resolution(const EvalConfig& cfg) {
  if (cfg.resolution) return *cfg.resolution;
  return cfg.kind == AssemblyKind::Sine ? MeshResolution::defaults_for(cfg.sine)
                                        : MeshResolution::defaults_for(cfg.hex);
}

}  // namespace

std::vector<ResultRow> evaluate_cases(const EvalConfig& base,
                                      const std::vector<LoadCase>& cases) {
  const MeshResolution res = resolve_resolution(base);
  std::vector<ResultRow> rows;
  rows.reserve(cases.size());

  // Shared stage: geometry, contacts, default-mask Jacobian, feasibility.
  Assembly assembly;
  std::vector<ContactPair> pairs;
  bool shared_ok = true;
  std::string shared_error;
  const auto t_shared = Clock::now();
  try {
    assembly = base.kind == AssemblyKind::Sine ? build_assembly(base.sine, res)
                                               : build_hex_assembly(base.hex, res);
    pairs = detect_contacts(assembly, 1e-6 * assembly.r_i);
  } catch (const Error& e) {
    shared_ok = false;
    shared_error = e.what();
  }

  bool exploding = false;
  ContactJacobian jac_default;
  std::optional<KinematicFeasibility> kin_default;
  if (shared_ok) {
    exploding = explosion_check(assembly, pairs);
    std::vector<bool> default_mask(assembly.bodies.size());
    for (size_t i = 0; i < assembly.bodies.size(); ++i)
      default_mask[i] = !assembly.bodies[i].is_frame;
    jac_default = assemble_jacobian(assembly, pairs, default_mask);
  }
  const double shared_seconds = seconds_since(t_shared);
  const double shared_per_case = shared_seconds / std::max<size_t>(1, cases.size());

  for (const LoadCase& load : cases) {
    EvalConfig cfg = base;
    cfg.load = load;
    ResultRow row = base_row(cfg, res);
    row.bvp = to_string(load.kind);
    const auto t0 = Clock::now();

    if (!shared_ok) {
      row.error = shared_error;
      row.classification = "error";
      row.wall_clock_s = shared_per_case;
      rows.push_back(row);
      continue;
    }
    row.exploding = exploding;

    try {
      const std::vector<bool> mask = free_mask_for(assembly, load);
      bool default_mask = true;
      for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i] == assembly.bodies[i].is_frame) {
          // mask differs from "free iff not frame"
          default_mask = false;
          break;
        }

      const ContactJacobian* jac = &jac_default;
      ContactJacobian jac_alt;
      if (!default_mask) {
        jac_alt = assemble_jacobian(assembly, pairs, mask);
        jac = &jac_alt;
      }

      const GeneralizedLoad gl = assemble_load(assembly, load);
      const VecX f = to_free_vector(gl, *jac);

      KinematicFeasibility kf;
      if (default_mask) {
        if (!kin_default) kin_default = kinematic_feasibility(jac_default.G);
        kf = *kin_default;
      } else {
        kf = kinematic_feasibility(jac->G);
      }

      KinematicReport kin;
      kin.z_star = kf.z_star;
      kin.nullity = kf.nullity;
      kin.mechanism = kf.mechanism;
      if (kf.z_star > 0.0) {
        kin.gamma_max = mechanism_activation(jac->G, f);
        kin.gamma_min = mechanism_suppression(jac->G, f);
      }
      kin.classification =
          classify(kin.z_star, kin.gamma_max, kin.gamma_min, f.norm());

      row.classification = to_string(kin.classification);
      row.z_star = kin.z_star;
      row.gamma_max = kin.gamma_max;
      row.gamma_min = kin.gamma_min;

      if (kin.classification == Classification::Locked ||
          kin.classification == Classification::Suppressed) {
        const EquilibriumReport eq = solve_contact_forces(jac->G, f, kin.classification);
        row.residual = eq.residual;
        if (eq.feasible) {
          const PressureField field = build_pressure_field(assembly, pairs, eq.lambdas);
          const MetricsReport metrics = compute_metrics(assembly, field);
          row.effective_area_pct = metrics.effective_area_pct;
          row.p_eff_bar = metrics.p_eff_bar;
          row.p_max_bar = metrics.p_max_bar;
        }
      }
    } catch (const Error& e) {
      row.error = e.what();
      row.classification = "error";
    }
    row.wall_clock_s = shared_per_case + seconds_since(t0);
    rows.push_back(row);
  }
  return rows;
}

ResultRow evaluate(const EvalConfig& config) {
  return evaluate_cases(config, {config.load}).front();
}

std::string csv_header() {
  return "block,h,a,f,s,n,r_i,t,L,p0,bvp,classification,z_star,gamma_max,gamma_min,"
         "residual,effective_area_pct,p_eff_bar,p_max_bar,exploding,n_w,wall_clock_s,"
         "div_x,div_y,div_z,error";
}

std::string to_csv(const ResultRow& r) {
  std::string out;
  out += r.block;
  out += "," + fmt_double(r.h) + "," + fmt_double(r.a) + "," + fmt_double(r.f) + "," +
         fmt_double(r.s) + "," + std::to_string(r.n) + "," + fmt_double(r.r_i) + "," +
         fmt_double(r.t) + "," + std::to_string(r.L) + "," + fmt_double(r.p0);
  out += "," + r.bvp + "," + r.classification + "," + fmt_double(r.z_star);
  out += "," + fmt_opt(r.gamma_max) + "," + fmt_opt(r.gamma_min) + "," +
         fmt_opt(r.residual);
  out += "," + fmt_opt(r.effective_area_pct) + "," + fmt_opt(r.p_eff_bar) + "," +
         fmt_opt(r.p_max_bar);
  out += std::string(",") + (r.exploding ? "true" : "false");
  out += "," + fmt_opt(r.n_w) + "," + fmt_double(r.wall_clock_s);
  out += "," + std::to_string(r.div_x) + "," + std::to_string(r.div_y) + "," +
         std::to_string(r.div_z);
  std::string err = r.error;
  for (auto& ch : err)
    if (ch == ',' || ch == '\n') ch = ';';
  out += "," + err;
  return out;
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << csv_header() << "\n";
  for (const auto& r : rows) out << to_csv(r) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

namespace {

nlohmann::json resolution_json(const std::optional<MeshResolution>& res) {
  if (!res) return nullptr;
  return nlohmann::json{{"div_x", res->div_x}, {"div_y", res->div_y}, {"div_z", res->div_z}};
}

}  // namespace

void write_sidecar_json(const std::string& path, const SweepConfig& cfg) {
  nlohmann::json j;
  j["version"] = "tia 0.1.0";
  j["config"] = {
      {"a_set", cfg.a_set},     {"s_set", cfg.s_set}, {"f_set", cfg.f_set},
      {"n_set", cfg.n_set},     {"t_set", cfg.t_set}, {"h", cfg.h},
      {"r_i", cfg.r_i},         {"L", cfg.L},         {"p0", cfg.p0},
      {"jobs", cfg.jobs},
  };
  j["config"]["resolution"] = resolution_json(cfg.resolution);
  std::vector<std::string> bvps;
  for (Bvp b : cfg.bvps) bvps.push_back(to_string(b));
  j["config"]["bvps"] = bvps;
  j["tolerances"] = {
      {"contact_pairing_tol", "1e-6 * r_i"},
      {"equilibrium_residual_tol", 1e-6},
      {"work_rate_zero", "1e-9 * ||f_ext||"},
      {"explosion_eps", "1e-9 * r_i"},
      {"feasibility_zero_threshold", "1e-7 * max(1, n_contacts)"},
  };
  j["notes"] = {
      {"determinism", "rows are a pure function of the config except wall_clock_s"},
      {"pillar_variant", "top interior layer loaded; released-frame variant available"},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

SweepConfig sweep_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config parse error: ") + e.what());
  }
  SweepConfig cfg;
  const auto get = [&j](const char* key, auto& target) {
    if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
  };
  get("a_set", cfg.a_set);
  get("s_set", cfg.s_set);
  get("f_set", cfg.f_set);
  get("n_set", cfg.n_set);
  get("t_set", cfg.t_set);
  get("h", cfg.h);
  get("r_i", cfg.r_i);
  get("L", cfg.L);
  get("p0", cfg.p0);
  get("jobs", cfg.jobs);
  get("out_dir", cfg.out_dir);
  if (j.contains("resolution") && !j.at("resolution").is_null()) {
    MeshResolution res;
    res.div_x = j.at("resolution").value("div_x", res.div_x);
    res.div_y = j.at("resolution").value("div_y", res.div_y);
    res.div_z = j.at("resolution").value("div_z", res.div_z);
    cfg.resolution = res;
  }
  if (j.contains("bvps")) {
    cfg.bvps.clear();
    for (const auto& name : j.at("bvps")) cfg.bvps.push_back(bvp_from_string(name));
  }
  return cfg;
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg) {
  struct GridPoint {
    double a, s, f, t;
    int n;
  };
  std::vector<GridPoint> grid;
  grid.reserve(cfg.grid_size());
  for (double a : cfg.a_set)
    for (double s : cfg.s_set)
      for (double f : cfg.f_set)
        for (int n : cfg.n_set)
          for (double t : cfg.t_set) grid.push_back({a, s, f, t, n});

  const bool persist = !cfg.out_dir.empty();
  std::ofstream partial;
  std::mutex partial_mutex;
  if (persist) {
    std::filesystem::create_directories(cfg.out_dir);
    partial.open(cfg.out_dir + "/results.partial.csv");
    if (!partial) throw IoError("cannot open for writing: " + cfg.out_dir);
    partial << csv_header() << "\n";
  }

  std::vector<std::vector<ResultRow>> results(grid.size());
  std::atomic<size_t> next{0};
  const int jobs = std::max(1, cfg.jobs);

  const auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      const GridPoint& gp = grid[i];
      EvalConfig ec;
      ec.kind = AssemblyKind::Sine;
      ec.sine.h = cfg.h;
      ec.sine.a = gp.a;
      ec.sine.f = gp.f;
      ec.sine.s = gp.s;
      ec.sine.n = gp.n;
      ec.sine.r_i = cfg.r_i;
      ec.sine.t = gp.t;
      ec.sine.L = cfg.L;
      ec.resolution = cfg.resolution;
      std::vector<LoadCase> cases;
      for (Bvp b : cfg.bvps) {
        LoadCase lc;
        lc.kind = b;
        lc.p0 = cfg.p0;
        cases.push_back(lc);
      }
      results[i] = evaluate_cases(ec, cases);
      if (persist) {
        std::lock_guard<std::mutex> lock(partial_mutex);
        for (const auto& row : results[i]) partial << to_csv(row) << "\n";
        partial.flush();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  rows.reserve(grid.size() * cfg.bvps.size());
  for (auto& block : results)
    for (auto& row : block) rows.push_back(std::move(row));

  if (persist) {
    write_csv(cfg.out_dir + "/results.csv", rows);
    write_sidecar_json(cfg.out_dir + "/results.json", cfg);
  }
  return rows;
}

}  // namespace tia
