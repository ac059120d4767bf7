#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "tia/errors.hpp"
#include "tia/mesh_io.hpp"
#include "tia/pipeline.hpp"

namespace {

struct GeometryArgs {
  std::string block = "sine";
  double a = 20.0, s = 0.0, f = 1.0;
  int n = 4;
  double t = 40.0, h = 200.0, ri = 120.0;
  int L = 12;
  std::string resolution;  // "NX,NY,NZ"
};

void add_geometry_flags(CLI::App* cmd, GeometryArgs& g) {
  cmd->add_option("--block", g.block, "block family: sine|hex")
      ->check(CLI::IsMember({"sine", "hex"}));
  cmd->add_option("--a", g.a, "sine amplitude [mm]");
  cmd->add_option("--s", g.s, "sine phase shift in [0,1)");
  cmd->add_option("--f", g.f, "sine frequency (waves per block)");
  cmd->add_option("--n", g.n, "blocks per layer");
  cmd->add_option("--t", g.t, "wall thickness [mm]");
  cmd->add_option("--h", g.h, "block height [mm]");
  cmd->add_option("--ri", g.ri, "inner radius [mm]");
  cmd->add_option("--L", g.L, "interior layer count");
  cmd->add_option("--resolution", g.resolution, "mesh subdivisions NX,NY,NZ");
}

std::optional<tia::MeshResolution> parse_resolution(const std::string& text) {
  if (text.empty()) return std::nullopt;
  tia::MeshResolution res;
  if (std::sscanf(text.c_str(), "%d,%d,%d", &res.div_x, &res.div_y, &res.div_z) != 3)
    throw tia::Error("--resolution expects NX,NY,NZ");
  return res;
}

tia::EvalConfig make_eval_config(const GeometryArgs& g) {
  tia::EvalConfig cfg;
  if (g.block == "sine") {
    cfg.kind = tia::AssemblyKind::Sine;
    cfg.sine.h = g.h;
    cfg.sine.a = g.a;
    cfg.sine.f = g.f;
    cfg.sine.s = g.s;
    cfg.sine.n = g.n;
    cfg.sine.r_i = g.ri;
    cfg.sine.t = g.t;
    cfg.sine.L = g.L;
  } else {
    cfg.kind = tia::AssemblyKind::Hexagon;
    cfg.hex.n = g.n;
    cfg.hex.r_i = g.ri;
    cfg.hex.r_o = g.ri + g.t;
    cfg.hex.L = g.L;
  }
  cfg.resolution = parse_resolution(g.resolution);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric tubular interlocking block assemblies: generation, "
               "rigid-body contact statics, and design sweeps"};
  app.require_subcommand(1);

  // ---- evaluate ----
  GeometryArgs eval_geo;
  std::string eval_bvp = "pipe";
  double eval_p0 = 0.01;
  std::string eval_out;
  std::string pillar_variant = "top-layer";
  int target_layer = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate one configuration");
  add_geometry_flags(eval_cmd, eval_geo);
  eval_cmd->add_option("--bvp", eval_bvp, "pipe|tunnel|pillar|beam|shaft")
      ->check(CLI::IsMember({"pipe", "tunnel", "pillar", "beam", "shaft"}));
  eval_cmd->add_option("--p0", eval_p0, "surface load magnitude [MPa]");
  eval_cmd->add_option("--out", eval_out, "output CSV (default: stdout)");
  eval_cmd->add_option("--pillar-variant", pillar_variant,
                       "top-layer|released-frame")
      ->check(CLI::IsMember({"top-layer", "released-frame"}));
  eval_cmd->add_option("--target-layer", target_layer,
                       "1-based beam/shaft layer (0 = default)");

  // ---- sweep ----
  std::string sweep_config, sweep_out;
  int sweep_jobs = 0;
  std::string sweep_bvp, sweep_resolution;
  double sweep_p0 = -1.0;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter-space sweep");
  sweep_cmd->add_option("--config", sweep_config, "JSON sweep configuration");
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel grid evaluations");
  sweep_cmd->add_option("--bvp", sweep_bvp, "override: single BVP");
  sweep_cmd->add_option("--p0", sweep_p0, "override: load magnitude [MPa]");
  sweep_cmd->add_option("--resolution", sweep_resolution, "override: NX,NY,NZ");

  // ---- export ----
  GeometryArgs export_geo;
  std::string export_format = "obj", export_out, export_bvp = "pipe";
  bool export_pressures = false;
  double export_p0 = 0.01;
  auto* export_cmd = app.add_subcommand("export", "write the surface mesh");
  add_geometry_flags(export_cmd, export_geo);
  export_cmd->add_option("--format", export_format, "obj|vtk-ascii")
      ->check(CLI::IsMember({"obj", "vtk-ascii"}));
  export_cmd->add_option("--out", export_out, "output file")->required();
  export_cmd->add_flag("--pressures", export_pressures,
                       "solve the load case and attach per-face pressures");
  export_cmd->add_option("--bvp", export_bvp, "load case for --pressures");
  export_cmd->add_option("--p0", export_p0, "load magnitude for --pressures [MPa]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval_cmd->parsed()) {
      tia::EvalConfig cfg = make_eval_config(eval_geo);
      cfg.load.kind = tia::bvp_from_string(eval_bvp);
      cfg.load.p0 = eval_p0;
      cfg.load.target_layer = target_layer;
      cfg.load.pillar_variant = pillar_variant == "released-frame"
                                    ? tia::PillarVariant::ReleasedTopFrame
                                    : tia::PillarVariant::TopInteriorLayer;
      const tia::ResultRow row = tia::evaluate(cfg);
      if (eval_out.empty()) {
        std::cout << tia::csv_header() << "\n" << tia::to_csv(row) << "\n";
      } else {
        tia::write_csv(eval_out, {row});
      }
      return row.error.empty() ? 0 : 1;
    }

    if (sweep_cmd->parsed()) {
      tia::SweepConfig cfg;
      if (!sweep_config.empty()) cfg = tia::sweep_config_from_json_file(sweep_config);
      cfg.out_dir = sweep_out;
      if (sweep_jobs > 0) cfg.jobs = sweep_jobs;
      if (cfg.jobs <= 0) cfg.jobs = static_cast<int>(std::thread::hardware_concurrency());
      if (!sweep_bvp.empty()) cfg.bvps = {tia::bvp_from_string(sweep_bvp)};
      if (sweep_p0 > 0) cfg.p0 = sweep_p0;
      if (!sweep_resolution.empty()) cfg.resolution = parse_resolution(sweep_resolution);
      const auto rows = tia::run_sweep(cfg);
      size_t errors = 0;
      for (const auto& r : rows)
        if (!r.error.empty()) ++errors;
      std::cout << rows.size() << " rows written to " << cfg.out_dir << " (" << errors
                << " errors)\n";
      return errors == 0 ? 0 : 1;
    }

    if (export_cmd->parsed()) {
      tia::EvalConfig cfg = make_eval_config(export_geo);
      const tia::MeshFormat format = tia::mesh_format_from_string(export_format);
      const tia::MeshResolution res =
          cfg.resolution ? *cfg.resolution
                         : (cfg.kind == tia::AssemblyKind::Sine
                                ? tia::MeshResolution::defaults_for(cfg.sine)
                                : tia::MeshResolution::defaults_for(cfg.hex));
      const tia::Assembly assembly = cfg.kind == tia::AssemblyKind::Sine
                                         ? tia::build_assembly(cfg.sine, res)
                                         : tia::build_hex_assembly(cfg.hex, res);
      if (!export_pressures) {
        tia::export_mesh(assembly, format, export_out);
        return 0;
      }
      const auto pairs = tia::detect_contacts(assembly, 1e-6 * assembly.r_i);
      tia::LoadCase load;
      load.kind = tia::bvp_from_string(export_bvp);
      load.p0 = export_p0;
      const auto mask = tia::free_mask_for(assembly, load);
      const auto jac = tia::assemble_jacobian(assembly, pairs, mask);
      const tia::VecX f = tia::to_free_vector(tia::assemble_load(assembly, load), jac);
      const auto kin = tia::analyze_kinematics(jac.G, f);
      if (kin.classification != tia::Classification::Locked &&
          kin.classification != tia::Classification::Suppressed)
        throw tia::Error("no contact forces to export: configuration is " +
                         std::string(tia::to_string(kin.classification)));
      const auto eq = tia::solve_contact_forces(jac.G, f, kin.classification);
      const auto field = tia::build_pressure_field(assembly, pairs, eq.lambdas);
      tia::export_mesh(assembly, format, export_out, &field);
      return 0;
    }
  } catch (const tia::InvalidParamsError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tia::InvalidResolutionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const tia::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const tia::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
