// Command line front end: single solves, convergence and condition studies,
// and voxel export.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "uwpg/study.hpp"
#include "uwpg/vtk.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kSolverFailure = 2, kIoError = 3 };

struct CommonOptions {
  std::string config_file;
  std::string preset;
  std::string grid;
  std::string order;
  std::string tol;
  std::string out;
  std::vector<std::string> sets;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_file, "key=value configuration file");
  cmd->add_option("--preset", o.preset, "catalytic_filter | channel | manufactured_1d | custom");
  cmd->add_option("--grid", o.grid, "grid size n, or a comma-separated list");
  cmd->add_option("--order", o.order, "test space order (1 or 2)");
  cmd->add_option("--tol", o.tol, "relative residual tolerance of the transport solve");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--set", o.sets, "extra key=value setting (repeatable)");
  cmd->add_flag("--no-timing", o.no_timing, "write 0 in the seconds column");
}

uwpg::RunConfig build_config(const CommonOptions& o) {
  std::map<std::string, std::string> settings;
  if (!o.config_file.empty()) settings = uwpg::read_config_file(o.config_file);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw uwpg::ConfigError("--set expects key=value, got '" + s + "'");
    settings[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (!o.preset.empty()) settings["preset"] = o.preset;
  if (!o.grid.empty()) settings["grids"] = o.grid;
  if (!o.order.empty()) settings["order"] = o.order;
  if (!o.tol.empty()) settings["tol"] = o.tol;
  if (!o.out.empty()) settings["out"] = o.out;
  if (o.no_timing) settings["timing"] = "false";
  uwpg::RunConfig config;
  uwpg::apply_settings(config, settings);
  config.validate();
  return config;
}

std::string num(double v) { return std::isnan(v) ? "nan" : uwpg::format_double(v); }

int cmd_solve(const uwpg::RunConfig& config) {
  const auto rep = uwpg::run_single(config);
  std::cout << "grid " << rep.grid << ", order " << config.order << ", " << rep.dofs << " dofs\n"
            << "transport: " << rep.transport.iterations << " iterations, residual "
            << num(rep.transport.relative_residual) << "\n"
            << "orthogonality residual: " << num(rep.orthogonality) << "\n"
            << "outflow flux: " << num(rep.outflow_flux)
            << ", inflow loading: " << num(rep.inflow_loading) << "\n";
  if (rep.darcy)
    std::cout << "darcy: " << rep.darcy->iterations << " iterations, p in [" << num(rep.min_pressure)
              << ", " << num(rep.max_pressure) << "], mass imbalance " << num(rep.mass_imbalance)
              << "\n";
  std::cout << "dg reference: outflow flux " << num(rep.dg_outflow_flux) << ", L2 distance "
            << num(rep.distance_to_dg) << "\n";
  if (rep.l2_error_exact) std::cout << "L2 error vs exact solution: " << num(*rep.l2_error_exact) << "\n";
  for (const auto& f : rep.files) std::cout << "wrote " << f << "\n";
  return kOk;
}

int cmd_convergence(const uwpg::RunConfig& config) {
  const auto rep = uwpg::run_convergence(config);
  uwpg::write_convergence_csv(std::cout, rep);
  std::cout << "reference: " << rep.reference << "\n"
            << "fitted rate: " << num(rep.rate) << "\n";
  bool failed = false;
  for (const auto& r : rep.rows)
    if (r.failed) {
      failed = true;
      std::cerr << "grid " << r.grid << " failed: " << r.message << "\n";
    }
  return failed ? kSolverFailure : kOk;
}

int cmd_condition(const uwpg::RunConfig& config) {
  const auto rows = uwpg::run_condition_study(config);
  uwpg::write_condition_csv(std::cout, rows);
  for (const auto& r : rows)
    if (r.estimate.breakdown) std::cerr << "grid " << r.grid << ": Lanczos breakdown\n";
  return kOk;
}

int cmd_voxelize(uwpg::RunConfig config, int factor) {
  if (factor > 0) config.voxel_factor = factor;
  const auto voxels = uwpg::run_voxelize(config);
  std::cout << "wrote " << voxels.mx << "x" << voxels.my << " voxels to " << config.out_dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultraweak Petrov-Galerkin solver for stationary reactive transport"};
  app.require_subcommand(1);
  CommonOptions solve_opts, conv_opts, cond_opts, vox_opts;
  int factor = 0;
  auto* solve = app.add_subcommand("solve", "full pipeline on one grid");
  auto* conv = app.add_subcommand("convergence", "h-convergence study");
  auto* cond = app.add_subcommand("condition", "Gram matrix condition study");
  auto* vox = app.add_subcommand("voxelize", "voxel averages of the reconstruction");
  add_common(solve, solve_opts);
  add_common(conv, conv_opts);
  add_common(cond, cond_opts);
  add_common(vox, vox_opts);
  vox->add_option("--factor", factor, "voxels per cell and axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(build_config(solve_opts));
    if (*conv) return cmd_convergence(build_config(conv_opts));
    if (*cond) return cmd_condition(build_config(cond_opts));
    if (*vox) return cmd_voxelize(build_config(vox_opts), factor);
  } catch (const uwpg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const uwpg::AlignmentError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const uwpg::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const uwpg::NotSpdError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const uwpg::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
