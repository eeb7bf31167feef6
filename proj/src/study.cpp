#include "uwpg/study.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "uwpg/reconstruct.hpp"
#include "uwpg/reference_dg.hpp"
#include "uwpg/vtk.hpp"

namespace uwpg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + text + "'");
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v >= std::numeric_limits<int>::min() &&
        v <= std::numeric_limits<int>::max())
      return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + text + "'");
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

Preconditioner parse_preconditioner(const std::string& text) {
  if (text == "none") return Preconditioner::None;
  if (text == "jacobi") return Preconditioner::Jacobi;
  if (text == "ssor") return Preconditioner::Ssor;
  throw ConfigError("precond: expected none, jacobi or ssor, got '" + text + "'");
}

BoundaryLabel parse_label(const std::string& text) {
  if (text == "in") return BoundaryLabel::In;
  if (text == "out") return BoundaryLabel::Out;
  if (text == "wall") return BoundaryLabel::Wall;
  throw ConfigError("segments: unknown label '" + text + "'");
}

Side parse_side(const std::string& text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  if (text == "bottom") return Side::Bottom;
  if (text == "top") return Side::Top;
  throw ConfigError("segments: unknown side '" + text + "'");
}

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

int ny_for(const RunConfig& config, int n) {
  return config.problem.preset == Preset::Manufactured1D ? 1 : n;
}

UltraweakSettings transport_settings(const RunConfig& config) {
  return {LinearSolver::Cg, config.krylov};
}

void write_voxels(const std::string& dir, const VoxelField& voxels, std::vector<std::string>& files) {
  const auto vtk = join_path(dir, "u_voxels.vtk");
  write_file(vtk, [&](std::ostream& os) { write_vtk_voxels(os, voxels, "u"); });
  const auto csv = join_path(dir, "u_voxels.csv");
  write_file(csv, [&](std::ostream& os) { write_voxel_csv(os, voxels); });
  files.push_back(vtk);
  files.push_back(csv);
}

std::string format_or_nan(double v) { return std::isnan(v) ? "nan" : format_double(v); }

std::string report_line(const KrylovReport& r) {
  return std::to_string(r.iterations) + " iterations, residual " +
         format_double(r.relative_residual) + (r.converged ? ", converged" : ", NOT converged");
}

}  // namespace

void RunConfig::validate() const {
  if (grids.empty()) throw ConfigError("grids: at least one grid size is required");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (darcy.order != 1 && darcy.order != 2) throw ConfigError("darcy_order must be 1 or 2");
  if (!(krylov.tolerance > 0.0)) throw ConfigError("tol must be positive");
  if (krylov.max_iterations < 1) throw ConfigError("maxit must be positive");
  if (!(krylov.ssor_omega > 0.0 && krylov.ssor_omega < 2.0))
    throw ConfigError("omega must lie in (0, 2)");
  if (voxel_factor < 1) throw ConfigError("voxel_factor must be positive");
  if (reference_factor < 1) throw ConfigError("reference_factor must be positive");
  if (lanczos_iterations < 1) throw ConfigError("lanczos_iters must be positive");
  if (kappa_iterations < 0) throw ConfigError("kappa_iters must not be negative");
  if (lanczos_tolerance < 0.0) throw ConfigError("lanczos_tol must not be negative");
  if (!(problem.k_min > 0.0)) throw ConfigError("k_min must be positive");
  if (problem.c0 < 0.0) throw ConfigError("c0 must not be negative");
  if (out_dir.empty()) throw ConfigError("out must not be empty");
  for (int n : grids) {
    if (n < 1) throw ConfigError("grid sizes must be positive");
    try {
      const Mesh mesh(n, ny_for(*this, n), problem.geometry);
      if (problem.heterogeneous) ScalarField::indicator_box(mesh, problem.reaction_box, 1.0, 0.0);
    } catch (const AlignmentError& e) {
      throw ConfigError("grid " + std::to_string(n) + ": " + e.what());
    }
  }
}

double parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_double("value", trim(text));
  const double num = parse_double("numerator", trim(text.substr(0, slash)));
  const double den = parse_double("denominator", trim(text.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
  return num / den;
}

BoundaryGeometry parse_segments(const std::string& text) {
  BoundaryGeometry g;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 4)
      throw ConfigError("segments: expected label:side:lo:hi, got '" + item + "'");
    const double lo = parse_fraction(parts[2]);
    const double hi = parse_fraction(parts[3]);
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
      throw ConfigError("segments: need 0 <= lo < hi <= 1 in '" + item + "'");
    g.segments.push_back({parse_label(parts[0]), parse_side(parts[1]), lo, hi});
  }
  return g;
}

std::vector<int> parse_grid_list(const std::string& text) {
  std::vector<int> grids;
  for (const auto& item : split(text, ','))
    if (!item.empty()) grids.push_back(parse_int("grids", item));
  if (grids.empty()) throw ConfigError("grids: empty list");
  return grids;
}

void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings) {
  if (auto it = settings.find("preset"); it != settings.end()) {
    try {
      config.problem = ProblemParams::for_preset(parse_preset(it->second));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto& [key, value] : settings) {
    if (key == "preset") continue;
    if (key == "grids" || key == "grid") {
      config.grids = parse_grid_list(value);
    } else if (key == "order") {
      config.order = parse_int(key, value);
    } else if (key == "tol") {
      config.krylov.tolerance = parse_double(key, value);
    } else if (key == "maxit") {
      config.krylov.max_iterations = parse_int(key, value);
    } else if (key == "precond") {
      config.krylov.preconditioner = parse_preconditioner(value);
    } else if (key == "omega") {
      config.krylov.ssor_omega = parse_double(key, value);
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "k_min") {
      config.problem.k_min = parse_double(key, value);
    } else if (key == "c0") {
      config.problem.c0 = parse_double(key, value);
    } else if (key == "box") {
      const auto parts = split(value, ',');
      if (parts.size() != 4) throw ConfigError("box: expected x0,x1,y0,y1");
      config.problem.reaction_box = {parse_fraction(parts[0]), parse_fraction(parts[1]),
                                     parse_fraction(parts[2]), parse_fraction(parts[3])};
    } else if (key == "segments") {
      config.problem.geometry = parse_segments(value);
    } else if (key == "gD") {
      try {
        config.problem.inflow = InflowProfile::parse(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("gD: ") + e.what());
      }
    } else if (key == "velocity") {
      if (value == "darcy")
        config.problem.darcy_velocity = true;
      else if (value == "uniform")
        config.problem.darcy_velocity = false;
      else
        throw ConfigError("velocity: expected darcy or uniform, got '" + value + "'");
    } else if (key == "heterogeneous") {
      config.problem.heterogeneous = parse_bool(key, value);
    } else if (key == "darcy_order") {
      config.darcy.order = parse_int(key, value);
    } else if (key == "darcy_tol") {
      config.darcy.krylov.tolerance = parse_double(key, value);
    } else if (key == "voxel_factor") {
      config.voxel_factor = parse_int(key, value);
    } else if (key == "reference_factor") {
      config.reference_factor = parse_int(key, value);
    } else if (key == "lanczos_iters") {
      config.lanczos_iterations = parse_int(key, value);
    } else if (key == "kappa_iters") {
      config.kappa_iterations = parse_int(key, value);
    } else if (key == "lanczos_tol") {
      config.lanczos_tolerance = parse_double(key, value);
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        config.seed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw ConfigError("seed: expected a non-negative integer, got '" + value + "'");
      }
    } else if (key == "timing") {
      config.timing = parse_bool(key, value);
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (h.size() < 2) return kNaN;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(error[i]);
  }
  mx /= static_cast<double>(h.size());
  my /= static_cast<double>(h.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

GridSolve solve_on_grid(const RunConfig& config, int n) {
  const auto start = Clock::now();
  auto instance = realize(config.problem, n, config.darcy);
  auto space = std::make_shared<const FeSpace>(instance.mesh, config.order, Continuity::Continuous);
  auto system = assemble_normal_equation(
      space, {instance.transport.velocity, instance.transport.reaction}, instance.transport.source,
      instance.transport.inflow);
  auto solution = solve_ultraweak(system, transport_settings(config));
  const double seconds = elapsed(start);
  return {std::move(instance), std::move(system), std::move(solution), seconds};
}

SingleReport run_single(const RunConfig& config) {
  config.validate();
  ensure_directory(config.out_dir);
  const int n = config.grids.front();
  auto run = solve_on_grid(config, n);
  const auto& inst = run.instance;
  const Mesh& mesh = *inst.mesh;
  const auto& b = inst.transport.velocity;

  SingleReport rep;
  rep.grid = n;
  rep.dofs = run.system.space->num_dofs();
  rep.transport = run.solution.report;
  rep.orthogonality = check_orthogonality(run.system, run.solution);
  rep.outflow_flux = qoi_outflow_flux(run.solution);
  rep.inflow_loading = inflow_loading(mesh, inst.transport.inflow, b);
  const auto trace = outflow_trace(run.solution);
  rep.min_trace = trace.samples.empty() ? 0.0 : trace.samples.front().value;
  for (const auto& s : trace.samples) rep.min_trace = std::min(rep.min_trace, s.value);

  if (inst.pressure) {
    rep.darcy = inst.pressure->report;
    rep.min_pressure = inst.pressure->min_pressure;
    rep.max_pressure = inst.pressure->max_pressure;
    rep.mass_imbalance = mass_balance(*inst.pressure).imbalance;
    const auto path = join_path(config.out_dir, "pressure.vtk");
    write_file(path, [&](std::ostream& os) {
      write_vtk_points(os, mesh, vertex_values(*inst.pressure->pressure), "pressure");
    });
    rep.files.push_back(path);
  }

  std::vector<double> speed(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 v = b(mesh, c, {0.5, 0.5});
    speed[c] = std::hypot(v[0], v[1]);
  }
  const auto vpath = join_path(config.out_dir, "velocity_magnitude.vtk");
  write_file(vpath, [&](std::ostream& os) { write_vtk_cells(os, mesh, speed, "velocity_magnitude"); });
  rep.files.push_back(vpath);

  const auto voxels = voxelize(run.solution, config.voxel_factor * mesh.nx(),
                               config.voxel_factor * mesh.ny(), config.order + 2);
  write_voxels(config.out_dir, voxels, rep.files);

  auto dg_space = std::make_shared<const FeSpace>(inst.mesh, 1, Continuity::Discontinuous);
  DgSettings dg_settings;
  dg_settings.krylov = config.krylov;
  const auto dg = solve_dg(dg_space, inst.transport, dg_settings);
  rep.dg = dg.report;
  rep.dg_min_cell_mean = dg.min_cell_mean;
  rep.dg_max_cell_mean = dg.max_cell_mean;
  rep.dg_outflow_flux = dg_outflow_flux(dg.u, b);
  rep.distance_to_dg = l2_error_volume(run.solution, mesh, fe_evaluator(dg.u), config.order + 2);
  std::vector<double> means(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) means[c] = cell_mean(dg.u, c);
  const auto dpath = join_path(config.out_dir, "dg_reference.vtk");
  write_file(dpath, [&](std::ostream& os) { write_vtk_cells(os, mesh, means, "u_dg"); });
  rep.files.push_back(dpath);

  if (inst.exact)
    rep.l2_error_exact = l2_error_volume(run.solution, mesh, analytic_evaluator(*inst.exact), 6);

  const auto spath = join_path(config.out_dir, "summary.txt");
  write_file(spath, [&](std::ostream& os) {
    os << "preset = " << to_string(config.problem.preset) << "\n"
       << "grid = " << n << "\n"
       << "order = " << config.order << "\n"
       << "dofs = " << rep.dofs << "\n"
       << "transport_solver = " << report_line(rep.transport) << "\n"
       << "orthogonality = " << format_double(rep.orthogonality) << "\n"
       << "outflow_flux = " << format_double(rep.outflow_flux) << "\n"
       << "inflow_loading = " << format_double(rep.inflow_loading) << "\n"
       << "min_outflow_trace = " << format_double(rep.min_trace) << "\n";
    if (rep.darcy)
      os << "darcy_solver = " << report_line(*rep.darcy) << "\n"
         << "pressure_range = " << format_double(rep.min_pressure) << " "
         << format_double(rep.max_pressure) << "\n"
         << "mass_imbalance = " << format_double(rep.mass_imbalance) << "\n";
    os << "dg_solver = " << report_line(rep.dg) << "\n"
       << "dg_cell_mean_range = " << format_double(rep.dg_min_cell_mean) << " "
       << format_double(rep.dg_max_cell_mean) << "\n"
       << "dg_outflow_flux = " << format_double(rep.dg_outflow_flux) << "\n"
       << "l2_distance_to_dg = " << format_double(rep.distance_to_dg) << "\n";
    if (rep.l2_error_exact) os << "l2_error_exact = " << format_double(*rep.l2_error_exact) << "\n";
  });
  rep.files.push_back(spath);
  return rep;
}

VoxelField run_voxelize(const RunConfig& config) {
  config.validate();
  ensure_directory(config.out_dir);
  const auto run = solve_on_grid(config, config.grids.front());
  const Mesh& mesh = *run.instance.mesh;
  auto voxels = voxelize(run.solution, config.voxel_factor * mesh.nx(),
                         config.voxel_factor * mesh.ny(), config.order + 2);
  std::vector<std::string> files;
  write_voxels(config.out_dir, voxels, files);
  return voxels;
}

ConvergenceReport run_convergence(const RunConfig& config) {
  config.validate();
  if (config.grids.size() < 3) throw ConfigError("a convergence study needs at least 3 grids");
  ensure_directory(config.out_dir);

  ConvergenceReport report;
  std::optional<ProblemInstance> reference;
  std::optional<DgSolution> reference_dg;
  if (!has_exact_solution(config.problem)) {
    int finest = 0;
    for (int n : config.grids) finest = std::max(finest, n);
    const int nref = finest * config.reference_factor;
    reference = realize(config.problem, nref, config.darcy);
    auto space = std::make_shared<const FeSpace>(reference->mesh, 1, Continuity::Discontinuous);
    DgSettings dg_settings;
    dg_settings.krylov = config.krylov;
    reference_dg = solve_dg(space, reference->transport, dg_settings);
    report.reference = "dg_q1:" + std::to_string(nref);
  } else {
    report.reference = "analytic";
  }

  std::vector<double> hs, errors;
  for (int n : config.grids) {
    ConvergenceRow row;
    row.grid = n;
    row.h = 1.0 / n;
    row.kappa = kNaN;
    try {
      const auto run = solve_on_grid(config, n);
      row.dofs = run.system.space->num_dofs();
      row.iterations = run.solution.report.iterations;
      row.seconds = config.timing ? run.seconds : 0.0;
      if (reference_dg)
        row.l2error = l2_error_volume(run.solution, *reference->mesh, fe_evaluator(reference_dg->u), 3);
      else
        row.l2error = l2_error_volume(run.solution, *run.instance.mesh,
                                      analytic_evaluator(*run.instance.exact), 6);
      if (config.kappa_iterations > 0)
        row.kappa = estimate_condition(run.system.gram, config.kappa_iterations, config.seed,
                                       config.lanczos_tolerance)
                        .kappa;
      hs.push_back(row.h);
      errors.push_back(row.l2error);
    } catch (const SolverError& e) {
      row.failed = true;
      row.message = e.what();
      row.iterations = e.report().iterations;
      row.l2error = kNaN;
    } catch (const NotSpdError& e) {
      row.failed = true;
      row.message = e.what();
      row.l2error = kNaN;
    }
    report.rows.push_back(row);
  }
  report.rate = fit_rate(hs, errors);

  write_file(join_path(config.out_dir, "convergence.csv"),
             [&](std::ostream& os) { write_convergence_csv(os, report); });
  write_file(join_path(config.out_dir, "convergence_meta.txt"), [&](std::ostream& os) {
    os << "preset = " << to_string(config.problem.preset) << "\n"
       << "order = " << config.order << "\n"
       << "reference = " << report.reference << "\n"
       << "tolerance = " << format_double(config.krylov.tolerance) << "\n"
       << "darcy_order = " << config.darcy.order << "\n"
       << "kappa_lanczos_steps = " << config.kappa_iterations << "\n"
       << "lanczos_seed = " << config.seed << "\n"
       << "rate = " << format_or_nan(report.rate) << "\n";
    for (const auto& row : report.rows)
      if (row.failed) os << "failed_grid = " << row.grid << ": " << row.message << "\n";
  });
  return report;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "gridwidth,l2error,dofs,iterations,kappa,seconds\n";
  for (const auto& r : report.rows)
    os << format_double(r.h) << ',' << format_or_nan(r.l2error) << ',' << r.dofs << ','
       << r.iterations << ',' << format_or_nan(r.kappa) << ',' << format_double(r.seconds) << '\n';
}

std::vector<ConvergenceRow> read_convergence_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "gridwidth,l2error,dofs,iterations,kappa,seconds")
    throw ConfigError("unexpected convergence CSV header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ConfigError("malformed convergence CSV row '" + line + "'");
    ConvergenceRow r;
    r.h = parse_double("gridwidth", f[0]);
    r.grid = static_cast<int>(std::lround(1.0 / r.h));
    r.l2error = parse_double("l2error", f[1]);
    r.dofs = parse_int("dofs", f[2]);
    r.iterations = parse_int("iterations", f[3]);
    r.kappa = parse_double("kappa", f[4]);
    r.seconds = parse_double("seconds", f[5]);
    r.failed = std::isnan(r.l2error);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ConditionRow> run_condition_study(const RunConfig& config) {
  config.validate();
  ensure_directory(config.out_dir);
  std::vector<ConditionRow> rows;
  for (int n : config.grids) {
    const auto inst = realize(config.problem, n, config.darcy);
    auto space = std::make_shared<const FeSpace>(inst.mesh, config.order, Continuity::Continuous);
    const auto gram = assemble_gram(*space, {inst.transport.velocity, inst.transport.reaction});
    ConditionRow row{n, 1.0 / n,
                     estimate_condition(gram, config.lanczos_iterations, config.seed,
                                        config.lanczos_tolerance),
                     std::nullopt};
    if (!rows.empty()) row.ratio = row.estimate.kappa / rows.back().estimate.kappa;
    rows.push_back(row);
  }
  write_file(join_path(config.out_dir, "condition.csv"),
             [&](std::ostream& os) { write_condition_csv(os, rows); });
  return rows;
}

void write_condition_csv(std::ostream& os, const std::vector<ConditionRow>& rows) {
  os << "gridwidth,kappa,lambda_min,lambda_max,lanczos_iterations,converged,breakdown,ratio\n";
  for (const auto& r : rows)
    os << format_double(r.h) << ',' << format_double(r.estimate.kappa) << ','
       << format_double(r.estimate.lambda_min) << ',' << format_double(r.estimate.lambda_max)
       << ',' << r.estimate.iterations << ',' << (r.estimate.converged ? 1 : 0) << ','
       << (r.estimate.breakdown ? 1 : 0) << ','
       << (r.ratio ? format_double(*r.ratio) : "") << '\n';
}

}  // namespace uwpg
