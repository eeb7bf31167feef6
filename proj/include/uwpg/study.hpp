#ifndef UWPG_STUDY_HPP
#define UWPG_STUDY_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwpg/problem.hpp"
#include "uwpg/reconstruct.hpp"
#include "uwpg/ultraweak.hpp"

namespace uwpg {

/// Invalid configuration: unknown key, bad value, misaligned grid.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<int> grids{15, 30, 60, 120};
  int order = 1;
  ProblemParams problem;
  SolverSettings krylov{Preconditioner::Ssor, 1e-10, 200000, 1.0};
  DarcySettings darcy;
  std::string out_dir = "out";
  /// Voxels per FE cell and axis.
  int voxel_factor = 4;
  /// The DG reference grid is reference_factor times the finest grid.
  int reference_factor = 4;
  /// Lanczos step limit of the condition study.
  int lanczos_iterations = 3000;
  /// Lanczos step limit for the kappa column of convergence studies; 0
  /// disables that column.
  int kappa_iterations = 200;
  /// Early stop once the extremal Ritz values settle to this relative change.
  double lanczos_tolerance = 1e-6;
  std::uint64_t seed = 20220501;
  /// Record wall times; when off the seconds column is written as 0.
  bool timing = true;

  /// Throws ConfigError for out-of-range values or grids that do not align
  /// with the problem geometry.
  void validate() const;
};

/// Applies key=value settings. The preset is applied first, so the remaining
/// keys override its defaults regardless of their order.
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& settings);

/// Reads a key=value file ('#' starts a comment).
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Parses "2/3", "0.4" or "1".
double parse_fraction(const std::string& text);
/// Parses "in:left:2/3:1;out:right:0:1/3".
BoundaryGeometry parse_segments(const std::string& text);
/// Parses "15,30,60".
std::vector<int> parse_grid_list(const std::string& text);

/// Least-squares slope of log(error) against log(h).
double fit_rate(const std::vector<double>& h, const std::vector<double>& error);

/// Everything produced by one ultraweak solve on one grid.
struct GridSolve {
  ProblemInstance instance;
  NormalEquationSystem system;
  UltraweakSolution solution;
  double seconds = 0.0;
};

GridSolve solve_on_grid(const RunConfig& config, int n);

struct SingleReport {
  int grid = 0;
  int dofs = 0;
  KrylovReport transport;
  double orthogonality = 0.0;
  double outflow_flux = 0.0;
  double inflow_loading = 0.0;
  double min_trace = 0.0;
  std::optional<KrylovReport> darcy;
  double min_pressure = 0.0;
  double max_pressure = 0.0;
  double mass_imbalance = 0.0;
  KrylovReport dg;
  double dg_min_cell_mean = 0.0;
  double dg_max_cell_mean = 0.0;
  double dg_outflow_flux = 0.0;
  double distance_to_dg = 0.0;
  std::optional<double> l2_error_exact;
  std::vector<std::string> files;
};

/// Full pipeline on config.grids.front(): Darcy, ultraweak solve,
/// reconstruction and a DG solve on the same grid. Writes pressure.vtk,
/// velocity_magnitude.vtk, u_voxels.vtk, u_voxels.csv, dg_reference.vtk and
/// summary.txt to the output directory.
SingleReport run_single(const RunConfig& config);

/// Solves on config.grids.front() and writes u_voxels.vtk and u_voxels.csv.
VoxelField run_voxelize(const RunConfig& config);

struct ConvergenceRow {
  int grid = 0;
  double h = 0.0;
  double l2error = 0.0;
  int dofs = 0;
  int iterations = 0;
  double kappa = 0.0;  // NaN when not estimated
  double seconds = 0.0;
  bool failed = false;
  std::string message;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Fitted over the rows that did not fail; NaN with fewer than two.
  double rate = 0.0;
  /// "analytic" or "dg_q1:<n>".
  std::string reference;
};

/// Errors against the closed-form solution when the preset has one, else
/// against a Q1 DG solution on a grid reference_factor times finer than the
/// finest study grid. A grid that fails yields a row with failed = true.
/// Writes convergence.csv and convergence_meta.txt.
ConvergenceReport run_convergence(const RunConfig& config);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);
/// Reads back the rows of write_convergence_csv; throws ConfigError on a
/// header mismatch.
std::vector<ConvergenceRow> read_convergence_csv(std::istream& is);

struct ConditionRow {
  int grid = 0;
  double h = 0.0;
  ConditionEstimate estimate;
  std::optional<double> ratio;  // kappa relative to the previous row
};

/// Lanczos condition estimates of the Gram matrix on every grid. Writes
/// condition.csv.
std::vector<ConditionRow> run_condition_study(const RunConfig& config);

void write_condition_csv(std::ostream& os, const std::vector<ConditionRow>& rows);

}  // namespace uwpg

#endif  // UWPG_STUDY_HPP
