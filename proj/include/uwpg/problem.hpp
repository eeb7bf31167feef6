#ifndef UWPG_PROBLEM_HPP
#define UWPG_PROBLEM_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "uwpg/coefficients.hpp"
#include "uwpg/darcy.hpp"
#include "uwpg/mesh.hpp"
#include "uwpg/reference_dg.hpp"

namespace uwpg {

enum class Preset { CatalyticFilter, Channel, Manufactured1D, Custom };

Preset parse_preset(const std::string& name);
std::string to_string(Preset preset);

/// Inflow profile: sin(a pi z)^2 or a constant.
struct InflowProfile {
  enum class Kind { Sin2, Constant } kind = Kind::Sin2;
  double parameter = 3.0;

  std::function<double(double)> function() const;
  /// Parses "sin2:<a>" or "const:<v>".
  static InflowProfile parse(const std::string& text);
  std::string to_string() const;
};

/// Physical parameters of a run. Presets fill these; Custom takes them as
/// given.
struct ProblemParams {
  Preset preset = Preset::CatalyticFilter;
  double k_min = 0.1;
  double c0 = 0.5;
  Box reaction_box{0.0, 1.0, 0.4, 0.6};
  BoundaryGeometry geometry = BoundaryGeometry::catalytic_filter();
  InflowProfile inflow;
  /// Velocity from a Darcy solve (true) or the uniform field (1, 0).
  bool darcy_velocity = true;
  /// Use the reaction box for k and c (false: k = 1, c = c0 everywhere).
  bool heterogeneous = true;

  static ProblemParams for_preset(Preset preset);
};

/// Exact solution u of the 1D manufactured problem u' + u = 0, u(0) = 1.
double manufactured_u(double x);
/// Exact test-space solution w of the same problem, with u = -w' + w.
double manufactured_w(double x);

/// A problem realized on one grid: mesh, (optional) pressure, transport data.
struct ProblemInstance {
  std::shared_ptr<const Mesh> mesh;
  std::optional<PressureSolution> pressure;
  TransportProblem transport;
  std::optional<std::function<double(const Point&)>> exact;
};

struct DarcySettings {
  int order = 2;
  SolverSettings krylov{Preconditioner::Ssor, 1e-12, 100000, 1.0};
};

/// True for the presets with a closed-form solution: Manufactured1D, and
/// Channel without reaction and with constant inflow.
bool has_exact_solution(const ProblemParams& params);

/// Grid size n gives an n-by-n mesh, except for Manufactured1D (n-by-1).
ProblemInstance realize(const ProblemParams& params, int n, const DarcySettings& darcy);

}  // namespace uwpg

#endif  // UWPG_PROBLEM_HPP
