#ifndef UWPG_RECONSTRUCT_HPP
#define UWPG_RECONSTRUCT_HPP

#include <functional>
#include <vector>

#include "uwpg/ultraweak.hpp"

namespace uwpg {

// The reconstruction u = A*[w] is never projected onto a trial space. It is
// only ever evaluated: pointwise, by voxel averages, or as the outflow trace.
// The volume part is an L2-type approximation; its gradient carries no
// approximation guarantee and nothing here differentiates it.

/// Volume part -b . grad w + c w at a point of a cell of the solution mesh.
double eval_u(const UltraweakSolution& sol, int cell, const Point& local);

/// Volume part at a global point. `toward` resolves points on grid lines.
double eval_u_at(const UltraweakSolution& sol, const Point& global, const Point& toward);

/// Cell averages of the volume part on an mx-by-my voxel grid; mx and my
/// must be multiples of the solution mesh dimensions.
struct VoxelField {
  int mx = 0;
  int my = 0;
  std::vector<double> values;  // row-major, index j*mx + i

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * mx + i]; }
  Point center(int i, int j) const { return {(i + 0.5) / mx, (j + 0.5) / my}; }
};

/// Throws std::invalid_argument for non-divisible voxel counts.
VoxelField voxelize(const UltraweakSolution& sol, int mx, int my, int q);

/// Outflow component u_hat = w on Gamma_+, sampled at facet quadrature points.
struct TraceSample {
  int facet;  // index into Mesh::boundary_facets()
  Point position;
  double value;
  double weight;  // |b.nu| * quadrature weight * facet length
};

struct TraceField {
  std::vector<TraceSample> samples;
};

TraceField outflow_trace(const UltraweakSolution& sol, int q = 0);

/// Integral of u_hat |b.nu| over Gamma_+.
double qoi_outflow_flux(const UltraweakSolution& sol, int q = 0);

/// Integral of g_D |b.nu| over Gamma_-.
double inflow_loading(const Mesh& mesh, const BoundaryData& inflow, const VelocityField& b,
                      int q = 6);

/// Field evaluator on a common grid: value at (cell, local, global).
using GridEvaluator = std::function<double(int cell, const Point& local, const Point& global)>;

/// L2(Omega) distance of two fields by q-point Gauss quadrature on the cells
/// of `grid`.
double l2_distance(const Mesh& grid, int q, const GridEvaluator& a, const GridEvaluator& b);

/// Evaluator of the volume part of u on a grid that nests the solution mesh
/// (or coincides with it).
GridEvaluator volume_evaluator(const UltraweakSolution& sol, const Mesh& grid);

/// Evaluator of an FE function defined on `grid` itself.
GridEvaluator fe_evaluator(const FeFunction& f);

/// Evaluator of a closed-form function of the global point.
GridEvaluator analytic_evaluator(std::function<double(const Point&)> f);

/// ||pr_L2(u) - reference||_{L2(Omega)} on the reference's grid.
double l2_error_volume(const UltraweakSolution& sol, const Mesh& grid,
                       const GridEvaluator& reference, int q);

/// Combined trial norm distance sqrt(||u - u_ref||^2 + ||u_hat - u_hat_ref||^2_{Gamma_+})
/// against a closed-form reference that supplies both components.
double x_norm_error(const UltraweakSolution& sol, int q,
                    const std::function<double(const Point&)>& reference);

}  // namespace uwpg

#endif  // UWPG_RECONSTRUCT_HPP
