#ifndef UWPG_REFERENCE_DG_HPP
#define UWPG_REFERENCE_DG_HPP

#include <memory>

#include "uwpg/coefficients.hpp"
#include "uwpg/fe.hpp"
#include "uwpg/linalg.hpp"

namespace uwpg {

/// Data of the strong transport problem div(b u) + c u = f, u = g_D on Gamma_-.
struct TransportProblem {
  VelocityField velocity;
  ScalarField reaction;
  ScalarField source;
  BoundaryData inflow;
};

/// Upwind discontinuous Galerkin discretization of the transport problem:
///
///   sum_K  -(u, b.grad v)_K + (c u, v)_K + <(b.nu) u_up, v>_{dK} = (f, v)
///
/// with u_up the upwind trace. On boundary inflow points (b.nu < 0) the
/// upwind value is g_D on In facets and zero elsewhere. Interior facets use
/// the mean of the two one-sided normal velocities, so the scheme is exactly
/// conservative for c = 0.
struct DgSystem {
  CsrMatrix matrix;
  Vector rhs;
};

DgSystem assemble_dg(const FeSpace& space, const TransportProblem& problem, int cell_points = 0,
                     int facet_points = 0);

enum class DgSolver { BiCgStab, DenseLu };

struct DgSettings {
  DgSolver solver = DgSolver::BiCgStab;
  SolverSettings krylov;
  /// Renumber cells along the flow before the Krylov solve.
  bool downwind_ordering = true;
};

struct DgSolution {
  FeFunction u;
  KrylovReport report;
  double min_cell_mean = 0.0;
  double max_cell_mean = 0.0;
};

/// Throws SolverError (see ultraweak.hpp) when the iteration fails.
DgSolution solve_dg(std::shared_ptr<const FeSpace> space, const TransportProblem& problem,
                    const DgSettings& settings = {});

/// Cells sorted so that, as far as the flow graph is acyclic, every cell
/// comes after the cells it receives flux from.
std::vector<int> downwind_order(const Mesh& mesh, const VelocityField& b);

/// Integral of (b.nu) u over the Out boundary, using the interior trace.
double dg_outflow_flux(const FeFunction& u, const VelocityField& b, int q = 4);

/// Mean of u over a cell.
double cell_mean(const FeFunction& u, int cell);

/// P A P^T for the permutation new_index[old] = new.
CsrMatrix permute_symmetric(const CsrMatrix& a, std::span<const int> new_index);

}  // namespace uwpg

#endif  // UWPG_REFERENCE_DG_HPP
