#ifndef UWPG_ULTRAWEAK_HPP
#define UWPG_ULTRAWEAK_HPP

#include <memory>

#include "uwpg/coefficients.hpp"
#include "uwpg/fe.hpp"
#include "uwpg/linalg.hpp"

namespace uwpg {

/// The formal adjoint of v -> div(b u) + c u, paired with the trial space
/// L2(Omega) x L2(Gamma_+, |b.nu|):
///
///   A*[v] = ( -b . grad v + c v ,  v restricted to Gamma_+ ).
///
/// Gamma_+ is the Out boundary and Gamma_- the In boundary; Wall facets carry
/// no boundary terms since b.nu vanishes there.
struct AdjointKernel {
  VelocityField velocity;
  ScalarField reaction;

  /// Volume component (A*v)(x) at a point of a cell.
  double volume(const FeFunction& v, int cell, const Point& local) const;
  /// Volume component for a single basis function given its value and
  /// physical gradient.
  double volume(const Vec2& b, double c, double value, const Vec2& grad) const {
    return -(b[0] * grad[0] + b[1] * grad[1]) + c * value;
  }
};

/// Quadrature points per axis; zero selects the default for the data.
struct AssemblyOptions {
  int cell_points = 0;
  int facet_points = 0;
};

/// Defaults: order + 1 points per axis for constant coefficients, raised by
/// the per-axis degree of b (and by 2 for non-polynomial reaction data).
int default_cell_points(int order, const AdjointKernel& kernel);
int default_facet_points(int order, const AdjointKernel& kernel);

/// G_ij = (A*psi_i, A*psi_j)_{L2(Omega)} + (psi_i, psi_j)_{L2(Gamma_+, |b.nu|)},
/// assembled directly from the integrand; no matrix for A* alone is formed.
/// Each local pair is computed once and mirrored, so G is exactly symmetric.
CsrMatrix assemble_gram(const FeSpace& space, const AdjointKernel& kernel,
                        const AssemblyOptions& options = {});

/// f_i = (f, psi_i)_{L2(Omega)} + (g_D, psi_i)_{L2(Gamma_-, |b.nu|)}.
Vector assemble_rhs(const FeSpace& space, const ScalarField& source, const BoundaryData& inflow,
                    const VelocityField& velocity, const AssemblyOptions& options = {});

struct NormalEquationSystem {
  std::shared_ptr<const FeSpace> space;
  AdjointKernel kernel;
  CsrMatrix gram;
  Vector rhs;
};

NormalEquationSystem assemble_normal_equation(std::shared_ptr<const FeSpace> space,
                                              AdjointKernel kernel, const ScalarField& source,
                                              const BoundaryData& inflow,
                                              const AssemblyOptions& options = {});

enum class LinearSolver { Cg, DenseLu };

struct UltraweakSettings {
  LinearSolver solver = LinearSolver::Cg;
  SolverSettings krylov;
};

/// Test-space solution w together with what is needed to evaluate the
/// reconstruction u = A*[w] anywhere.
struct UltraweakSolution {
  FeFunction w;
  AdjointKernel kernel;
  KrylovReport report;
};

/// Throws SolverError when the iteration does not converge.
UltraweakSolution solve_ultraweak(const NormalEquationSystem& system,
                                  const UltraweakSettings& settings = {});

/// max_i |f_i - (G w)_i| / ||f||_2, or 0 for a zero right-hand side.
double check_orthogonality(const NormalEquationSystem& system, const UltraweakSolution& sol);

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, KrylovReport report)
      : std::runtime_error(what), report_(report) {}
  const KrylovReport& report() const { return report_; }

private:
  KrylovReport report_;
};

}  // namespace uwpg

#endif  // UWPG_ULTRAWEAK_HPP
