#include "uwpg/ultraweak.hpp"

#include <algorithm>
#include <cmath>

#include "uwpg/quadrature.hpp"

namespace uwpg {

double AdjointKernel::volume(const FeFunction& v, int cell, const Point& local) const {
  const Mesh& mesh = v.space().mesh();
  return volume(velocity(mesh, cell, local), reaction(mesh, cell, local), v.value(cell, local),
                v.gradient(cell, local));
}

int default_cell_points(int order, const AdjointKernel& kernel) {
  int q = order + 1 + kernel.velocity.degree();
  if (!kernel.reaction.is_piecewise_constant()) q += 2;
  return std::min(q, 10);
}

int default_facet_points(int order, const AdjointKernel& kernel) {
  return std::min(order + 2 + kernel.velocity.degree(), 10);
}

CsrMatrix assemble_gram(const FeSpace& space, const AdjointKernel& kernel,
                        const AssemblyOptions& options) {
  if (space.descriptor().continuity != Continuity::Continuous)
    throw std::invalid_argument("the test space must be continuous");
  const Mesh& mesh = space.mesh();
  kernel.reaction.check_aligned(mesh);
  const int order = space.order();
  const int nloc = space.local_count();
  const auto cell_quad = gauss_rule(
      options.cell_points > 0 ? options.cell_points : default_cell_points(order, kernel),
      QuadDomain::Cell);
  const auto facet_quad = gauss_rule(
      options.facet_points > 0 ? options.facet_points : default_facet_points(order, kernel),
      QuadDomain::Facet);

  PatternBuilder pattern(space.num_dofs());
  for (int c = 0; c < mesh.num_cells(); ++c) pattern.add_block(space.dofs(c), space.dofs(c));
  CsrMatrix gram = pattern.build();

  // Basis tables are the same for every cell.
  std::vector<BasisEval> cell_basis;
  for (const auto& qp : cell_quad) cell_basis.push_back(eval_basis(order, qp.xi));

  const double hx = mesh.hx(), hy = mesh.hy();
  const double det = hx * hy;
  std::array<double, kMaxLocalDofs * kMaxLocalDofs> local{};
  std::array<double, kMaxLocalDofs> adj{};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    local.fill(0.0);
    for (std::size_t q = 0; q < cell_quad.size(); ++q) {
      const auto& qp = cell_quad.points[q];
      const auto& basis = cell_basis[q];
      const Vec2 b = kernel.velocity(mesh, c, qp.xi);
      const double react = kernel.reaction(mesh, c, qp.xi);
      for (int i = 0; i < nloc; ++i)
        adj[i] = kernel.volume(b, react, basis.values[i],
                               {basis.grads[i][0] / hx, basis.grads[i][1] / hy});
      const double w = qp.weight * det;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j <= i; ++j) local[i * nloc + j] += w * adj[i] * adj[j];
    }
    const auto dofs = space.dofs(c);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        gram.add(dofs[i], dofs[j], j <= i ? local[i * nloc + j] : local[j * nloc + i]);
  }

  // Outflow trace pairing.
  for (const auto& f : mesh.boundary_facets()) {
    if (f.label != BoundaryLabel::Out) continue;
    local.fill(0.0);
    const double len = mesh.face_length(f.face);
    for (const auto& qp : facet_quad) {
      const auto basis = eval_basis(order, Mesh::face_point(f.face, qp.xi[0]));
      const double w = std::abs(kernel.velocity.normal_flux(mesh, f, qp.xi[0])) * qp.weight * len;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j <= i; ++j) local[i * nloc + j] += w * basis.values[i] * basis.values[j];
    }
    const auto dofs = space.dofs(f.cell);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        gram.add(dofs[i], dofs[j], j <= i ? local[i * nloc + j] : local[j * nloc + i]);
  }
  return gram;
}

Vector assemble_rhs(const FeSpace& space, const ScalarField& source, const BoundaryData& inflow,
                    const VelocityField& velocity, const AssemblyOptions& options) {
  const Mesh& mesh = space.mesh();
  const int order = space.order();
  const int nloc = space.local_count();
  Vector rhs(space.num_dofs(), 0.0);

  const bool zero_source = source.is_constant() && source.at({0.0, 0.0}) == 0.0;
  if (!zero_source) {
    int q = options.cell_points > 0 ? options.cell_points : order + 1;
    if (!source.is_piecewise_constant()) q = std::min(q + 2, 10);
    const auto quad = gauss_rule(q, QuadDomain::Cell);
    const double det = mesh.hx() * mesh.hy();
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const auto dofs = space.dofs(c);
      for (const auto& qp : quad) {
        const auto basis = eval_basis(order, qp.xi);
        const double w = source(mesh, c, qp.xi) * qp.weight * det;
        for (int i = 0; i < nloc; ++i) rhs[dofs[i]] += w * basis.values[i];
      }
    }
  }

  const int fq = options.facet_points > 0 ? options.facet_points
                                          : std::min(order + 2 + velocity.degree(), 10);
  const auto facet_quad = gauss_rule(fq, QuadDomain::Facet);
  for (const auto& f : mesh.boundary_facets()) {
    if (f.label != BoundaryLabel::In) continue;
    const double len = mesh.face_length(f.face);
    const auto dofs = space.dofs(f.cell);
    for (const auto& qp : facet_quad) {
      const auto basis = eval_basis(order, Mesh::face_point(f.face, qp.xi[0]));
      const double w = inflow.eval_gD(mesh, f, qp.xi[0]) *
                       std::abs(velocity.normal_flux(mesh, f, qp.xi[0])) * qp.weight * len;
      for (int i = 0; i < nloc; ++i) rhs[dofs[i]] += w * basis.values[i];
    }
  }
  return rhs;
}

NormalEquationSystem assemble_normal_equation(std::shared_ptr<const FeSpace> space,
                                              AdjointKernel kernel, const ScalarField& source,
                                              const BoundaryData& inflow,
                                              const AssemblyOptions& options) {
  auto gram = assemble_gram(*space, kernel, options);
  auto rhs = assemble_rhs(*space, source, inflow, kernel.velocity, options);
  return {std::move(space), std::move(kernel), std::move(gram), std::move(rhs)};
}

UltraweakSolution solve_ultraweak(const NormalEquationSystem& system,
                                  const UltraweakSettings& settings) {
  if (settings.solver == LinearSolver::DenseLu) {
    auto x = dense_solve(system.gram, system.rhs);
    UltraweakSolution sol{FeFunction(system.space, std::move(x)), system.kernel, {}};
    const auto gw = system.gram * sol.w.coefficients();
    Vector r(gw.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = system.rhs[i] - gw[i];
    const double bn = norm2(system.rhs);
    sol.report.relative_residual = bn > 0.0 ? norm2(r) / bn : 0.0;
    sol.report.converged = true;
    return sol;
  }
  auto result = cg_solve(system.gram, system.rhs, settings.krylov);
  if (!result.report.converged)
    throw SolverError("normal equation solve did not converge in " +
                          std::to_string(result.report.iterations) + " iterations",
                      result.report);
  return {FeFunction(system.space, std::move(result.x)), system.kernel, result.report};
}

double check_orthogonality(const NormalEquationSystem& system, const UltraweakSolution& sol) {
  const double fn = norm2(system.rhs);
  if (fn == 0.0) return 0.0;
  const auto gw = system.gram * sol.w.coefficients();
  double worst = 0.0;
  for (std::size_t i = 0; i < gw.size(); ++i)
    worst = std::max(worst, std::abs(system.rhs[i] - gw[i]));
  return worst / fn;
}

}  // namespace uwpg
