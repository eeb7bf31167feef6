#include "uwpg/darcy.hpp"

#include <algorithm>
#include <cmath>

#include "uwpg/quadrature.hpp"

namespace uwpg {

namespace {

/// Dofs whose Lagrange node lies on a facet with the given label.
void mark_facet_dofs(const FeSpace& space, const Facet& f, double value,
                     std::vector<char>& mask, Vector& values) {
  const int p = space.order();
  const int n1 = p + 1;
  const auto dofs = space.dofs(f.cell);
  for (int jy = 0; jy < n1; ++jy)
    for (int ix = 0; ix < n1; ++ix) {
      const bool on_face = (f.face == 0 && ix == 0) || (f.face == 1 && ix == p) ||
                           (f.face == 2 && jy == 0) || (f.face == 3 && jy == p);
      if (!on_face) continue;
      const int d = dofs[jy * n1 + ix];
      mask[d] = 1;
      values[d] = value;
    }
}

}  // namespace

DarcySystem assemble_darcy(const FeSpace& space, const ScalarField& k) {
  if (space.descriptor().continuity != Continuity::Continuous)
    throw std::invalid_argument("Darcy pressure needs a continuous space");
  const Mesh& mesh = space.mesh();
  k.check_aligned(mesh);
  const int n = space.num_dofs();
  const int nloc = space.local_count();

  PatternBuilder pattern(n);
  for (int c = 0; c < mesh.num_cells(); ++c) pattern.add_block(space.dofs(c), space.dofs(c));
  DarcySystem sys{pattern.build(), Vector(n, 0.0), std::vector<char>(n, 0), Vector(n, 0.0)};

  const auto quad = gauss_rule(space.order() + 1, QuadDomain::Cell);
  const double hx = mesh.hx(), hy = mesh.hy();
  std::array<double, kMaxLocalDofs * kMaxLocalDofs> local{};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    local.fill(0.0);
    for (const auto& qp : quad) {
      const auto basis = eval_basis(space.order(), qp.xi);
      const double kw = k(mesh, c, qp.xi) * qp.weight * hx * hy;
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j <= i; ++j) {
          const double gi0 = basis.grads[i][0] / hx, gi1 = basis.grads[i][1] / hy;
          const double gj0 = basis.grads[j][0] / hx, gj1 = basis.grads[j][1] / hy;
          local[i * nloc + j] += kw * (gi0 * gj0 + gi1 * gj1);
        }
    }
    const auto dofs = space.dofs(c);
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) {
        const double v = j <= i ? local[i * nloc + j] : local[j * nloc + i];
        sys.matrix.add(dofs[i], dofs[j], v);
      }
  }

  // In and Out segments sit on opposite sides and never share a node.
  for (const auto& f : mesh.boundary_facets())
    if (f.label == BoundaryLabel::In) mark_facet_dofs(space, f, 1.0, sys.is_dirichlet, sys.dirichlet_values);
  for (const auto& f : mesh.boundary_facets())
    if (f.label == BoundaryLabel::Out) mark_facet_dofs(space, f, 0.0, sys.is_dirichlet, sys.dirichlet_values);

  // Lift and eliminate.
  for (int i = 0; i < n; ++i) {
    const auto cols = sys.matrix.row_cols(i);
    auto vals = sys.matrix.row_vals(i);
    if (sys.is_dirichlet[i]) {
      for (std::size_t q = 0; q < cols.size(); ++q) vals[q] = cols[q] == i ? 1.0 : 0.0;
      sys.rhs[i] = sys.dirichlet_values[i];
      continue;
    }
    for (std::size_t q = 0; q < cols.size(); ++q)
      if (sys.is_dirichlet[cols[q]]) {
        sys.rhs[i] -= vals[q] * sys.dirichlet_values[cols[q]];
        vals[q] = 0.0;
      }
  }
  return sys;
}

PressureSolution solve_pressure(std::shared_ptr<const FeSpace> space, const ScalarField& k,
                                const SolverSettings& settings) {
  auto sys = assemble_darcy(*space, k);
  // Start from the Dirichlet lift; free dofs begin at the mean boundary value.
  Vector x0(sys.dirichlet_values.size(), 0.5);
  for (std::size_t i = 0; i < x0.size(); ++i)
    if (sys.is_dirichlet[i]) x0[i] = sys.dirichlet_values[i];
  auto result = cg_solve(sys.matrix, sys.rhs, settings, x0);
  PressureSolution sol{std::make_shared<FeFunction>(space, std::move(result.x)), k,
                       result.report};
  const auto c = sol.pressure->coefficients();
  sol.min_pressure = *std::min_element(c.begin(), c.end());
  sol.max_pressure = *std::max_element(c.begin(), c.end());
  return sol;
}

MassBalance mass_balance(const PressureSolution& sol) {
  const Mesh& mesh = sol.pressure->space().mesh();
  const auto b = sol.velocity();
  const auto quad = gauss_rule(sol.pressure->space().order() + 2, QuadDomain::Facet);
  MassBalance mb;
  for (const auto& f : mesh.boundary_facets()) {
    if (f.label == BoundaryLabel::Wall) continue;
    double flux = 0.0;
    for (const auto& qp : quad) flux += b.normal_flux(mesh, f, qp.xi[0]) * qp.weight;
    flux *= mesh.face_length(f.face);
    if (f.label == BoundaryLabel::In) mb.flux_in -= flux;
    else mb.flux_out += flux;
  }
  const double scale = std::max(std::abs(mb.flux_in), std::abs(mb.flux_out));
  mb.imbalance = scale > 0.0 ? std::abs(mb.flux_in - mb.flux_out) / scale : 0.0;
  return mb;
}

double darcy_energy(const PressureSolution& sol) {
  const auto& p = *sol.pressure;
  const Mesh& mesh = p.space().mesh();
  const auto quad = gauss_rule(p.space().order() + 1, QuadDomain::Cell);
  double e = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (const auto& qp : quad) {
      const auto g = p.gradient(c, qp.xi);
      e += sol.permeability(mesh, c, qp.xi) * (g[0] * g[0] + g[1] * g[1]) * qp.weight;
    }
  return e * mesh.hx() * mesh.hy();
}

}  // namespace uwpg
