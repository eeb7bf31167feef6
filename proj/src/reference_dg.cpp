#include "uwpg/reference_dg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "uwpg/quadrature.hpp"
#include "uwpg/ultraweak.hpp"

namespace uwpg {

namespace {

int neighbor_face(int face) { return face == 1 ? 0 : 2; }

}  // namespace

DgSystem assemble_dg(const FeSpace& space, const TransportProblem& problem, int cell_points,
                     int facet_points) {
  if (space.descriptor().continuity != Continuity::Discontinuous)
    throw std::invalid_argument("the DG reference needs a discontinuous space");
  const Mesh& mesh = space.mesh();
  problem.reaction.check_aligned(mesh);
  const int order = space.order();
  const int nloc = space.local_count();
  const auto& b = problem.velocity;
  const int vdeg = b.degree();
  const auto cell_quad = gauss_rule(cell_points > 0 ? cell_points : std::min(order + 1 + vdeg, 10),
                                    QuadDomain::Cell);
  const auto facet_quad = gauss_rule(
      facet_points > 0 ? facet_points : std::min(order + 2 + vdeg, 10), QuadDomain::Facet);

  PatternBuilder pattern(space.num_dofs());
  for (int c = 0; c < mesh.num_cells(); ++c) pattern.add_block(space.dofs(c), space.dofs(c));
  for (const auto& f : mesh.interior_facets()) {
    pattern.add_block(space.dofs(f.cell), space.dofs(f.neighbor));
    pattern.add_block(space.dofs(f.neighbor), space.dofs(f.cell));
  }
  DgSystem sys{pattern.build(), Vector(space.num_dofs(), 0.0)};

  const double hx = mesh.hx(), hy = mesh.hy();
  const double det = hx * hy;
  std::array<double, kMaxLocalDofs * kMaxLocalDofs> local{};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    local.fill(0.0);
    const auto dofs = space.dofs(c);
    for (const auto& qp : cell_quad) {
      const auto basis = eval_basis(order, qp.xi);
      const Vec2 bv = b(mesh, c, qp.xi);
      const double react = problem.reaction(mesh, c, qp.xi);
      const double f = problem.source(mesh, c, qp.xi);
      const double w = qp.weight * det;
      for (int i = 0; i < nloc; ++i) {  // test
        const double bgrad = bv[0] * basis.grads[i][0] / hx + bv[1] * basis.grads[i][1] / hy;
        for (int j = 0; j < nloc; ++j)  // trial
          local[i * nloc + j] += w * basis.values[j] * (-bgrad + react * basis.values[i]);
        sys.rhs[dofs[i]] += w * f * basis.values[i];
      }
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) sys.matrix.add(dofs[i], dofs[j], local[i * nloc + j]);
  }

  for (const auto& f : mesh.interior_facets()) {
    const double len = mesh.face_length(f.face);
    const auto dk = space.dofs(f.cell);
    const auto dn = space.dofs(f.neighbor);
    for (const auto& qp : facet_quad) {
      const double t = qp.xi[0];
      const double bn = 0.5 * (b.normal_flux(mesh, f, t) + b.normal_flux_from_neighbor(mesh, f, t));
      const auto bk = eval_basis(order, Mesh::face_point(f.face, t));
      const auto bnb = eval_basis(order, Mesh::face_point(neighbor_face(f.face), t));
      const double w = bn * qp.weight * len;
      const bool from_owner = bn >= 0.0;
      const auto& up = from_owner ? bk : bnb;
      const auto up_dofs = from_owner ? dk : dn;
      for (int j = 0; j < nloc; ++j) {
        if (up.values[j] == 0.0) continue;
        for (int i = 0; i < nloc; ++i) {
          sys.matrix.add(dk[i], up_dofs[j], w * up.values[j] * bk.values[i]);
          sys.matrix.add(dn[i], up_dofs[j], -w * up.values[j] * bnb.values[i]);
        }
      }
    }
  }

  for (const auto& f : mesh.boundary_facets()) {
    const double len = mesh.face_length(f.face);
    const auto dk = space.dofs(f.cell);
    for (const auto& qp : facet_quad) {
      const double t = qp.xi[0];
      const double bn = b.normal_flux(mesh, f, t);
      const auto bk = eval_basis(order, Mesh::face_point(f.face, t));
      const double w = bn * qp.weight * len;
      if (bn > 0.0) {
        for (int i = 0; i < nloc; ++i)
          for (int j = 0; j < nloc; ++j)
            sys.matrix.add(dk[i], dk[j], w * bk.values[j] * bk.values[i]);
      } else if (f.label == BoundaryLabel::In) {
        const double g = problem.inflow.eval_gD(mesh, f, t);
        for (int i = 0; i < nloc; ++i) sys.rhs[dk[i]] -= w * g * bk.values[i];
      }
    }
  }
  return sys;
}

std::vector<int> downwind_order(const Mesh& mesh, const VelocityField& b) {
  const int n = mesh.num_cells();
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  const auto quad = gauss_rule(2, QuadDomain::Facet);
  for (const auto& f : mesh.interior_facets()) {
    double flux = 0.0;
    for (const auto& qp : quad)
      flux += qp.weight *
              (b.normal_flux(mesh, f, qp.xi[0]) + b.normal_flux_from_neighbor(mesh, f, qp.xi[0]));
    if (flux > 0.0) {
      out[f.cell].push_back(f.neighbor);
      ++indeg[f.neighbor];
    } else if (flux < 0.0) {
      out[f.neighbor].push_back(f.cell);
      ++indeg[f.cell];
    }
  }
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> done(n, 0);
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int c = 0; c < n; ++c)
    if (indeg[c] == 0) ready.push(c);
  int scan = 0;
  while (static_cast<int>(order.size()) < n) {
    if (ready.empty()) {
      // Cycle: release the lowest-index cell still waiting.
      while (done[scan]) ++scan;
      indeg[scan] = 0;
      ready.push(scan);
    }
    const int c = ready.top();
    ready.pop();
    if (done[c]) continue;
    done[c] = 1;
    order.push_back(c);
    for (int m : out[c])
      if (!done[m] && --indeg[m] == 0) ready.push(m);
  }
  return order;
}

CsrMatrix permute_symmetric(const CsrMatrix& a, std::span<const int> new_index) {
  const int n = a.rows();
  std::vector<int> old_of(n);
  for (int i = 0; i < n; ++i) old_of[new_index[i]] = i;
  std::vector<int> ptr(n + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz());
  vals.reserve(a.nnz());
  std::vector<std::pair<int, double>> row;
  for (int r = 0; r < n; ++r) {
    const int old = old_of[r];
    const auto c = a.row_cols(old);
    const auto v = a.row_vals(old);
    row.clear();
    for (std::size_t k = 0; k < c.size(); ++k) row.emplace_back(new_index[c[k]], v[k]);
    std::sort(row.begin(), row.end());
    for (const auto& [j, x] : row) {
      cols.push_back(j);
      vals.push_back(x);
    }
    ptr[r + 1] = static_cast<int>(cols.size());
  }
  return CsrMatrix(n, std::move(ptr), std::move(cols), std::move(vals));
}

double cell_mean(const FeFunction& u, int cell) {
  const auto quad = gauss_rule(u.space().order() + 1, QuadDomain::Cell);
  double s = 0.0;
  for (const auto& qp : quad) s += qp.weight * u.value(cell, qp.xi);
  return s;
}

DgSolution solve_dg(std::shared_ptr<const FeSpace> space, const TransportProblem& problem,
                    const DgSettings& settings) {
  auto sys = assemble_dg(*space, problem);
  const Mesh& mesh = space->mesh();
  Vector x;
  KrylovReport report;
  if (settings.solver == DgSolver::DenseLu) {
    x = dense_solve(sys.matrix, sys.rhs);
    report.converged = true;
  } else if (settings.downwind_ordering) {
    const auto cells = downwind_order(mesh, problem.velocity);
    const int nloc = space->local_count();
    std::vector<int> new_index(space->num_dofs());
    for (int pos = 0; pos < static_cast<int>(cells.size()); ++pos) {
      const auto dofs = space->dofs(cells[pos]);
      for (int k = 0; k < nloc; ++k) new_index[dofs[k]] = pos * nloc + k;
    }
    const auto pa = permute_symmetric(sys.matrix, new_index);
    Vector prhs(sys.rhs.size());
    for (std::size_t i = 0; i < prhs.size(); ++i) prhs[new_index[i]] = sys.rhs[i];
    auto krylov = settings.krylov;
    krylov.block_size = nloc;
    auto res = bicgstab_solve(pa, prhs, krylov);
    report = res.report;
    x.resize(res.x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = res.x[new_index[i]];
  } else {
    auto krylov = settings.krylov;
    krylov.block_size = space->local_count();
    auto res = bicgstab_solve(sys.matrix, sys.rhs, krylov);
    report = res.report;
    x = std::move(res.x);
  }
  if (!report.converged)
    throw SolverError("DG solve did not converge in " + std::to_string(report.iterations) +
                          " iterations",
                      report);

  DgSolution sol{FeFunction(std::move(space), std::move(x)), report, 0.0, 0.0};
  sol.min_cell_mean = std::numeric_limits<double>::max();
  sol.max_cell_mean = std::numeric_limits<double>::lowest();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double m = cell_mean(sol.u, c);
    sol.min_cell_mean = std::min(sol.min_cell_mean, m);
    sol.max_cell_mean = std::max(sol.max_cell_mean, m);
  }
  return sol;
}

double dg_outflow_flux(const FeFunction& u, const VelocityField& b, int q) {
  const Mesh& mesh = u.space().mesh();
  const auto quad = gauss_rule(q, QuadDomain::Facet);
  double total = 0.0;
  for (const auto& f : mesh.boundary_facets()) {
    if (f.label != BoundaryLabel::Out) continue;
    double s = 0.0;
    for (const auto& qp : quad)
      s += qp.weight * b.normal_flux(mesh, f, qp.xi[0]) *
           u.value(f.cell, Mesh::face_point(f.face, qp.xi[0]));
    total += s * mesh.face_length(f.face);
  }
  return total;
}

}  // namespace uwpg
