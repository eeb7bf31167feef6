#include "uwpg/reconstruct.hpp"

#include <cmath>

#include "uwpg/quadrature.hpp"

namespace uwpg {

double eval_u(const UltraweakSolution& sol, int cell, const Point& local) {
  return sol.kernel.volume(sol.w, cell, local);
}

double eval_u_at(const UltraweakSolution& sol, const Point& global, const Point& toward) {
  const auto [cell, local] = sol.w.space().mesh().locate(global, toward);
  return eval_u(sol, cell, local);
}

VoxelField voxelize(const UltraweakSolution& sol, int mx, int my, int q) {
  const Mesh& mesh = sol.w.space().mesh();
  if (mx < 1 || my < 1 || mx % mesh.nx() != 0 || my % mesh.ny() != 0)
    throw std::invalid_argument("voxel counts must be positive multiples of the mesh size (" +
                                std::to_string(mesh.nx()) + ", " + std::to_string(mesh.ny()) +
                                ")");
  const auto quad = gauss_rule(q, QuadDomain::Cell);
  const int rx = mx / mesh.nx();
  const int ry = my / mesh.ny();
  VoxelField vf{mx, my, std::vector<double>(static_cast<std::size_t>(mx) * my, 0.0)};
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      const int cell = mesh.cell_index(i / rx, j / ry);
      const int si = i % rx, sj = j % ry;
      double avg = 0.0;
      for (const auto& qp : quad) {
        const Point local{(si + qp.xi[0]) / rx, (sj + qp.xi[1]) / ry};
        avg += qp.weight * eval_u(sol, cell, local);
      }
      vf.values[static_cast<std::size_t>(j) * mx + i] = avg;
    }
  return vf;
}

TraceField outflow_trace(const UltraweakSolution& sol, int q) {
  const Mesh& mesh = sol.w.space().mesh();
  const auto quad =
      gauss_rule(q > 0 ? q : default_facet_points(sol.w.space().order(), sol.kernel),
                 QuadDomain::Facet);
  TraceField tf;
  const auto facets = mesh.boundary_facets();
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    const auto& f = facets[fi];
    if (f.label != BoundaryLabel::Out) continue;
    const double len = mesh.face_length(f.face);
    for (const auto& qp : quad) {
      const Point local = Mesh::face_point(f.face, qp.xi[0]);
      const double bn = sol.kernel.velocity.normal_flux(mesh, f, qp.xi[0]);
      tf.samples.push_back({static_cast<int>(fi), mesh.to_global(f.cell, local),
                            sol.w.value(f.cell, local), std::abs(bn) * qp.weight * len});
    }
  }
  return tf;
}

double qoi_outflow_flux(const UltraweakSolution& sol, int q) {
  double total = 0.0;
  for (const auto& s : outflow_trace(sol, q).samples) total += s.value * s.weight;
  return total;
}

double inflow_loading(const Mesh& mesh, const BoundaryData& inflow, const VelocityField& b,
                      int q) {
  const auto quad = gauss_rule(q, QuadDomain::Facet);
  double total = 0.0;
  for (const auto& f : mesh.boundary_facets()) {
    if (f.label != BoundaryLabel::In) continue;
    double s = 0.0;
    for (const auto& qp : quad)
      s += inflow.eval_gD(mesh, f, qp.xi[0]) * std::abs(b.normal_flux(mesh, f, qp.xi[0])) *
           qp.weight;
    total += s * mesh.face_length(f.face);
  }
  return total;
}

double l2_distance(const Mesh& grid, int q, const GridEvaluator& a, const GridEvaluator& b) {
  const auto quad = gauss_rule(q, QuadDomain::Cell);
  double sum = 0.0;
  for (int c = 0; c < grid.num_cells(); ++c) {
    double cell_sum = 0.0;
    for (const auto& qp : quad) {
      const Point x = grid.to_global(c, qp.xi);
      const double d = a(c, qp.xi, x) - b(c, qp.xi, x);
      cell_sum += qp.weight * d * d;
    }
    sum += cell_sum;
  }
  return std::sqrt(sum * grid.hx() * grid.hy());
}

GridEvaluator volume_evaluator(const UltraweakSolution& sol, const Mesh& grid) {
  const Mesh& own = sol.w.space().mesh();
  if (own.nx() == grid.nx() && own.ny() == grid.ny())
    return [&sol](int cell, const Point& local, const Point&) { return eval_u(sol, cell, local); };
  return [&sol, &grid](int cell, const Point&, const Point& x) {
    return eval_u_at(sol, x, grid.cell_center(cell));
  };
}

GridEvaluator fe_evaluator(const FeFunction& f) {
  return [&f](int cell, const Point& local, const Point&) { return f.value(cell, local); };
}

GridEvaluator analytic_evaluator(std::function<double(const Point&)> f) {
  return [f = std::move(f)](int, const Point&, const Point& x) { return f(x); };
}

double l2_error_volume(const UltraweakSolution& sol, const Mesh& grid,
                       const GridEvaluator& reference, int q) {
  return l2_distance(grid, q, volume_evaluator(sol, grid), reference);
}

double x_norm_error(const UltraweakSolution& sol, int q,
                    const std::function<double(const Point&)>& reference) {
  const Mesh& mesh = sol.w.space().mesh();
  const double vol = l2_error_volume(sol, mesh, analytic_evaluator(reference), q);
  double trace = 0.0;
  for (const auto& s : outflow_trace(sol, q).samples) {
    const double d = s.value - reference(s.position);
    trace += s.weight * d * d;
  }
  return std::sqrt(vol * vol + trace);
}

}  // namespace uwpg
