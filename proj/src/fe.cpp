#include "uwpg/fe.hpp"

#include <stdexcept>

namespace uwpg {

namespace {

// 1D Lagrange polynomials on equispaced nodes of [0,1] and their derivatives.
void lagrange_1d(int order, double t, double* val, double* der) {
  if (order == 1) {
    val[0] = 1.0 - t;
    val[1] = t;
    der[0] = -1.0;
    der[1] = 1.0;
  } else {
    val[0] = 2.0 * (t - 0.5) * (t - 1.0);
    val[1] = -4.0 * t * (t - 1.0);
    val[2] = 2.0 * t * (t - 0.5);
    der[0] = 4.0 * t - 3.0;
    der[1] = -8.0 * t + 4.0;
    der[2] = 4.0 * t - 1.0;
  }
}

void check_order(int order) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("Lagrange order must be 1 or 2, got " + std::to_string(order));
}

}  // namespace

BasisEval eval_basis(int order, const Point& local) {
  check_order(order);
  double vx[3], dx[3], vy[3], dy[3];
  lagrange_1d(order, local[0], vx, dx);
  lagrange_1d(order, local[1], vy, dy);
  BasisEval out;
  const int n1 = order + 1;
  out.count = n1 * n1;
  for (int jy = 0; jy < n1; ++jy)
    for (int ix = 0; ix < n1; ++ix) {
      const int k = jy * n1 + ix;
      out.values[k] = vx[ix] * vy[jy];
      out.grads[k] = {dx[ix] * vy[jy], vx[ix] * dy[jy]};
    }
  return out;
}

int count_dofs(int nx, int ny, int order, Continuity continuity) {
  if (continuity == Continuity::Continuous) return (order * nx + 1) * (order * ny + 1);
  return nx * ny * (order + 1) * (order + 1);
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int order, Continuity continuity)
    : mesh_(std::move(mesh)) {
  check_order(order);
  const int nx = mesh_->nx();
  const int ny = mesh_->ny();
  desc_ = {order, continuity, count_dofs(nx, ny, order, continuity)};
  const int n1 = order + 1;
  const int nloc = n1 * n1;
  dofs_.resize(static_cast<std::size_t>(mesh_->num_cells()) * nloc);
  nodes_.resize(desc_.num_dofs);
  const int row = order * nx + 1;
  for (int cell = 0; cell < mesh_->num_cells(); ++cell) {
    const auto [i, j] = mesh_->cell_ij(cell);
    for (int jy = 0; jy < n1; ++jy)
      for (int ix = 0; ix < n1; ++ix) {
        const int k = jy * n1 + ix;
        const int g = continuity == Continuity::Continuous
                          ? (order * j + jy) * row + (order * i + ix)
                          : cell * nloc + k;
        dofs_[static_cast<std::size_t>(cell) * nloc + k] = g;
        nodes_[g] = mesh_->to_global(cell, {double(ix) / order, double(jy) / order});
      }
  }
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coeffs_(space_->num_dofs(), 0.0) {}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != space_->num_dofs())
    throw std::invalid_argument("coefficient vector does not match the space dimension");
}

double FeFunction::value(int cell, const Point& local) const {
  const auto basis = eval_basis(space_->order(), local);
  const auto dofs = space_->dofs(cell);
  double v = 0.0;
  for (int k = 0; k < basis.count; ++k) v += coeffs_[dofs[k]] * basis.values[k];
  return v;
}

std::array<double, 2> FeFunction::gradient(int cell, const Point& local) const {
  const auto basis = eval_basis(space_->order(), local);
  const auto dofs = space_->dofs(cell);
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < basis.count; ++k) {
    g[0] += coeffs_[dofs[k]] * basis.grads[k][0];
    g[1] += coeffs_[dofs[k]] * basis.grads[k][1];
  }
  const auto& mesh = space_->mesh();
  return {g[0] / mesh.hx(), g[1] / mesh.hy()};
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space,
                       const std::function<double(const Point&)>& f) {
  std::vector<double> coeffs(space->num_dofs());
  for (int d = 0; d < space->num_dofs(); ++d) coeffs[d] = f(space->node(d));
  return FeFunction(std::move(space), std::move(coeffs));
}

}  // namespace uwpg
