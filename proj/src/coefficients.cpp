#include "uwpg/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwpg {

ScalarField ScalarField::indicator_box(const Mesh& mesh, const Box& box, double inside,
                                       double outside) {
  ScalarField field(IndicatorBox{box, inside, outside});
  field.check_aligned(mesh);
  return field;
}

void ScalarField::check_aligned(const Mesh& mesh) const {
  if (const auto* ib = std::get_if<IndicatorBox>(&kind_)) {
    require_aligned(ib->box.x0, mesh.nx(), "box edge x0");
    require_aligned(ib->box.x1, mesh.nx(), "box edge x1");
    require_aligned(ib->box.y0, mesh.ny(), "box edge y0");
    require_aligned(ib->box.y1, mesh.ny(), "box edge y1");
  }
}

double ScalarField::operator()(const Mesh& mesh, int cell, const Point& local) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return k.value;
        } else if constexpr (std::is_same_v<T, IndicatorBox>) {
          return k.box.contains(mesh.cell_center(cell)) ? k.inside : k.outside;
        } else {
          return k.f(mesh.to_global(cell, local));
        }
      },
      kind_);
}

double ScalarField::at(const Point& global) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return k.value;
        } else if constexpr (std::is_same_v<T, IndicatorBox>) {
          return k.box.contains(global) ? k.inside : k.outside;
        } else {
          return k.f(global);
        }
      },
      kind_);
}

double BoundaryData::eval_gD(const Mesh& mesh, const Facet& facet, double t) const {
  if (facet.label != BoundaryLabel::In)
    throw std::invalid_argument("inflow data requested on a facet labeled " +
                                to_string(facet.label));
  const Point x = mesh.to_global(facet.cell, Mesh::face_point(facet.face, t));
  const double z = facet.face < 2 ? x[1] : x[0];
  return at(BoundaryLabel::In, z);
}

double BoundaryData::at(BoundaryLabel label, double z) const {
  const auto it = data_.find(label);
  return it == data_.end() ? 0.0 : it->second(z);
}

double catalytic_inflow_profile(double z) {
  const double s = std::sin(3.0 * std::numbers::pi * z);
  return s * s;
}

Vec2 VelocityField::operator()(const Mesh& mesh, int cell, const Point& local) const {
  if (const auto* a = std::get_if<Analytic>(&kind_)) return a->f(mesh.to_global(cell, local));

  const auto& d = std::get<Darcy>(kind_);
  const Mesh& pmesh = d.pressure->space().mesh();
  int pcell = cell;
  Point plocal = local;
  double k = 0.0;
  if (pmesh.nx() == mesh.nx() && pmesh.ny() == mesh.ny()) {
    k = d.permeability(mesh, cell, local);
  } else {
    const Point x = mesh.to_global(cell, local);
    std::tie(pcell, plocal) = pmesh.locate(x, mesh.cell_center(cell));
    k = d.permeability(pmesh, pcell, plocal);
  }
  const auto g = d.pressure->gradient(pcell, plocal);
  return {-k * g[0], -k * g[1]};
}

double VelocityField::normal_flux(const Mesh& mesh, const Facet& facet, double t) const {
  const Vec2 b = (*this)(mesh, facet.cell, Mesh::face_point(facet.face, t));
  const auto n = Mesh::face_normal(facet.face);
  return b[0] * n[0] + b[1] * n[1];
}

double VelocityField::normal_flux_from_neighbor(const Mesh& mesh, const Facet& facet,
                                                double t) const {
  // Face 1 of the owner is face 0 of the neighbor; face 3 is face 2.
  const int nface = facet.face == 1 ? 0 : 2;
  const Vec2 b = (*this)(mesh, facet.neighbor, Mesh::face_point(nface, t));
  const auto n = Mesh::face_normal(facet.face);
  return b[0] * n[0] + b[1] * n[1];
}

int VelocityField::degree() const {
  if (const auto* a = std::get_if<Analytic>(&kind_)) return a->degree;
  return std::get<Darcy>(kind_).pressure->space().order();
}

}  // namespace uwpg
