#include "uwpg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uwpg {

BoundaryGeometry BoundaryGeometry::catalytic_filter() {
  return {{{BoundaryLabel::In, Side::Left, 2.0 / 3.0, 1.0},
           {BoundaryLabel::Out, Side::Right, 0.0, 1.0 / 3.0}}};
}

BoundaryGeometry BoundaryGeometry::channel() {
  return {{{BoundaryLabel::In, Side::Left, 0.0, 1.0},
           {BoundaryLabel::Out, Side::Right, 0.0, 1.0}}};
}

void require_aligned(double value, int n, const std::string& what) {
  const double scaled = value * n;
  if (std::abs(scaled - std::round(scaled)) > 1e-9 * std::max(1.0, scaled)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " = " << value << " is not aligned with a grid of " << n
        << " cells (" << value << " * " << n << " = " << scaled << ")";
    throw AlignmentError(msg.str());
  }
}

std::string to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::Interior: return "interior";
    case BoundaryLabel::In: return "in";
    case BoundaryLabel::Out: return "out";
    case BoundaryLabel::Wall: return "wall";
  }
  return "?";
}

namespace {

int face_of(Side side) {
  switch (side) {
    case Side::Left: return 0;
    case Side::Right: return 1;
    case Side::Bottom: return 2;
    case Side::Top: return 3;
  }
  return -1;
}

}  // namespace

Mesh::Mesh(int nx, int ny, const BoundaryGeometry& geometry)
    : nx_(nx), ny_(ny), geometry_(geometry) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("mesh needs at least one cell per axis");

  for (const auto& seg : geometry_.segments) {
    if (seg.label != BoundaryLabel::In && seg.label != BoundaryLabel::Out)
      throw std::invalid_argument("boundary segments must be labeled in or out");
    if (!(seg.lo < seg.hi) || seg.lo < 0.0 || seg.hi > 1.0)
      throw std::invalid_argument("boundary segment must satisfy 0 <= lo < hi <= 1");
    const bool vertical = seg.side == Side::Left || seg.side == Side::Right;
    const int n = vertical ? ny_ : nx_;
    const std::string axis = vertical ? "y" : "x";
    require_aligned(seg.lo, n, "segment endpoint " + axis);
    require_aligned(seg.hi, n, "segment endpoint " + axis);
  }

  auto label_of = [&](int face, double mid) {
    for (const auto& seg : geometry_.segments)
      if (face_of(seg.side) == face && mid > seg.lo && mid < seg.hi) return seg.label;
    return BoundaryLabel::Wall;
  };

  // Bottom row, top row, left column, right column.
  for (int i = 0; i < nx_; ++i) {
    const double mid = (i + 0.5) * hx();
    boundary_.push_back({cell_index(i, 0), 2, -1, label_of(2, mid)});
  }
  for (int i = 0; i < nx_; ++i) {
    const double mid = (i + 0.5) * hx();
    boundary_.push_back({cell_index(i, ny_ - 1), 3, -1, label_of(3, mid)});
  }
  for (int j = 0; j < ny_; ++j) {
    const double mid = (j + 0.5) * hy();
    boundary_.push_back({cell_index(0, j), 0, -1, label_of(0, mid)});
  }
  for (int j = 0; j < ny_; ++j) {
    const double mid = (j + 0.5) * hy();
    boundary_.push_back({cell_index(nx_ - 1, j), 1, -1, label_of(1, mid)});
  }

  // Interior facets are owned by the left/lower cell.
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (i + 1 < nx_)
        interior_.push_back({cell_index(i, j), 1, cell_index(i + 1, j), BoundaryLabel::Interior});
      if (j + 1 < ny_)
        interior_.push_back({cell_index(i, j), 3, cell_index(i, j + 1), BoundaryLabel::Interior});
    }
}

Point Mesh::cell_origin(int cell) const {
  const auto [i, j] = cell_ij(cell);
  return {i * hx(), j * hy()};
}

Point Mesh::cell_center(int cell) const { return to_global(cell, {0.5, 0.5}); }

Point Mesh::to_global(int cell, const Point& local) const {
  const auto [i, j] = cell_ij(cell);
  return {(i + local[0]) * hx(), (j + local[1]) * hy()};
}

CellMap Mesh::map_to_physical(int cell, const Point& local) const {
  return {to_global(cell, local), {hx(), hy()}, hx() * hy()};
}

std::pair<int, Point> Mesh::locate(const Point& global) const {
  const double sx = global[0] * nx_;
  const double sy = global[1] * ny_;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, ny_ - 1);
  return {cell_index(i, j), {sx - i, sy - j}};
}

std::pair<int, Point> Mesh::locate(const Point& global, const Point& toward) const {
  // Nudge by a tiny fraction of a cell toward the reference point so that
  // points on grid lines resolve to the intended side.
  const double eps = 1e-9;
  Point probe = global;
  for (int d = 0; d < 2; ++d) {
    const double h = d == 0 ? hx() : hy();
    if (toward[d] > global[d]) probe[d] += eps * h;
    else if (toward[d] < global[d]) probe[d] -= eps * h;
  }
  auto [cell, local] = locate(probe);
  const Point origin = cell_origin(cell);
  local = {(global[0] - origin[0]) * nx_, (global[1] - origin[1]) * ny_};
  return {cell, local};
}

int Mesh::neighbor(int cell, int face) const {
  const auto [i, j] = cell_ij(cell);
  switch (face) {
    case 0: return i > 0 ? cell - 1 : -1;
    case 1: return i + 1 < nx_ ? cell + 1 : -1;
    case 2: return j > 0 ? cell - nx_ : -1;
    case 3: return j + 1 < ny_ ? cell + nx_ : -1;
  }
  return -1;
}

Point Mesh::face_point(int face, double t) {
  switch (face) {
    case 0: return {0.0, t};
    case 1: return {1.0, t};
    case 2: return {t, 0.0};
    default: return {t, 1.0};
  }
}

std::array<double, 2> Mesh::face_normal(int face) {
  switch (face) {
    case 0: return {-1.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, -1.0};
    default: return {0.0, 1.0};
  }
}

double Mesh::boundary_measure(BoundaryLabel label) const {
  double total = 0.0;
  for (const auto& f : boundary_)
    if (f.label == label) total += face_length(f.face);
  return total;
}

}  // namespace uwpg
