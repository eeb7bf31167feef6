#ifndef UWPG_MESH_HPP
#define UWPG_MESH_HPP

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uwpg {

using Point = std::array<double, 2>;

/// Raised when a boundary segment or coefficient box does not coincide with
/// grid lines of the mesh.
class AlignmentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryLabel { Interior, In, Out, Wall };

/// Side of the unit square a boundary segment lives on.
enum class Side { Left, Right, Bottom, Top };

/// Open segment (lo, hi) along one side of the unit square. The coordinate is
/// y for the vertical sides and x for the horizontal ones.
struct BoundarySegment {
  BoundaryLabel label;
  Side side;
  double lo;
  double hi;
};

struct BoundaryGeometry {
  std::vector<BoundarySegment> segments;

  /// Inflow {0}x(2/3,1), outflow {1}x(0,1/3).
  static BoundaryGeometry catalytic_filter();
  /// Whole left side inflow, whole right side outflow.
  static BoundaryGeometry channel();
  /// No inflow/outflow; everything is wall.
  static BoundaryGeometry closed() { return {}; }
};

/// Local face numbering of the reference cell [0,1]^2:
/// 0: x=0, 1: x=1, 2: y=0, 3: y=1.
struct Facet {
  int cell;
  int face;
  int neighbor;  // -1 on the boundary
  BoundaryLabel label;
};

/// Affine cell map of an axis-aligned cell. The Jacobian is diag(hx, hy).
struct CellMap {
  Point global;
  std::array<double, 2> jac;
  double detjac;
};

/// Structured nx-by-ny grid of the unit square. Cells are numbered
/// lexicographically, c = j*nx + i, with i running along x.
class Mesh {
public:
  Mesh(int nx, int ny, const BoundaryGeometry& geometry);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return 1.0 / nx_; }
  double hy() const { return 1.0 / ny_; }
  int num_cells() const { return nx_ * ny_; }
  int cell_index(int i, int j) const { return j * nx_ + i; }
  std::array<int, 2> cell_ij(int cell) const { return {cell % nx_, cell / nx_}; }

  /// Lower-left corner of a cell.
  Point cell_origin(int cell) const;
  Point cell_center(int cell) const;
  Point to_global(int cell, const Point& local) const;
  CellMap map_to_physical(int cell, const Point& local) const;

  /// Cell containing a global point together with its local coordinates.
  /// Points on interior grid lines go to the upper/right cell unless
  /// `toward` (a point inside the intended cell) says otherwise.
  std::pair<int, Point> locate(const Point& global) const;
  std::pair<int, Point> locate(const Point& global, const Point& toward) const;

  std::span<const Facet> boundary_facets() const { return boundary_; }
  std::span<const Facet> interior_facets() const { return interior_; }

  /// Neighbor across a local face, or -1 on the boundary.
  int neighbor(int cell, int face) const;

  /// Reference coordinates of a point at parameter t on a local face.
  static Point face_point(int face, double t);
  /// Outer unit normal of a local face.
  static std::array<double, 2> face_normal(int face);
  double face_length(int face) const { return face < 2 ? hy() : hx(); }

  /// Sum of boundary facet lengths carrying a label.
  double boundary_measure(BoundaryLabel label) const;

  const BoundaryGeometry& geometry() const { return geometry_; }

private:
  int nx_;
  int ny_;
  BoundaryGeometry geometry_;
  std::vector<Facet> boundary_;
  std::vector<Facet> interior_;
};

/// Throws AlignmentError if `value` is not a multiple of 1/n.
void require_aligned(double value, int n, const std::string& what);

std::string to_string(BoundaryLabel label);

}  // namespace uwpg

#endif  // UWPG_MESH_HPP
