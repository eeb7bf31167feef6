#ifndef UWPG_QUADRATURE_HPP
#define UWPG_QUADRATURE_HPP

#include <vector>

#include "uwpg/mesh.hpp"

namespace uwpg {

enum class QuadDomain { Cell, Facet };

struct QuadPoint {
  Point xi;  // facet rules use xi[0] only
  double weight;
};

/// Gauss-Legendre rule on the reference cell [0,1]^2 or facet [0,1].
/// Weights sum to the reference measure (1).
struct QuadRule {
  QuadDomain domain;
  int points_per_axis;
  std::vector<QuadPoint> points;

  auto begin() const { return points.begin(); }
  auto end() const { return points.end(); }
  std::size_t size() const { return points.size(); }
};

/// q points per axis, exact for polynomials of degree 2q-1 per axis.
/// Throws std::invalid_argument unless 1 <= q <= 10.
QuadRule gauss_rule(int q, QuadDomain domain);

}  // namespace uwpg

#endif  // UWPG_QUADRATURE_HPP
