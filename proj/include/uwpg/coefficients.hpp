#ifndef UWPG_COEFFICIENTS_HPP
#define UWPG_COEFFICIENTS_HPP

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <variant>

#include "uwpg/fe.hpp"
#include "uwpg/mesh.hpp"

namespace uwpg {

using Vec2 = std::array<double, 2>;

struct Box {
  double x0, x1, y0, y1;
  bool contains(const Point& p) const {
    return p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1;
  }
};

/// Scalar coefficient: constant, indicator of an axis-aligned box, or a
/// closed-form function of the global point.
class ScalarField {
public:
  struct Constant {
    double value;
  };
  struct IndicatorBox {
    Box box;
    double inside;
    double outside;
  };
  struct Analytic {
    std::function<double(const Point&)> f;
  };

  static ScalarField constant(double value) { return ScalarField(Constant{value}); }
  /// Validates that the box edges are grid lines of `mesh`; throws
  /// AlignmentError otherwise.
  static ScalarField indicator_box(const Mesh& mesh, const Box& box, double inside,
                                   double outside);
  static ScalarField analytic(std::function<double(const Point&)> f) {
    return ScalarField(Analytic{std::move(f)});
  }

  /// Value at a point of a cell. Box indicators are decided by the cell
  /// center, so they are constant per cell.
  double operator()(const Mesh& mesh, int cell, const Point& local) const;
  /// Value at a global point (closed box for indicators).
  double at(const Point& global) const;

  bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
  bool is_piecewise_constant() const { return !std::holds_alternative<Analytic>(kind_); }
  /// Throws AlignmentError if an indicator box does not match `mesh`.
  void check_aligned(const Mesh& mesh) const;

private:
  using Kind = std::variant<Constant, IndicatorBox, Analytic>;
  explicit ScalarField(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Boundary data per geometric label as a function of the arclength
/// coordinate z along the segment (y on vertical sides, x on horizontal).
class BoundaryData {
public:
  BoundaryData() = default;
  static BoundaryData inflow(std::function<double(double)> g) {
    BoundaryData d;
    d.set(BoundaryLabel::In, std::move(g));
    return d;
  }

  void set(BoundaryLabel label, std::function<double(double)> g) { data_[label] = std::move(g); }
  bool has(BoundaryLabel label) const { return data_.contains(label); }

  /// Value at parameter t of a boundary facet. Throws std::invalid_argument if
  /// the facet is not labeled In.
  double eval_gD(const Mesh& mesh, const Facet& facet, double t) const;
  double at(BoundaryLabel label, double z) const;

private:
  std::map<BoundaryLabel, std::function<double(double)>> data_;
};

/// sin(3 pi z)^2, a single bump on (2/3, 1).
double catalytic_inflow_profile(double z);

/// Transport velocity b, either closed-form or b = -k grad p from a pressure
/// finite element function.
class VelocityField {
public:
  struct Analytic {
    std::function<Vec2(const Point&)> f;
    int degree;  // per-axis polynomial degree, used to size quadrature
  };
  struct Darcy {
    std::shared_ptr<const FeFunction> pressure;
    ScalarField permeability;
  };

  static VelocityField analytic(std::function<Vec2(const Point&)> f, int degree = 0) {
    return VelocityField(Analytic{std::move(f), degree});
  }
  static VelocityField uniform(Vec2 b) {
    return analytic([b](const Point&) { return b; }, 0);
  }
  static VelocityField darcy(std::shared_ptr<const FeFunction> pressure, ScalarField k) {
    return VelocityField(Darcy{std::move(pressure), std::move(k)});
  }

  /// Velocity at a point of a cell of `mesh`. For Darcy fields defined on a
  /// different grid the point is located in the pressure mesh, resolving
  /// ties toward the center of `cell`.
  Vec2 operator()(const Mesh& mesh, int cell, const Point& local) const;
  /// b . nu on a boundary or interior facet, one-sided from the owning cell.
  double normal_flux(const Mesh& mesh, const Facet& facet, double t) const;
  /// b . nu evaluated from the neighbor's side of an interior facet.
  double normal_flux_from_neighbor(const Mesh& mesh, const Facet& facet, double t) const;

  /// Per-axis polynomial degree of b inside a cell.
  int degree() const;
  bool is_darcy() const { return std::holds_alternative<Darcy>(kind_); }

private:
  using Kind = std::variant<Analytic, Darcy>;
  explicit VelocityField(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

}  // namespace uwpg

#endif  // UWPG_COEFFICIENTS_HPP
