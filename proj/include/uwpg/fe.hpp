#ifndef UWPG_FE_HPP
#define UWPG_FE_HPP

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "uwpg/mesh.hpp"

namespace uwpg {

enum class Continuity { Continuous, Discontinuous };

struct SpaceDescriptor {
  int order;  // 1 or 2
  Continuity continuity;
  int num_dofs;
};

inline constexpr int kMaxLocalDofs = 9;

/// Values and reference-coordinate gradients of the tensor-product Lagrange
/// basis on equispaced nodes. Local dofs are ordered lexicographically by
/// (y, x): dof = jy*(p+1) + ix.
struct BasisEval {
  int count = 0;
  std::array<double, kMaxLocalDofs> values{};
  std::array<std::array<double, 2>, kMaxLocalDofs> grads{};
};

BasisEval eval_basis(int order, const Point& local);

inline int local_dof_count(int order) { return (order + 1) * (order + 1); }

/// Order-p Lagrange space on a mesh together with its dof map.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int order, Continuity continuity);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const SpaceDescriptor& descriptor() const { return desc_; }
  int order() const { return desc_.order; }
  int num_dofs() const { return desc_.num_dofs; }
  int local_count() const { return local_dof_count(desc_.order); }

  /// Global indices of the local dofs of a cell.
  std::span<const int> dofs(int cell) const {
    return {dofs_.data() + static_cast<std::size_t>(cell) * local_count(),
            static_cast<std::size_t>(local_count())};
  }

  /// Coordinates of a global dof's Lagrange node. For discontinuous spaces the
  /// node of the owning cell is returned.
  Point node(int dof) const { return nodes_[dof]; }

private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceDescriptor desc_;
  std::vector<int> dofs_;
  std::vector<Point> nodes_;
};

/// Global dof count of an order-p space on an nx-by-ny grid.
int count_dofs(int nx, int ny, int order, Continuity continuity);

/// A coefficient vector over an FeSpace.
class FeFunction {
public:
  explicit FeFunction(std::shared_ptr<const FeSpace> space);
  FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coeffs);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::vector<double>& coefficients() { return coeffs_; }

  double value(int cell, const Point& local) const;
  /// Gradient in physical coordinates.
  std::array<double, 2> gradient(int cell, const Point& local) const;

private:
  std::shared_ptr<const FeSpace> space_;
  std::vector<double> coeffs_;
};

/// Nodal interpolant of a global function.
FeFunction interpolate(std::shared_ptr<const FeSpace> space,
                       const std::function<double(const Point&)>& f);

}  // namespace uwpg

#endif  // UWPG_FE_HPP
