#ifndef UWPG_DARCY_HPP
#define UWPG_DARCY_HPP

#include <memory>
#include <vector>

#include "uwpg/coefficients.hpp"
#include "uwpg/fe.hpp"
#include "uwpg/linalg.hpp"

namespace uwpg {

/// Darcy pressure system -div(k grad p) = 0 with p = 1 on In, p = 0 on Out and
/// natural no-flux conditions on Wall. Dirichlet rows and columns are
/// eliminated symmetrically.
struct DarcySystem {
  CsrMatrix matrix;
  Vector rhs;
  std::vector<char> is_dirichlet;
  Vector dirichlet_values;
};

DarcySystem assemble_darcy(const FeSpace& space, const ScalarField& k);

struct PressureSolution {
  std::shared_ptr<const FeFunction> pressure;
  ScalarField permeability;
  KrylovReport report;
  double min_pressure = 0.0;
  double max_pressure = 0.0;

  VelocityField velocity() const { return VelocityField::darcy(pressure, permeability); }
};

PressureSolution solve_pressure(std::shared_ptr<const FeSpace> space, const ScalarField& k,
                                const SolverSettings& settings);

struct MassBalance {
  double flux_in = 0.0;   // integral of -b.nu over In
  double flux_out = 0.0;  // integral of b.nu over Out
  double imbalance = 0.0;
};

MassBalance mass_balance(const PressureSolution& sol);

/// Integral of k |grad p|^2 over the domain.
double darcy_energy(const PressureSolution& sol);

}  // namespace uwpg

#endif  // UWPG_DARCY_HPP
