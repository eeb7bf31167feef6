#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "uwpg/darcy.hpp"
#include "uwpg/reconstruct.hpp"
#include "uwpg/reference_dg.hpp"

using namespace uwpg;

namespace {

const Box kReac{0.0, 1.0, 0.4, 0.6};

TransportProblem uniform_problem(Vec2 b, double c, std::function<double(double)> g) {
  return {VelocityField::uniform(b), ScalarField::constant(c), ScalarField::constant(0.0),
          BoundaryData::inflow(std::move(g))};
}

std::shared_ptr<const FeSpace> dg_space(int nx, int ny, const BoundaryGeometry& geo) {
  auto mesh = std::make_shared<const Mesh>(nx, ny, geo);
  return std::make_shared<const FeSpace>(mesh, 1, Continuity::Discontinuous);
}

BoundaryGeometry bottom_to_top() {
  BoundaryGeometry geo;
  geo.segments.push_back({BoundaryLabel::In, Side::Bottom, 0.0, 1.0});
  geo.segments.push_back({BoundaryLabel::Out, Side::Top, 0.0, 1.0});
  return geo;
}

}  // namespace

TEST(DownwindOrder, UpstreamCellsComeFirst) {
  const Mesh mesh(5, 3, BoundaryGeometry::channel());
  const auto order = downwind_order(mesh, VelocityField::uniform({1.0, 0.0}));
  ASSERT_EQ(order.size(), 15u);
  std::vector<int> pos(15);
  for (int k = 0; k < 15; ++k) pos[order[k]] = k;
  for (int c = 0; c < 15; ++c) {
    const auto x = mesh.to_global(c, {0.5, 0.5});
    if (x[0] > 0.2) {
      const int left = mesh.locate({x[0] - 0.2, x[1]}).first;
      EXPECT_LT(pos[left], pos[c]);
    }
  }
}

TEST(PermuteSymmetric, MatchesDensePermutation) {
  const auto a = CsrMatrix::from_dense({{1.0, 0.0, 2.0}, {0.0, 3.0, 0.0}, {4.0, 5.0, 0.0}});
  const std::vector<int> idx{2, 0, 1};
  const auto p = permute_symmetric(a, idx).to_dense();
  const auto d = a.to_dense();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(p[idx[i]][idx[j]], d[i][j]);
}

TEST(SolveDg, ConstantStateIsExact) {
  auto space = dg_space(6, 4, BoundaryGeometry::channel());
  const auto sol = solve_dg(space, uniform_problem({1.0, 0.0}, 0.0, [](double) { return 1.0; }));
  EXPECT_TRUE(sol.report.converged);
  for (double v : sol.u.coefficients()) EXPECT_NEAR(v, 1.0, 1e-9);
  EXPECT_NEAR(sol.min_cell_mean, 1.0, 1e-9);
  EXPECT_NEAR(sol.max_cell_mean, 1.0, 1e-9);
}

TEST(SolveDg, TransportAlongColumnsIsExact) {
  // b = (0, 1), u(x, 0) = x: every column carries its own constant.
  auto space = dg_space(5, 5, bottom_to_top());
  const auto sol = solve_dg(space, uniform_problem({0.0, 1.0}, 0.0, [](double x) { return x; }));
  const Mesh& mesh = space->mesh();
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (const Point local : {Point{0.0, 0.0}, Point{1.0, 0.3}, Point{0.4, 1.0}})
      EXPECT_NEAR(sol.u.value(c, local), mesh.to_global(c, local)[0], 1e-9);
}

TEST(SolveDg, ReactionDecayConverges) {
  const double c0 = 0.5;
  const auto exact = [c0](const Point& x) { return std::exp(-c0 * x[0]); };
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    auto space = dg_space(n, 2, BoundaryGeometry::channel());
    const auto sol = solve_dg(space, uniform_problem({1.0, 0.0}, c0, [](double) { return 1.0; }));
    err.push_back(l2_distance(space->mesh(), 4, fe_evaluator(sol.u), analytic_evaluator(exact)));
  }
  EXPECT_LT(err[2], 1e-4);
  EXPECT_GT(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GT(std::log2(err[1] / err[2]), 1.8);
}

TEST(SolveDg, BiCgStabMatchesDenseLu) {
  auto mesh = std::make_shared<const Mesh>(3, 3, BoundaryGeometry::catalytic_filter());
  auto pspace = std::make_shared<const FeSpace>(mesh, 1, Continuity::Continuous);
  const auto p = solve_pressure(pspace, ScalarField::constant(1.0), {Preconditioner::Ssor, 1e-13, 1000, 1.0});
  const TransportProblem problem{p.velocity(), ScalarField::constant(0.5), ScalarField::constant(0.0),
                                 BoundaryData::inflow(catalytic_inflow_profile)};
  auto space = std::make_shared<const FeSpace>(mesh, 1, Continuity::Discontinuous);
  for (bool reorder : {true, false}) {
    const auto it = solve_dg(space, problem, {DgSolver::BiCgStab, {Preconditioner::Ssor, 1e-13, 1000, 1.0}, reorder});
    const auto lu = solve_dg(space, problem, {DgSolver::DenseLu, {}, reorder});
    for (int i = 0; i < space->num_dofs(); ++i)
      EXPECT_NEAR(it.u.coefficients()[i], lu.u.coefficients()[i], 1e-10);
  }
  // Independent dense oracle.
  const auto sys = assemble_dg(*space, problem);
  const auto d = sys.matrix.to_dense();
  const int n = space->num_dofs();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    f[i] = sys.rhs[i];
    for (int j = 0; j < n; ++j) a(i, j) = d[i][j];
  }
  const Eigen::VectorXd x = a.fullPivLu().solve(f);
  const auto lu = solve_dg(space, problem, {DgSolver::DenseLu, {}, true});
  for (int i = 0; i < n; ++i) EXPECT_NEAR(lu.u.coefficients()[i], x[i], 1e-12);
}

TEST(SolveDg, FilterConservesMassWithoutReaction) {
  auto mesh = std::make_shared<const Mesh>(30, 30, BoundaryGeometry::catalytic_filter());
  auto pspace = std::make_shared<const FeSpace>(mesh, 2, Continuity::Continuous);
  const auto p = solve_pressure(pspace, ScalarField::indicator_box(*mesh, kReac, 0.1, 1.0),
                                {Preconditioner::Ssor, 1e-12, 100000, 1.0});
  const auto inflow = BoundaryData::inflow(catalytic_inflow_profile);
  const TransportProblem problem{p.velocity(), ScalarField::constant(0.0), ScalarField::constant(0.0), inflow};
  auto space = std::make_shared<const FeSpace>(mesh, 1, Continuity::Discontinuous);
  const auto sol = solve_dg(space, problem);
  EXPECT_TRUE(sol.report.converged);
  const double in = inflow_loading(*mesh, inflow, problem.velocity);
  EXPECT_NEAR(dg_outflow_flux(sol.u, problem.velocity), in, 0.01 * in);
  EXPECT_GE(sol.min_cell_mean, -0.05);
  EXPECT_LE(sol.max_cell_mean, 1.05);
}

TEST(CellMean, OfAnInterpolatedLinear) {
  auto space = dg_space(4, 4, BoundaryGeometry::closed());
  const auto f = interpolate(space, [](const Point& x) { return 3.0 * x[0] - x[1]; });
  for (int c = 0; c < 16; ++c) {
    const auto x = space->mesh().to_global(c, {0.5, 0.5});
    EXPECT_NEAR(cell_mean(f, c), 3.0 * x[0] - x[1], 1e-14);
  }
}
