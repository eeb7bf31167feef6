#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "uwpg/linalg.hpp"

using namespace uwpg;

namespace {

// Random sparse SPD matrix: weighted path-plus-chords graph Laplacian plus a
// positive diagonal.
CsrMatrix random_spd(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  auto link = [&](int i, int j, double w) {
    a[i][i] += w;
    a[j][j] += w;
    a[i][j] -= w;
    a[j][i] -= w;
  };
  for (int i = 0; i + 1 < n; ++i) link(i, i + 1, u(gen));
  for (int k = 0; k < 2 * n; ++k) {
    const int i = pick(gen), j = pick(gen);
    if (i != j) link(i, j, u(gen));
  }
  for (int i = 0; i < n; ++i) a[i][i] += 0.01 * u(gen);
  return CsrMatrix::from_dense(a);
}

Eigen::MatrixXd to_eigen(const CsrMatrix& m) {
  const auto d = m.to_dense();
  Eigen::MatrixXd e(m.rows(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.rows(); ++j) e(i, j) = d[i][j];
  return e;
}

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

SolverSettings settings(Preconditioner p, double tol = 1e-12, int maxit = 10000) {
  SolverSettings s;
  s.preconditioner = p;
  s.tolerance = tol;
  s.max_iterations = maxit;
  return s;
}

}  // namespace

TEST(Csr, FromDenseAndAccess) {
  const auto m = CsrMatrix::from_dense({{1, 0, 2}, {0, 3, 0}, {4, 0, 5}});
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.nnz(), 5);
  EXPECT_DOUBLE_EQ(m(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
  const auto d = m.diagonal();
  EXPECT_DOUBLE_EQ(d[2], 5.0);
  Vector y(3);
  m.multiply(Vector{1, 1, 1}, y);
  EXPECT_DOUBLE_EQ(y[0], 3.0);
  EXPECT_DOUBLE_EQ(y[2], 9.0);
  EXPECT_NEAR(m.asymmetry(), 2.0 / 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.max_abs(), 5.0);
}

TEST(Csr, PatternBuilderMergesDuplicates) {
  PatternBuilder pb(3);
  pb.add(0, 2);
  pb.add(0, 2);
  pb.add(2, 0);
  const std::vector<int> block{0, 1};
  pb.add_block(block, block);
  auto m = pb.build();
  EXPECT_EQ(m.nnz(), 6);
  for (int r = 0; r < 3; ++r) {
    const auto c = m.row_cols(r);
    for (std::size_t k = 1; k < c.size(); ++k) EXPECT_LT(c[k - 1], c[k]);
  }
  m.add(0, 2, 1.5);
  m.add(0, 2, 1.0);
  EXPECT_DOUBLE_EQ(m(0, 2), 2.5);
  EXPECT_THROW(m.add(2, 1, 1.0), std::out_of_range);
}

TEST(Csr, MatrixMarketDump) {
  const auto m = CsrMatrix::from_dense({{2, -1}, {-1, 2}});
  std::ostringstream os;
  m.write_matrix_market(os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
  int rows = 0, cols = 0, nnz = 0;
  std::string line;
  while (std::getline(is, line) && line[0] == '%') {
  }
  std::istringstream(line) >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(cols, 2);
  EXPECT_EQ(nnz, 4);
  int i = 0, j = 0;
  double v = 0.0;
  is >> i >> j >> v;
  EXPECT_EQ(i, 1);
  EXPECT_EQ(j, 1);
  EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(Cg, IdentityConvergesInOneStep) {
  const auto id = CsrMatrix::identity(5);
  const Vector rhs{1, -2, 3, 0.5, 7};
  for (auto p : {Preconditioner::None, Preconditioner::Jacobi, Preconditioner::Ssor}) {
    const auto r = cg_solve(id, rhs, settings(p));
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1);
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(r.x[i], rhs[i]);
  }
}

TEST(Cg, SmallHandSolvedSystems) {
  const auto d = cg_solve(CsrMatrix::from_dense({{2, 0}, {0, 1}}), Vector{2, 1},
                          settings(Preconditioner::None));
  EXPECT_NEAR(d.x[0], 1.0, 1e-14);
  EXPECT_NEAR(d.x[1], 1.0, 1e-14);
  const auto g = cg_solve(CsrMatrix::from_dense({{1, -1}, {-1, 2}}), Vector{1, 0},
                          settings(Preconditioner::None));
  EXPECT_NEAR(g.x[0], 2.0, 1e-13);
  EXPECT_NEAR(g.x[1], 1.0, 1e-13);
  EXPECT_LE(g.report.iterations, 2);
}

TEST(Cg, ZeroRightHandSide) {
  const auto r = cg_solve(random_spd(20, 1), Vector(20, 0.0), settings(Preconditioner::Ssor));
  EXPECT_TRUE(r.report.converged);
  for (double x : r.x) EXPECT_EQ(x, 0.0);
}

TEST(Cg, RejectsNonSymmetricAndIndefinite) {
  EXPECT_THROW(cg_solve(CsrMatrix::from_dense({{2, 1}, {0, 2}}), Vector{1, 1},
                        settings(Preconditioner::None)),
               NotSpdError);
  auto neg = CsrMatrix::identity(4);
  for (int i = 0; i < 4; ++i) neg.add(i, i, -2.0);
  EXPECT_THROW(cg_solve(neg, Vector{1, 1, 1, 1}, settings(Preconditioner::None)), NotSpdError);
}

TEST(Cg, ReportsNonConvergence) {
  const auto a = random_spd(100, 2);
  const auto r = cg_solve(a, random_vector(100, 3), settings(Preconditioner::None, 1e-14, 3));
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 3);
  EXPECT_GT(r.report.relative_residual, 1e-14);
}

TEST(Cg, MatchesDenseOracle) {
  for (int n : {5, 37, 120, 200}) {
    const auto a = random_spd(n, 100 + n);
    const auto rhs = random_vector(n, 200 + n);
    const Eigen::VectorXd exact =
        to_eigen(a).llt().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));
    for (auto p : {Preconditioner::None, Preconditioner::Jacobi, Preconditioner::Ssor}) {
      const auto r = cg_solve(a, rhs, settings(p, 1e-12, 20000));
      ASSERT_TRUE(r.report.converged);
      EXPECT_LE(r.report.relative_residual, 1e-12);
      double err = 0.0;
      for (int i = 0; i < n; ++i) err = std::max(err, std::abs(r.x[i] - exact[i]));
      EXPECT_LT(err / exact.cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
    }
  }
}

TEST(Cg, BlockPreconditionersSolveTheSameSystem) {
  const auto a = random_spd(60, 9);
  const auto rhs = random_vector(60, 10);
  const auto point = cg_solve(a, rhs, settings(Preconditioner::Ssor));
  for (int bs : {2, 3, 4}) {
    for (auto p : {Preconditioner::Jacobi, Preconditioner::Ssor}) {
      auto s = settings(p);
      s.block_size = bs;
      const auto r = cg_solve(a, rhs, s);
      ASSERT_TRUE(r.report.converged);
      for (int i = 0; i < 60; ++i) EXPECT_NEAR(r.x[i], point.x[i], 1e-8);
    }
  }
  auto bad = settings(Preconditioner::Jacobi);
  bad.block_size = 7;
  EXPECT_THROW(cg_solve(a, rhs, bad), std::invalid_argument);
}

TEST(BiCgStab, SmallSystems) {
  const auto r = bicgstab_solve(CsrMatrix::identity(4), Vector{1, 2, 3, 4},
                                settings(Preconditioner::None));
  EXPECT_TRUE(r.report.converged);
  EXPECT_DOUBLE_EQ(r.x[3], 4.0);
  const auto u = bicgstab_solve(CsrMatrix::from_dense({{1, 1}, {0, 1}}), Vector{2, 1},
                                settings(Preconditioner::None));
  EXPECT_TRUE(u.report.converged);
  EXPECT_NEAR(u.x[0], 1.0, 1e-12);
  EXPECT_NEAR(u.x[1], 1.0, 1e-12);
}

TEST(BiCgStab, NonSymmetricAgainstDenseLu) {
  const int n = 80;
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 4.0;
    if (i > 0) d[i][i - 1] = u(gen);
    if (i + 1 < n) d[i][i + 1] = 2.0 * u(gen);
    d[i][(i * 7) % n] += u(gen);
  }
  const auto a = CsrMatrix::from_dense(d);
  const auto rhs = random_vector(n, 22);
  const Eigen::VectorXd exact =
      to_eigen(a).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));
  for (auto p : {Preconditioner::None, Preconditioner::Jacobi, Preconditioner::Ssor}) {
    const auto r = bicgstab_solve(a, rhs, settings(p, 1e-12));
    ASSERT_TRUE(r.report.converged);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(r.x[i], exact[i], 1e-9);
  }
  const auto lu = dense_solve(a, rhs);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(lu[i], exact[i], 1e-12);
}

TEST(DenseSolve, SizeLimit) {
  EXPECT_THROW(dense_solve(CsrMatrix::identity(5001), Vector(5001, 1.0)), std::invalid_argument);
}

TEST(Lanczos, DiagonalMatrices) {
  const auto d = CsrMatrix::from_dense({{1, 0}, {0, 10}});
  const auto e = estimate_condition(d, 10);
  EXPECT_NEAR(e.kappa, 10.0, 1e-12);
  EXPECT_NEAR(e.lambda_min, 1.0, 1e-12);
  const auto id = estimate_condition(CsrMatrix::identity(100), 50);
  EXPECT_NEAR(id.kappa, 1.0, 1e-14);
  EXPECT_TRUE(id.breakdown);
  EXPECT_EQ(id.iterations, 1);
}

TEST(Lanczos, MatchesDenseEigenvalues) {
  const int n = 150;
  const auto a = random_spd(n, 31);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(n - 1);
  const auto full = estimate_condition(a, n);
  EXPECT_NEAR(full.lambda_min / lmin, 1.0, 1e-8);
  EXPECT_NEAR(full.lambda_max / lmax, 1.0, 1e-10);
  EXPECT_TRUE(full.converged);
  const auto early = estimate_condition(a, n, 20220501, 1e-8);
  EXPECT_TRUE(early.converged);
  EXPECT_NEAR(early.kappa / (lmax / lmin), 1.0, 1e-6);
}

TEST(Lanczos, IsDeterministicForAFixedSeed) {
  const auto a = random_spd(90, 41);
  const auto x = estimate_condition(a, 30, 5);
  const auto y = estimate_condition(a, 30, 5);
  EXPECT_EQ(x.kappa, y.kappa);
  EXPECT_EQ(x.iterations, 30);
  EXPECT_FALSE(x.converged);
}
