#ifndef UWPG_LINALG_HPP
#define UWPG_LINALG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace uwpg {

using Vector = std::vector<double>;

/// Compressed sparse row matrix with sorted, unique column indices.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, std::vector<double> vals);

  static CsrMatrix identity(int n);
  static CsrMatrix from_dense(const std::vector<std::vector<double>>& rows);

  int rows() const { return n_; }
  std::size_t nnz() const { return vals_.size(); }

  /// Adds to an existing entry; throws std::out_of_range if (i, j) is not in
  /// the pattern.
  void add(int i, int j, double v);
  /// Entry (i, j), zero outside the pattern.
  double operator()(int i, int j) const;

  std::span<const int> row_cols(int i) const {
    return {cols_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> row_vals(int i) const {
    return {vals_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<double> row_vals(int i) {
    return {vals_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  Vector diagonal() const;
  /// max |a_ij - a_ji| / max |a_ij|.
  double asymmetry() const;
  double max_abs() const;

  std::vector<std::vector<double>> to_dense() const;

  /// MatrixMarket coordinate (general, real) output.
  void write_matrix_market(std::ostream& os) const;

private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

/// Collects coupled index blocks and produces a zero-valued CsrMatrix with
/// the union pattern.
class PatternBuilder {
public:
  explicit PatternBuilder(int n) : n_(n) {}
  void add_block(std::span<const int> rows, std::span<const int> cols);
  void add(int i, int j) { keys_.push_back((std::uint64_t(i) << 32) | std::uint32_t(j)); }
  CsrMatrix build();

private:
  int n_;
  std::vector<std::uint64_t> keys_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

enum class Preconditioner { None, Jacobi, Ssor };

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::optional<double> condition_estimate;
};

struct SolverSettings {
  Preconditioner preconditioner = Preconditioner::Ssor;
  double tolerance = 1e-10;
  int max_iterations = 20000;
  double ssor_omega = 1.0;
  /// Jacobi and SSOR act on consecutive blocks of this size with exact block
  /// inverses (e.g. the cell blocks of a DG system).
  int block_size = 1;
};

struct SolveResult {
  Vector x;
  KrylovReport report;
};

/// Raised by cg_solve for matrices that fail the symmetry or positivity probe.
class NotSpdError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Preconditioned conjugate gradients. The stopping test is on the true
/// relative residual ||b - Ax|| / ||b||, which is what the report carries.
/// Throws NotSpdError on asymmetry above 1e-12 or a non-positive Rayleigh
/// quotient for random probes (fixed seed).
SolveResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, const SolverSettings& s,
                     std::span<const double> x0 = {});

/// Preconditioned BiCGStab for non-symmetric systems.
SolveResult bicgstab_solve(const CsrMatrix& a, std::span<const double> rhs,
                           const SolverSettings& s, std::span<const double> x0 = {});

/// Dense LU with partial pivoting; intended for oracles and small problems.
/// Throws std::invalid_argument above 5000 unknowns.
Vector dense_solve(const CsrMatrix& a, std::span<const double> rhs);

struct ConditionEstimate {
  double kappa = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int iterations = 0;
  bool breakdown = false;
  /// Ritz values settled (or the Krylov space became invariant).
  bool converged = false;
};

/// Extremal eigenvalues of an SPD matrix from a Lanczos tridiagonalization
/// with full reorthogonalization, started from a seeded random vector. With
/// a positive tolerance the iteration stops early once both extremal Ritz
/// values change by less than that relative amount over 20 steps.
ConditionEstimate estimate_condition(const CsrMatrix& a, int iterations,
                                     std::uint64_t seed = 20220501, double tolerance = 0.0);

}  // namespace uwpg

#endif  // UWPG_LINALG_HPP
