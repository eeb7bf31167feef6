#include <algorithm>
#include <cmath>
#include <ostream>

#include "uwpg/linalg.hpp"

namespace uwpg {

CsrMatrix::CsrMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols,
                     std::vector<double> vals)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
  if (static_cast<int>(row_ptr_.size()) != n_ + 1 || cols_.size() != vals_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != cols_.size())
    throw std::invalid_argument("inconsistent CSR arrays");
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> ptr(n + 1), cols(n);
  for (int i = 0; i <= n; ++i) ptr[i] = i;
  for (int i = 0; i < n; ++i) cols[i] = i;
  return CsrMatrix(n, std::move(ptr), std::move(cols), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> ptr{0}, cols;
  std::vector<double> vals;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw std::invalid_argument("matrix must be square");
    for (int j = 0; j < n; ++j)
      if (r[j] != 0.0) {
        cols.push_back(j);
        vals.push_back(r[j]);
      }
    ptr.push_back(static_cast<int>(cols.size()));
  }
  return CsrMatrix(n, std::move(ptr), std::move(cols), std::move(vals));
}

void CsrMatrix::add(int i, int j, double v) {
  const auto c = row_cols(i);
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) throw std::out_of_range("entry outside sparsity pattern");
  vals_[row_ptr_[i] + (it - c.begin())] += v;
}

double CsrMatrix::operator()(int i, int j) const {
  const auto c = row_cols(i);
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return 0.0;
  return vals_[row_ptr_[i] + (it - c.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(n_);
  multiply(x, y);
  return y;
}

Vector CsrMatrix::diagonal() const {
  Vector d(n_, 0.0);
  for (int i = 0; i < n_; ++i) d[i] = (*this)(i, i);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::asymmetry() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      worst = std::max(worst, std::abs(vals_[k] - (*this)(cols_[k], i)));
  return worst / scale;
}

std::vector<std::vector<double>> CsrMatrix::to_dense() const {
  std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d[i][cols_[k]] = vals_[k];
  return d;
}

void CsrMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << n_ << ' ' << n_ << ' ' << nnz() << '\n';
  const auto old = os.precision(17);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      os << i + 1 << ' ' << cols_[k] + 1 << ' ' << vals_[k] << '\n';
  os.precision(old);
}

void PatternBuilder::add_block(std::span<const int> rows, std::span<const int> cols) {
  for (int i : rows)
    for (int j : cols) add(i, j);
}

CsrMatrix PatternBuilder::build() {
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  std::vector<int> ptr(n_ + 1, 0);
  std::vector<int> cols(keys_.size());
  for (std::size_t k = 0; k < keys_.size(); ++k) {
    const int i = static_cast<int>(keys_[k] >> 32);
    cols[k] = static_cast<int>(keys_[k] & 0xffffffffu);
    ++ptr[i + 1];
  }
  for (int i = 0; i < n_; ++i) ptr[i + 1] += ptr[i];
  keys_.clear();
  keys_.shrink_to_fit();
  const std::size_t nnz = cols.size();
  return CsrMatrix(n_, std::move(ptr), std::move(cols), std::vector<double>(nnz, 0.0));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace uwpg
