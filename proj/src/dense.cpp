#include <Eigen/Dense>

#include "uwpg/linalg.hpp"

namespace uwpg {

Vector dense_solve(const CsrMatrix& a, std::span<const double> rhs) {
  const int n = a.rows();
  if (n > 5000) throw std::invalid_argument("dense_solve is limited to 5000 unknowns");
  if (static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("right-hand side size does not match the matrix");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_vals(i);
    for (std::size_t k = 0; k < c.size(); ++k) m(i, c[k]) = v[k];
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  const Eigen::VectorXd x = m.partialPivLu().solve(b);
  return Vector(x.data(), x.data() + n);
}

}  // namespace uwpg
