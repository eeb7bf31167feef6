#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "uwpg/linalg.hpp"

namespace uwpg {

namespace {

constexpr int kCheckInterval = 20;

std::pair<double, double> ritz_extremes(const std::vector<double>& alpha,
                                        const std::vector<double>& beta) {
  const int k = static_cast<int>(alpha.size());
  Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
  for (int i = 0; i < k; ++i) diag[i] = alpha[i];
  for (int i = 0; i + 1 < k; ++i) sub[i] = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

}  // namespace

ConditionEstimate estimate_condition(const CsrMatrix& a, int iterations, std::uint64_t seed,
                                     double tolerance) {
  const int n = a.rows();
  if (n == 0) throw std::invalid_argument("empty matrix");
  const int m = std::clamp(iterations, 1, n);

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector q(n);
  for (auto& v : q) v = dist(gen);
  const double qn = norm2(q);
  for (auto& v : q) v /= qn;

  std::vector<Vector> basis;
  basis.reserve(m);
  std::vector<double> alpha, beta;
  Vector w(n);
  ConditionEstimate out;
  std::pair<double, double> previous{0.0, 0.0};
  for (int j = 0; j < m; ++j) {
    basis.push_back(q);
    a.multiply(q, w);
    const double aj = dot(w, q);
    alpha.push_back(aj);
    // Full reorthogonalization (twice is enough).
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double c = dot(w, b);
        for (int i = 0; i < n; ++i) w[i] -= c * b[i];
      }
    const double bj = norm2(w);
    if (j + 1 == m) break;
    if (tolerance > 0.0 && (j + 1) % kCheckInterval == 0) {
      const auto current = ritz_extremes(alpha, beta);
      if (std::abs(current.first - previous.first) <= tolerance * current.first &&
          std::abs(current.second - previous.second) <= tolerance * current.second) {
        out.converged = true;
        break;
      }
      previous = current;
    }
    if (bj <= 1e-14 * std::max(1.0, std::abs(aj))) {
      out.breakdown = true;
      break;
    }
    beta.push_back(bj);
    for (int i = 0; i < n; ++i) q[i] = w[i] / bj;
  }

  const auto [lmin, lmax] = ritz_extremes(alpha, beta);
  out.lambda_min = lmin;
  out.lambda_max = lmax;
  out.kappa = lmax / lmin;
  out.iterations = static_cast<int>(alpha.size());
  // A Krylov space of full dimension (or an invariant one) is exact.
  if (out.iterations == n || out.breakdown) out.converged = true;
  return out;
}

}  // namespace uwpg
