#include "uwpg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwpg {

namespace {

// Nodes and weights on [-1,1] by Newton iteration on P_q.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  x.assign(q, 0.0);
  w.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= q; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = q * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= q; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = q * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[q - 1 - i] = z;
    w[i] = w[q - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (q % 2 == 1) x[q / 2] = 0.0;
}

}  // namespace

QuadRule gauss_rule(int q, QuadDomain domain) {
  if (q < 1 || q > 10)
    throw std::invalid_argument("gauss_rule: points per axis must be in [1, 10], got " +
                                std::to_string(q));
  std::vector<double> x, w;
  gauss_legendre(q, x, w);
  for (int i = 0; i < q; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
  QuadRule rule{domain, q, {}};
  if (domain == QuadDomain::Facet) {
    for (int i = 0; i < q; ++i) rule.points.push_back({{x[i], 0.0}, w[i]});
  } else {
    for (int j = 0; j < q; ++j)
      for (int i = 0; i < q; ++i) rule.points.push_back({{x[i], x[j]}, w[i] * w[j]});
  }
  return rule;
}

}  // namespace uwpg
