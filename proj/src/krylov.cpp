#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "uwpg/linalg.hpp"

namespace uwpg {

namespace {

/// z = M^{-1} r for the configured preconditioner. Jacobi and SSOR use the
/// (block) diagonal D with blocks of SolverSettings::block_size.
class PreconditionerOp {
public:
  PreconditionerOp(const CsrMatrix& a, const SolverSettings& s)
      : a_(a), kind_(s.preconditioner), omega_(s.ssor_omega), bs_(std::max(1, s.block_size)) {
    if (kind_ == Preconditioner::None) return;
    const int n = a_.rows();
    if (n % bs_ != 0) throw std::invalid_argument("matrix size is not a multiple of the block size");
    inv_.assign(static_cast<std::size_t>(n) * bs_, 0.0);
    Eigen::MatrixXd block(bs_, bs_);
    for (int b0 = 0; b0 < n; b0 += bs_) {
      block.setZero();
      for (int i = 0; i < bs_; ++i) {
        const auto c = a_.row_cols(b0 + i);
        const auto v = a_.row_vals(b0 + i);
        for (std::size_t k = 0; k < c.size(); ++k)
          if (c[k] >= b0 && c[k] < b0 + bs_) block(i, c[k] - b0) = v[k];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
      if (!lu.isInvertible())
        throw std::invalid_argument("singular diagonal block; cannot precondition");
      const Eigen::MatrixXd binv = lu.inverse();
      for (int i = 0; i < bs_; ++i)
        for (int j = 0; j < bs_; ++j) inv_[static_cast<std::size_t>(b0 + i) * bs_ + j] = binv(i, j);
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    const int n = a_.rows();
    switch (kind_) {
      case Preconditioner::None:
        for (int i = 0; i < n; ++i) z[i] = r[i];
        break;
      case Preconditioner::Jacobi:
        for (int b0 = 0; b0 < n; b0 += bs_) apply_block_inverse(b0, r.data() + b0, z.data() + b0, 1.0);
        break;
      case Preconditioner::Ssor: {
        // (D/w + L) y = r
        std::vector<double> s(bs_);
        for (int b0 = 0; b0 < n; b0 += bs_) {
          for (int i = 0; i < bs_; ++i) {
            double acc = r[b0 + i];
            const auto c = a_.row_cols(b0 + i);
            const auto v = a_.row_vals(b0 + i);
            for (std::size_t k = 0; k < c.size() && c[k] < b0; ++k) acc -= v[k] * z[c[k]];
            s[i] = acc;
          }
          apply_block_inverse(b0, s.data(), z.data() + b0, omega_);
        }
        // (D/w + U) z = (D/w) y
        for (int b0 = n - bs_; b0 >= 0; b0 -= bs_) {
          for (int i = 0; i < bs_; ++i) {
            double acc = 0.0;
            const auto c = a_.row_cols(b0 + i);
            const auto v = a_.row_vals(b0 + i);
            for (std::size_t k = c.size(); k-- > 0 && c[k] >= b0 + bs_;) acc += v[k] * z[c[k]];
            s[i] = acc;
          }
          for (int i = 0; i < bs_; ++i) {
            double corr = 0.0;
            for (int j = 0; j < bs_; ++j) corr += inv_[static_cast<std::size_t>(b0 + i) * bs_ + j] * s[j];
            z[b0 + i] -= omega_ * corr;
          }
        }
        break;
      }
    }
  }

private:
  void apply_block_inverse(int b0, const double* in, double* out, double scale) const {
    for (int i = 0; i < bs_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < bs_; ++j) acc += inv_[static_cast<std::size_t>(b0 + i) * bs_ + j] * in[j];
      out[i] = scale * acc;
    }
  }

  const CsrMatrix& a_;
  Preconditioner kind_;
  double omega_;
  int bs_;
  std::vector<double> inv_;  // row-major block inverses, bs_ values per row
};

void check_spd(const CsrMatrix& a) {
  const double asym = a.asymmetry();
  if (asym > 1e-12)
    throw NotSpdError("matrix is not symmetric (relative asymmetry " + std::to_string(asym) + ")");
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(a.rows()), y(a.rows());
  for (int probe = 0; probe < 3; ++probe) {
    for (auto& v : x) v = dist(gen);
    a.multiply(x, y);
    if (!(dot(x, y) > 0.0)) throw NotSpdError("matrix failed the positive-definiteness probe");
  }
}

void residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x,
              std::span<double> r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

Vector initial_guess(int n, std::span<const double> x0) {
  if (x0.empty()) return Vector(n, 0.0);
  if (static_cast<int>(x0.size()) != n) throw std::invalid_argument("initial guess size mismatch");
  return Vector(x0.begin(), x0.end());
}

void check_sizes(const CsrMatrix& a, std::span<const double> rhs) {
  if (static_cast<int>(rhs.size()) != a.rows())
    throw std::invalid_argument("right-hand side size does not match the matrix");
}

}  // namespace

SolveResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, const SolverSettings& s,
                     std::span<const double> x0) {
  check_sizes(a, rhs);
  check_spd(a);
  const int n = a.rows();
  SolveResult out{initial_guess(n, x0), {}};
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    out.report.converged = true;
    return out;
  }

  const PreconditionerOp prec(a, s);
  Vector r(n), z(n), p(n), q(n);
  auto& x = out.x;
  residual(a, rhs, x, r);
  double rel = norm2(r) / bnorm;
  int it = 0;
  while (rel > s.tolerance && it < s.max_iterations) {
    prec.apply(r, z);
    p = z;
    double rz = dot(r, z);
    while (it < s.max_iterations) {
      a.multiply(p, q);
      const double alpha = rz / dot(p, q);
      for (int i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++it;
      if (norm2(r) / bnorm <= s.tolerance) break;
      prec.apply(r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    // Confirm with the true residual; restart from it if drift crept in.
    residual(a, rhs, x, r);
    rel = norm2(r) / bnorm;
  }
  out.report.iterations = it;
  out.report.relative_residual = rel;
  out.report.converged = rel <= s.tolerance;
  return out;
}

SolveResult bicgstab_solve(const CsrMatrix& a, std::span<const double> rhs,
                           const SolverSettings& s, std::span<const double> x0) {
  check_sizes(a, rhs);
  const int n = a.rows();
  SolveResult out{initial_guess(n, x0), {}};
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    out.report.converged = true;
    return out;
  }

  const PreconditionerOp prec(a, s);
  Vector r(n), rhat(n), p(n, 0.0), v(n, 0.0), phat(n), shat(n), t(n), sv(n);
  auto& x = out.x;
  residual(a, rhs, x, r);
  double rel = norm2(r) / bnorm;
  int it = 0;
  while (rel > s.tolerance && it < s.max_iterations) {
    rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    bool restart = false;
    while (it < s.max_iterations) {
      const double rho_new = dot(rhat, r);
      if (rho_new == 0.0 || omega == 0.0) {
        restart = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      prec.apply(p, phat);
      a.multiply(phat, v);
      const double rv = dot(rhat, v);
      if (rv == 0.0) {
        restart = true;
        break;
      }
      alpha = rho / rv;
      for (int i = 0; i < n; ++i) sv[i] = r[i] - alpha * v[i];
      ++it;
      if (norm2(sv) / bnorm <= s.tolerance) {
        for (int i = 0; i < n; ++i) x[i] += alpha * phat[i];
        break;
      }
      prec.apply(sv, shat);
      a.multiply(shat, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, sv) / tt : 0.0;
      for (int i = 0; i < n; ++i) {
        x[i] += alpha * phat[i] + omega * shat[i];
        r[i] = sv[i] - omega * t[i];
      }
      if (norm2(r) / bnorm <= s.tolerance) break;
    }
    residual(a, rhs, x, r);
    const double new_rel = norm2(r) / bnorm;
    if (restart && new_rel >= rel) {
      rel = new_rel;
      break;  // stagnation
    }
    rel = new_rel;
  }
  out.report.iterations = it;
  out.report.relative_residual = rel;
  out.report.converged = rel <= s.tolerance;
  return out;
}

}  // namespace uwpg
