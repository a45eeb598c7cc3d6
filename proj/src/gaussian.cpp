#include "fsmix/gaussian.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

namespace fsmix {

namespace {

constexpr double kSymmetryTol = 1e-12;

void check_symmetric(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
    throw MatrixError("covariance is not symmetric");
}

double log_det_from(const Eigen::LLT<Matrix>& llt) {
  const Matrix& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i));
  return 2.0 * acc;
}

}  // namespace

GaussianDist::GaussianDist(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size())
    throw DimensionError("gaussian: mean/covariance shape mismatch");
  if (mean_.size() == 0) throw DimensionError("gaussian: empty dimension");
  if (!cov_.allFinite() || !mean_.allFinite()) throw MatrixError("gaussian: non-finite parameters");
  check_symmetric(cov_);
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) throw MatrixError("covariance is not positive definite");
  const Matrix& l = llt_.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    if (!(l(i, i) > 0.0)) throw MatrixError("covariance is not positive definite");
  log_det_ = log_det_from(llt_);
}

GaussianDist GaussianDist::standard(const Vector& mean) {
  return GaussianDist(mean, Matrix::Identity(mean.size(), mean.size()));
}

GaussianDist GaussianDist::from_precision(const Matrix& precision, const Vector& shift) {
  if (precision.rows() != precision.cols() || precision.rows() != shift.size())
    throw DimensionError("gaussian: precision/shift shape mismatch");
  check_symmetric(precision);
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) throw MatrixError("precision is not positive definite");
  Matrix cov = llt.solve(Matrix::Identity(precision.rows(), precision.cols()));
  cov = 0.5 * (cov + cov.transpose());
  return GaussianDist(llt.solve(shift), std::move(cov));
}

double GaussianDist::mahalanobis_sq(const Vector& u) const {
  if (u.size() != mean_.size()) throw DimensionError("gaussian: point dimension mismatch");
  const Vector z = llt_.matrixL().solve(u - mean_);
  return z.squaredNorm();
}

double GaussianDist::log_density(const Vector& u) const {
  const double d = static_cast<double>(dim());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det_ + mahalanobis_sq(u));
}

Vector GaussianDist::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(dim());
  for (int i = 0; i < dim(); ++i) z[i] = normal(rng);
  return mean_ + llt_.matrixL() * z;
}

double GaussianDist::recompute_log_det() const {
  Eigen::LLT<Matrix> fresh(cov_);
  return log_det_from(fresh);
}

double entropy(const GaussianDist& g) {
  const double d = static_cast<double>(g.dim());
  return 0.5 * d * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * g.log_det();
}

double kl_divergence(const GaussianDist& q, const GaussianDist& p) {
  if (q.dim() != p.dim()) throw DimensionError("kl_divergence: dimension mismatch");
  const double d = static_cast<double>(q.dim());
  // Tr(S_q S_p^{-1}) = ||L_p^{-1} L_q||_F^2
  const Matrix lq = q.factor().matrixL();
  const Matrix m = p.factor().matrixL().solve(lq);
  const double trace = m.squaredNorm();
  const double maha = p.mahalanobis_sq(q.mean());
  const double kl = 0.5 * (p.log_det() - q.log_det() + trace + maha - d);
  if (kl < 0.0 && kl > -1e-10) return 0.0;
  return kl;
}

Pushforward1D pushforward(const GaussianDist& g, const Vector& x) {
  if (x.size() != g.dim()) throw DimensionError("pushforward: direction dimension mismatch");
  if (x.isZero(0.0)) throw ArgumentError("pushforward: zero direction");
  const Vector lx = g.factor().matrixU() * x;  // L^T x, so x^T S x = ||L^T x||^2
  return {g.mean().dot(x), lx.squaredNorm()};
}

double log_sq_exp_integral(const Pushforward1D& pf, double y, double B) {
  const double b2 = B * B;
  const double v = std::max(pf.v, 0.0);
  const double r = pf.mu - y;
  return 0.5 * (std::log(b2) - std::log(b2 + v)) - r * r / (2.0 * (b2 + v));
}

double sq_exp_integral(const Pushforward1D& pf, double y, double B) {
  return std::exp(log_sq_exp_integral(pf, y, B));
}

double log_tilted_gauss_integral(const Pushforward1D& pf, double a, double b) {
  if (a < 0.0) throw ArgumentError("tilted integral: quadratic coefficient must be >= 0");
  const double v = std::max(pf.v, 0.0);
  const double denom = 1.0 + 2.0 * a * v;
  const double mu = pf.mu;
  return -0.5 * std::log(denom) + (b * b * v - 2.0 * b * mu - 2.0 * a * mu * mu) / (2.0 * denom);
}

double tilted_gauss_integral(const Pushforward1D& pf, double a, double b) {
  return std::exp(log_tilted_gauss_integral(pf, a, b));
}

namespace {

// Newton iteration on the orthonormal Hermite recurrence.
GaussHermiteRule build_rule(int n) {
  constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      double p1 = kPiM4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("Gauss-Hermite node iteration did not converge");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int n) {
  static const std::array<int, 4> kSupported{16, 32, 64, 128};
  static std::array<GaussHermiteRule, 4> cache;
  static std::array<std::once_flag, 4> once;
  for (std::size_t i = 0; i < kSupported.size(); ++i) {
    if (kSupported[i] == n) {
      std::call_once(once[i], [&] { cache[i] = build_rule(n); });
      return cache[i];
    }
  }
  throw ArgumentError("Gauss-Hermite: node count must be 16, 32, 64 or 128");
}

}  // namespace fsmix
