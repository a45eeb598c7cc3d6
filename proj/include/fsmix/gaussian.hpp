#pragma once

// Gaussian arithmetic used by every learner: closed-form entropy and KL,
// 1-D pushforwards along a direction, the two quadratic-exponential
// integrals that drive the exponential-weight updates, and Gauss-Hermite
// quadrature for everything without a closed form.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "fsmix/core.hpp"

namespace fsmix {

/// N(mean, cov) with cov carried alongside its Cholesky factor.
class GaussianDist {
 public:
  /// Throws MatrixError if cov is not symmetric (relative 1e-12) or not
  /// positive definite, DimensionError on a shape mismatch.
  GaussianDist(Vector mean, Matrix cov);

  static GaussianDist standard(const Vector& mean);  // N(mean, I)

  /// N(precision^{-1} shift, precision^{-1}).
  static GaussianDist from_precision(const Matrix& precision, const Vector& shift);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  double log_det() const { return log_det_; }
  const Eigen::LLT<Matrix>& factor() const { return llt_; }

  /// cov^{-1} v through the factorization.
  Vector solve(const Vector& v) const { return llt_.solve(v); }
  double mahalanobis_sq(const Vector& u) const;
  double log_density(const Vector& u) const;
  Vector sample(std::mt19937_64& rng) const;

  /// log-determinant recomputed from scratch (for invariant checks).
  double recompute_log_det() const;

 private:
  Vector mean_;
  Matrix cov_;
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
};

/// Law of w^T x for w ~ N(m, S): N(m^T x, x^T S x).
struct Pushforward1D {
  double mu = 0.0;
  double v = 0.0;
};

double entropy(const GaussianDist& g);

/// KL(q || p); clamped at zero only for round-off below 1e-10.
double kl_divergence(const GaussianDist& q, const GaussianDist& p);

/// Throws ArgumentError for a zero direction, DimensionError on mismatch.
Pushforward1D pushforward(const GaussianDist& g, const Vector& x);

/// log E_{z ~ N(mu, v)}[exp(-(z - y)^2 / (2 B^2))].
double log_sq_exp_integral(const Pushforward1D& pf, double y, double B);
double sq_exp_integral(const Pushforward1D& pf, double y, double B);

/// log E_{s ~ N(mu, v)}[exp(-a s^2 - b s)] for a >= 0.
double log_tilted_gauss_integral(const Pushforward1D& pf, double a, double b);
double tilted_gauss_integral(const Pushforward1D& pf, double a, double b);

/// Physicists' Gauss-Hermite rule: int e^{-t^2} f(t) dt ~ sum w_k f(t_k).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kDefaultHermiteNodes = 64;

/// Cached rule; n must be one of 16, 32, 64, 128 (ArgumentError otherwise).
const GaussHermiteRule& gauss_hermite_rule(int n);

/// E_{z ~ N(mu, v)}[f(z)] via sum_k w_k f(mu + sqrt(2v) t_k) / sqrt(pi).
template <class F>
double gauss_hermite_expect(const Pushforward1D& pf, F&& f, int n_nodes = kDefaultHermiteNodes) {
  const GaussHermiteRule& rule = gauss_hermite_rule(n_nodes);
  const double scale = std::sqrt(2.0 * std::max(pf.v, 0.0));
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    acc += rule.weights[k] * f(pf.mu + scale * rule.nodes[k]);
  return acc * 0.56418958354775628695;  // 1/sqrt(pi)
}

}  // namespace fsmix
