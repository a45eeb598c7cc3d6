#pragma once

// Base-learner posteriors and their exponential-weight updates.
//
// QuadraticPosterior is exact: squared-type likelihoods exp(-(w^T x - y)^2 / (2B^2))
// keep a Gaussian prior Gaussian, so the state is the natural parameters
// (precision, shift) with mean = precision^{-1} shift.
//
// LaplacePosterior stands in for the log-concave logistic posterior
// prior * exp(-eta * sum of logistic losses). It refits the mode of
//   F(w) = 0.5 ||w - w0||^2 + eta * sum_i log(1 + exp(-y_i w^T x_i))
// by Newton's method after every observation and uses N(mode, hess F^{-1}).

#include <vector>

#include "fsmix/gaussian.hpp"

namespace fsmix {

class QuadraticPosterior {
 public:
  QuadraticPosterior(Matrix precision, Vector shift, int birth_round = 1);

  /// The anchor N(w0, I): precision I, shift w0.
  static QuadraticPosterior anchor(const Vector& w0, int birth_round);

  const Matrix& precision() const { return precision_; }
  const Vector& shift() const { return shift_; }
  int birth_round() const { return birth_round_; }
  int dim() const { return static_cast<int>(shift_.size()); }

  const Vector& mean() const { return mean_; }
  Matrix cov() const;
  GaussianDist distribution() const;

  /// Law of w^T x; x = 0 gives the point mass (0, 0).
  Pushforward1D pushforward(const Vector& x) const;

  /// In-place rank-one update: precision += x x^T / B^2, shift += y x / B^2.
  void absorb(const Vector& x, double y, double B);

 private:
  void refresh_mean();

  Matrix precision_;
  Vector shift_;
  int birth_round_ = 1;
  Eigen::LLT<Matrix> llt_;
  Vector mean_;
};

/// Posterior after multiplying by exp(-(w^T x - y)^2 / (2B^2)).
/// Throws LabelRangeError for |y| > B.
QuadraticPosterior quad_update(const QuadraticPosterior& p, const DataPoint& point, double B);

/// log E_P[exp(-(w^T x - y)^2 / (2B^2))].
double log_quad_mix_factor(const QuadraticPosterior& p, const DataPoint& point, double B);
double quad_mix_factor(const QuadraticPosterior& p, const DataPoint& point, double B);

/// Runs the 1-D variance recursion s' = s / (s + 1) for `steps - 1` rounds
/// from s_1 = sigma1_sq and returns s_t. Throws NumericalError if the
/// telescoped identity 1/s_t = 1/s_1 + (t - 1) fails beyond round-off.
double quad_variance_recursion_check(double sigma1_sq, int steps);

struct NewtonOptions {
  double grad_tol = 1e-8;
  int max_iters = 50;
  int max_halvings = 40;
};

class LaplacePosterior {
 public:
  static LaplacePosterior anchor(const Vector& w0, double eta, int birth_round);

  const std::vector<DataPoint>& losses_seen() const { return seen_; }
  const Vector& mode() const { return mode_; }
  const Matrix& hessian() const { return hessian_; }
  int birth_round() const { return birth_round_; }
  double eta() const { return eta_; }
  const Vector& prior_mean() const { return prior_mean_; }
  int dim() const { return static_cast<int>(mode_.size()); }

  GaussianDist distribution() const;
  Pushforward1D pushforward(const Vector& x) const;

  double objective(const Vector& w) const;
  Vector gradient(const Vector& w) const;
  Matrix objective_hessian(const Vector& w) const;

  /// Appends the point and refits; throws NumericalError if Newton stalls.
  void absorb(const DataPoint& point, const NewtonOptions& opts = {});

 private:
  void refit(const NewtonOptions& opts);
  LaplacePosterior(Vector w0, double eta, int birth_round);

  Vector prior_mean_;
  double eta_ = 1.0;
  int birth_round_ = 1;
  std::vector<DataPoint> seen_;
  Vector mode_;
  Matrix hessian_;
  Eigen::LLT<Matrix> llt_;
};

/// Throws ArgumentError if eta differs from the posterior's, LabelRangeError
/// for labels outside {-1, +1}.
LaplacePosterior laplace_update(const LaplacePosterior& p, const DataPoint& point, double eta);

/// log E_{N(mode, H^{-1})}[exp(-eta * logistic(y w^T x))] by Gauss-Hermite.
double log_laplace_mix_factor(const LaplacePosterior& p, const DataPoint& point, double eta,
                              int n_nodes = kDefaultHermiteNodes);
double laplace_mix_factor(const LaplacePosterior& p, const DataPoint& point, double eta,
                          int n_nodes = kDefaultHermiteNodes);

}  // namespace fsmix
