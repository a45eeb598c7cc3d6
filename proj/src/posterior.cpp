#include "fsmix/posterior.hpp"

#include <cmath>
#include <sstream>

namespace fsmix {

QuadraticPosterior::QuadraticPosterior(Matrix precision, Vector shift, int birth_round)
    : precision_(std::move(precision)), shift_(std::move(shift)), birth_round_(birth_round) {
  if (precision_.rows() != precision_.cols() || precision_.rows() != shift_.size())
    throw DimensionError("quadratic posterior: precision/shift shape mismatch");
  llt_.compute(precision_);
  if (llt_.info() != Eigen::Success) throw MatrixError("quadratic posterior: precision not positive definite");
  refresh_mean();
}

QuadraticPosterior QuadraticPosterior::anchor(const Vector& w0, int birth_round) {
  return QuadraticPosterior(Matrix::Identity(w0.size(), w0.size()), w0, birth_round);
}

void QuadraticPosterior::refresh_mean() { mean_ = llt_.solve(shift_); }

Matrix QuadraticPosterior::cov() const {
  Matrix c = llt_.solve(Matrix::Identity(dim(), dim()));
  return 0.5 * (c + c.transpose());
}

GaussianDist QuadraticPosterior::distribution() const { return GaussianDist(mean_, cov()); }

Pushforward1D QuadraticPosterior::pushforward(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("quadratic posterior: feature dimension mismatch");
  if (dim() == 1) {
    const double xv = x[0];
    return {mean_[0] * xv, xv * xv / precision_(0, 0)};
  }
  const Vector z = llt_.matrixL().solve(x);
  return {mean_.dot(x), z.squaredNorm()};
}

void QuadraticPosterior::absorb(const Vector& x, double y, double B) {
  if (x.size() != dim()) throw DimensionError("quadratic posterior: feature dimension mismatch");
  if (!std::isfinite(y) || std::abs(y) > B) {
    std::ostringstream msg;
    msg << "label " << y << " outside [-" << B << ", " << B << "]";
    throw LabelRangeError(msg.str());
  }
  const double inv_b2 = 1.0 / (B * B);
  if (dim() == 1) {
    precision_(0, 0) += x[0] * x[0] * inv_b2;
    shift_[0] += y * x[0] * inv_b2;
    mean_[0] = shift_[0] / precision_(0, 0);
    llt_.compute(precision_);
    return;
  }
  precision_.noalias() += (x * x.transpose()) * inv_b2;
  shift_.noalias() += x * (y * inv_b2);
  llt_.rankUpdate(x, inv_b2);
  if (llt_.info() != Eigen::Success) llt_.compute(precision_);
  refresh_mean();
}

QuadraticPosterior quad_update(const QuadraticPosterior& p, const DataPoint& point, double B) {
  QuadraticPosterior out = p;
  out.absorb(point.x, point.y, B);
  return out;
}

double log_quad_mix_factor(const QuadraticPosterior& p, const DataPoint& point, double B) {
  return log_sq_exp_integral(p.pushforward(point.x), point.y, B);
}

double quad_mix_factor(const QuadraticPosterior& p, const DataPoint& point, double B) {
  return std::exp(log_quad_mix_factor(p, point, B));
}

double quad_variance_recursion_check(double sigma1_sq, int steps) {
  if (steps < 1) throw ArgumentError("variance recursion: steps must be >= 1");
  if (!(sigma1_sq >= 0.0)) throw ArgumentError("variance recursion: variance must be >= 0");
  double s = sigma1_sq;
  for (int t = 2; t <= steps; ++t) s = s / (s + 1.0);
  if (sigma1_sq > 0.0) {
    const double expected = 1.0 / sigma1_sq + (steps - 1);
    if (std::abs(1.0 / s - expected) > 1e-12 * expected)
      throw NumericalError("variance recursion broke the telescoped identity");
  }
  return s;
}

LaplacePosterior::LaplacePosterior(Vector w0, double eta, int birth_round)
    : prior_mean_(std::move(w0)), eta_(eta), birth_round_(birth_round) {
  if (!(eta_ > 0.0)) throw ArgumentError("laplace posterior: eta must be positive");
  mode_ = prior_mean_;
  hessian_ = Matrix::Identity(dim(), dim());
  llt_.compute(hessian_);
}

LaplacePosterior LaplacePosterior::anchor(const Vector& w0, double eta, int birth_round) {
  return LaplacePosterior(w0, eta, birth_round);
}

GaussianDist LaplacePosterior::distribution() const {
  Matrix cov = llt_.solve(Matrix::Identity(dim(), dim()));
  cov = 0.5 * (cov + cov.transpose());
  return GaussianDist(mode_, std::move(cov));
}

Pushforward1D LaplacePosterior::pushforward(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("laplace posterior: feature dimension mismatch");
  const Vector z = llt_.matrixL().solve(x);
  return {mode_.dot(x), z.squaredNorm()};
}

double LaplacePosterior::objective(const Vector& w) const {
  double f = 0.5 * (w - prior_mean_).squaredNorm();
  for (const auto& pt : seen_) f += eta_ * logistic_loss(pt.y * w.dot(pt.x));
  return f;
}

Vector LaplacePosterior::gradient(const Vector& w) const {
  Vector g = w - prior_mean_;
  for (const auto& pt : seen_) g -= (eta_ * pt.y * sigmoid(-pt.y * w.dot(pt.x))) * pt.x;
  return g;
}

Matrix LaplacePosterior::objective_hessian(const Vector& w) const {
  Matrix h = Matrix::Identity(dim(), dim());
  for (const auto& pt : seen_) {
    const double s = sigmoid(w.dot(pt.x));
    h.noalias() += (eta_ * s * (1.0 - s)) * (pt.x * pt.x.transpose());
  }
  return h;
}

void LaplacePosterior::absorb(const DataPoint& point, const NewtonOptions& opts) {
  if (point.x.size() != dim()) throw DimensionError("laplace posterior: feature dimension mismatch");
  if (point.y != 1.0 && point.y != -1.0) throw LabelRangeError("logistic label must be -1 or +1");
  seen_.push_back(point);
  try {
    refit(opts);
  } catch (...) {
    seen_.pop_back();
    throw;
  }
}

void LaplacePosterior::refit(const NewtonOptions& opts) {
  Vector w = mode_;
  Vector g = gradient(w);
  double f = objective(w);
  int iter = 0;
  while (g.norm() > opts.grad_tol) {
    if (iter++ >= opts.max_iters) {
      std::ostringstream msg;
      msg << "laplace refit: Newton did not converge in " << opts.max_iters
          << " iterations (|grad| = " << g.norm() << ")";
      throw NumericalError(msg.str());
    }
    const Matrix h = objective_hessian(w);
    const Vector step = h.llt().solve(g);
    double scale = 1.0;
    Vector cand = w - step;
    double fc = objective(cand);
    int halvings = 0;
    while (!(fc <= f + 1e-14 * std::abs(f)) && halvings < opts.max_halvings) {
      scale *= 0.5;
      cand = w - scale * step;
      fc = objective(cand);
      ++halvings;
    }
    w = std::move(cand);
    f = fc;
    g = gradient(w);
  }
  Matrix h = objective_hessian(w);
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) throw NumericalError("laplace refit: Hessian factorization failed");
  mode_ = std::move(w);
  hessian_ = std::move(h);
  llt_ = std::move(llt);
}

LaplacePosterior laplace_update(const LaplacePosterior& p, const DataPoint& point, double eta) {
  if (eta != p.eta()) throw ArgumentError("laplace_update: eta differs from the posterior's");
  LaplacePosterior out = p;
  out.absorb(point);
  return out;
}

double log_laplace_mix_factor(const LaplacePosterior& p, const DataPoint& point, double eta,
                              int n_nodes) {
  if (point.y != 1.0 && point.y != -1.0) throw LabelRangeError("logistic label must be -1 or +1");
  const Pushforward1D pf = p.pushforward(point.x);
  const double y = point.y;
  const double value = gauss_hermite_expect(
      pf, [&](double z) { return std::exp(-eta * logistic_loss(y * z)); }, n_nodes);
  return std::log(std::min(value, 1.0));
}

double laplace_mix_factor(const LaplacePosterior& p, const DataPoint& point, double eta, int n_nodes) {
  return std::exp(log_laplace_mix_factor(p, point, eta, n_nodes));
}

}  // namespace fsmix
