#include "fsmix/forecasters.hpp"

#include <cmath>
#include <limits>

namespace fsmix {

double log_sum_exp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

Mixture1D pushforward_mixture(const GaussianMixture& mixture, const Vector& x) {
  Mixture1D out;
  out.reserve(mixture.size());
  const bool zero = x.isZero(0.0);
  for (const auto& c : mixture) {
    if (x.size() != c.dist.dim()) throw DimensionError("pushforward_mixture: feature dimension mismatch");
    out.push_back({c.log_weight, zero ? Pushforward1D{0.0, 0.0} : pushforward(c.dist, x)});
  }
  return out;
}

MixLossValue mix_loss_squared(const Mixture1D& mixture, double y, double B) {
  return mix_loss_squared(mixture, y, B, 1.0 / (2.0 * B * B));
}

MixLossValue mix_loss_squared(const Mixture1D& mixture, double y, double /*B*/, double eta) {
  const double kernel_b = 1.0 / std::sqrt(2.0 * eta);
  std::vector<double> terms, lw;
  terms.reserve(mixture.size());
  lw.reserve(mixture.size());
  for (const auto& c : mixture) {
    terms.push_back(c.log_weight + log_sq_exp_integral(c.pf, y, kernel_b));
    lw.push_back(c.log_weight);
  }
  return {-(log_sum_exp(terms) - log_sum_exp(lw)) / eta, y};
}

double greedy_squared_from_mix_losses(double m_minus, double m_plus, double B) {
  const double z = (m_minus - m_plus) / (4.0 * B);
  return std::clamp(z, -B, B);
}

double predict_squared_1d(const Mixture1D& mixture, double B) {
  return predict_squared_1d(mixture, B, 1.0 / (2.0 * B * B));
}

double predict_squared_1d(const Mixture1D& mixture, double B, double eta) {
  const double m_minus = mix_loss_squared(mixture, -B, B, eta).value;
  const double m_plus = mix_loss_squared(mixture, B, B, eta).value;
  return greedy_squared_from_mix_losses(m_minus, m_plus, B);
}

double predict_least_squares(const GaussianMixture& mixture, const Vector& x, double B) {
  return predict_squared_1d(pushforward_mixture(mixture, x), B);
}

double mean_probability(const Mixture1D& mixture, int n_nodes) {
  std::vector<double> lw;
  lw.reserve(mixture.size());
  for (const auto& c : mixture) lw.push_back(c.log_weight);
  const double norm = log_sum_exp(lw);
  double acc = 0.0;
  for (const auto& c : mixture) {
    const double p = std::exp(c.log_weight - norm);
    if (p == 0.0) continue;
    acc += p * gauss_hermite_expect(c.pf, [](double z) { return sigmoid(z); }, n_nodes);
  }
  return acc;
}

double predict_logistic(const Mixture1D& mixture, int n_nodes) {
  const double p = std::clamp(mean_probability(mixture, n_nodes), kProbabilityClamp, 1.0 - kProbabilityClamp);
  return std::log(p) - std::log1p(-p);
}

double predict_logistic(const GaussianMixture& mixture, const Vector& x, int n_nodes) {
  return predict_logistic(pushforward_mixture(mixture, x), n_nodes);
}

MixLossValue mix_loss_logistic(const Mixture1D& mixture, double y, int n_nodes) {
  std::vector<double> terms;
  terms.reserve(mixture.size());
  for (const auto& c : mixture) {
    const double e = gauss_hermite_expect(
        c.pf, [y](double z) { return std::exp(-logistic_loss(y * z)); }, n_nodes);
    terms.push_back(c.log_weight + std::log(e));
  }
  std::vector<double> lw;
  lw.reserve(mixture.size());
  for (const auto& c : mixture) lw.push_back(c.log_weight);
  return {-(log_sum_exp(terms) - log_sum_exp(lw)), y};
}

double squared_mixability_gap(const Mixture1D& mixture, double z, double y, double B) {
  const double r = z - y;
  return r * r - mix_loss_squared(mixture, y, B).value;
}

double logistic_mixability_gap(const Mixture1D& mixture, double z, double y, int n_nodes) {
  return logistic_loss(y * z) - mix_loss_logistic(mixture, y, n_nodes).value;
}

}  // namespace fsmix
