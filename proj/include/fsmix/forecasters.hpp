#pragma once

// Mix predictions from a weighted Gaussian mixture P = sum_i p_i N_i.
//
//   squared:        z = clip_B((m(P, -B) - m(P, B)) / (4B)),
//                   m(P, y) = -2B^2 ln sum_i p_i E_i[exp(-(z - y)^2 / (2B^2))]
//   least squares:  the same rule on the law of w^T x
//   logistic:       z = logit(sum_i p_i E_i[sigmoid(w^T x)])
//
// Weights are carried as logs; every mixture-level sum is a log-sum-exp.

#include <span>
#include <vector>

#include "fsmix/gaussian.hpp"

namespace fsmix {

struct Weighted1D {
  double log_weight = 0.0;
  Pushforward1D pf;
};
using Mixture1D = std::vector<Weighted1D>;

struct WeightedGaussian {
  double log_weight = 0.0;
  GaussianDist dist;

  double weight() const { return std::exp(log_weight); }
};
using GaussianMixture = std::vector<WeightedGaussian>;

struct MixLossValue {
  double value = 0.0;
  double y_probe = 0.0;
};

inline constexpr double kProbabilityClamp = 1e-12;

double log_sum_exp(std::span<const double> values);

/// Law of w^T x under each component; a zero x yields point masses at 0.
Mixture1D pushforward_mixture(const GaussianMixture& mixture, const Vector& x);

MixLossValue mix_loss_squared(const Mixture1D& mixture, double y, double B);

/// Mix loss -(1/eta) ln sum_i p_i E_i[exp(-eta (z - y)^2)]; eta = 1/(2B^2) above.
MixLossValue mix_loss_squared(const Mixture1D& mixture, double y, double B, double eta);

/// clip_B((m_minus - m_plus) / (4B)) given the mix losses at y = -B and y = +B.
double greedy_squared_from_mix_losses(double m_minus, double m_plus, double B);

double predict_squared_1d(const Mixture1D& mixture, double B);
double predict_squared_1d(const Mixture1D& mixture, double B, double eta);
double predict_least_squares(const GaussianMixture& mixture, const Vector& x, double B);

/// sum_i p_i E_i[sigmoid(z)] with Gauss-Hermite on each component.
double mean_probability(const Mixture1D& mixture, int n_nodes = kDefaultHermiteNodes);

double predict_logistic(const Mixture1D& mixture, int n_nodes = kDefaultHermiteNodes);
double predict_logistic(const GaussianMixture& mixture, const Vector& x,
                        int n_nodes = kDefaultHermiteNodes);

/// -ln sum_i p_i E_i[exp(-logistic(y z))] (eta = 1).
MixLossValue mix_loss_logistic(const Mixture1D& mixture, double y, int n_nodes = kDefaultHermiteNodes);

/// Realized loss minus mix loss; non-positive for a valid mix prediction.
double squared_mixability_gap(const Mixture1D& mixture, double z, double y, double B);
double logistic_mixability_gap(const Mixture1D& mixture, double z, double y,
                               int n_nodes = kDefaultHermiteNodes);

}  // namespace fsmix
