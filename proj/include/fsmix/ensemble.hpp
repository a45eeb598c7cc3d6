#pragma once

// Fixed-share exponential weights over parameter space, run in its
// follow-the-leading-history form: one base learner is born per round from
// the anchor N(w0, I), every learner runs exponential weights on its own
// posterior, and a Hedge layer reweights learners by their mix factors
// E_{P_i}[exp(-eta f_t)] before handing weight mu to the newborn.
//
// The resulting mixture sum_i p_i P_i equals the fixed-share density
// (1 - mu) P~_{t+1} + mu N(w0, I) at every round.

#include <variant>
#include <vector>

#include "fsmix/forecasters.hpp"
#include "fsmix/posterior.hpp"

namespace fsmix {

using Posterior = std::variant<QuadraticPosterior, LaplacePosterior>;

struct BaseLearner {
  int birth_round = 1;
  Posterior posterior;
};

inline constexpr double kLogMixFactorFloor = -700.0;

class EnsembleState {
 public:
  /// mu = 1/T. Throws ArgumentError for T < 1 or a loss without a Gaussian
  /// posterior (GenericExpConcave).
  static EnsembleState init(const LossSpec& spec, const DomainSpec& domain, int horizon);

  /// Same machinery with an explicit share rate; mu = 0 never spawns learners.
  static EnsembleState with_share(const LossSpec& spec, const DomainSpec& domain, int horizon,
                                  double mu);

  /// Index of the round about to be played (1-based).
  int round() const { return round_; }
  int horizon() const { return horizon_; }
  double mu() const { return mu_; }
  double eta() const { return spec_.eta; }
  const LossSpec& loss_spec() const { return spec_; }
  const Vector& anchor_mean() const { return anchor_mean_; }
  GaussianDist anchor() const { return GaussianDist::standard(anchor_mean_); }

  const std::vector<BaseLearner>& learners() const { return learners_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  std::vector<double> weights() const;

  /// Law of w^T x under each learner, weighted.
  Mixture1D pushforward_mixture(const Vector& x) const;
  GaussianMixture mixture() const;

  /// Mix prediction z_t for feature x (ignored for Squared1D).
  double predict(const Vector& x) const;

  /// Meta reweighting, base updates, then the fixed-share spawn.
  /// Throws StateError once `horizon` rounds have been observed.
  void observe(const DataPoint& point);

 private:
  EnsembleState(const LossSpec& spec, const DomainSpec& domain, int horizon, double mu);

  BaseLearner newborn(int birth_round) const;

  LossSpec spec_;
  Vector anchor_mean_;
  int horizon_ = 1;
  double mu_ = 1.0;
  int round_ = 1;
  std::vector<BaseLearner> learners_;
  std::vector<double> log_weights_;
};

EnsembleState observe(EnsembleState state, const DataPoint& point);
GaussianMixture mixture(const EnsembleState& state);

}  // namespace fsmix
