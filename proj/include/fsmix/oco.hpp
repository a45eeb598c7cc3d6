#pragma once

// Projected fixed-share with a surrogate loss, for general exp-concave
// online convex optimization.
//
// Each round the learner plays the mixture mean w_t, receives g_t = grad f_t(w_t),
// and updates its Gaussian mixture by exp(-gamma * ft(w) / 2) with
//
//   ft(w) = s + (gamma / 2) s^2,   s = g_t^T (w - w_t).
//
// The tilt is quadratic along g_t, so every component stays Gaussian in
// closed form. The mixture is then pulled back into the constraint set
// (component means in the domain ball, covariance eigenvalues in [1/T, 1])
// and mixed with the anchor N(w0, I) at rate mu.
//
// The pull-back is a per-component repair: means are projected onto the
// ball and covariance eigenvalues clamped. It keeps every membership
// invariant but is not the KL projection onto the constraint set.

#include <functional>
#include <string>

#include "fsmix/forecasters.hpp"

namespace fsmix {

struct SurrogateLoss {
  Vector g;
  Vector w_ref;
  double gamma = 0.0;

  double direction(const Vector& w) const { return g.dot(w - w_ref); }
  double operator()(const Vector& w) const {
    const double s = direction(w);
    return s + 0.5 * gamma * s * s;
  }
};

/// Throws ArgumentError unless gamma > 0, DimensionError on a size mismatch.
SurrogateLoss make_surrogate(const Vector& g, const Vector& w_ref, double gamma);

/// min{1/(8 G D), eta / 2}.
double surrogate_gamma(double eta, double G, double D);

struct MixtureInM {
  GaussianMixture components;
  int horizon = 1;
};

Vector mixture_mean(const GaussianMixture& mixture);
double log_mixture_density(const GaussianMixture& mixture, const Vector& u);

/// Exact tilt of every component by exp(-gamma * f(w) / 2); weights renormalized.
GaussianMixture ew_update_surrogate(const GaussianMixture& mixture, const SurrogateLoss& f);

/// Per-component repair into the constraint set. Components already inside
/// are returned bit-for-bit.
MixtureInM approx_project_to_M(const GaussianMixture& mixture, const DomainSpec& domain, int horizon);

/// (1 - mu) m + mu anchor. mu = 0 appends nothing; mu = 1 returns the anchor
/// alone. Throws ConfigError if the anchor is outside the constraint set.
MixtureInM fixed_share_anchor(const MixtureInM& m, double mu, const GaussianDist& anchor,
                              const DomainSpec& domain);

/// Empty string when every invariant holds, else a description of the first
/// violation.
std::string audit_membership(const MixtureInM& m, const DomainSpec& domain);

using GradientOracle = std::function<Vector(const Vector&)>;

class OcoState {
 public:
  /// spec must be GenericExpConcave (eta and G); mu = 1/T.
  static OcoState init(const LossSpec& spec, const DomainSpec& domain, int horizon);

  int round() const { return round_; }
  int horizon() const { return mixture_.horizon; }
  double mu() const { return mu_; }
  double gamma() const { return gamma_; }
  const DomainSpec& domain() const { return domain_; }
  const MixtureInM& mixture() const { return mixture_; }
  const GaussianDist& anchor() const { return anchor_; }

  /// Mixture mean; the projection only absorbs rounding of the convex combination.
  Vector predict_mean() const { return domain_.project(mixture_mean(mixture_.components)); }

  /// Plays one round and returns the prediction made before the update.
  /// Throws ContractViolation if the oracle's gradient exceeds G, StateError
  /// past the horizon.
  Vector play(const GradientOracle& grad_oracle);

 private:
  OcoState(const LossSpec& spec, const DomainSpec& domain, int horizon);

  LossSpec spec_;
  DomainSpec domain_;
  GaussianDist anchor_;
  MixtureInM mixture_;
  double mu_ = 1.0;
  double gamma_ = 0.0;
  int round_ = 1;
};

std::pair<Vector, OcoState> oco_round(OcoState state, const GradientOracle& grad_oracle);

}  // namespace fsmix
