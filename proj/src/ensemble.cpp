#include "fsmix/ensemble.hpp"

#include <cmath>
#include <sstream>

namespace fsmix {

namespace {

bool squared_family(const LossSpec& s) {
  return s.kind == LossKind::Squared1D || s.kind == LossKind::LeastSquares;
}

// Width b of the Gaussian likelihood exp(-(z - y)^2 / (2 b^2)) = exp(-eta (z - y)^2).
double kernel_width(const LossSpec& s) { return 1.0 / std::sqrt(2.0 * s.eta); }

}  // namespace

EnsembleState::EnsembleState(const LossSpec& spec, const DomainSpec& domain, int horizon, double mu)
    : spec_(spec), anchor_mean_(domain.center), horizon_(horizon), mu_(mu) {
  spec_.validate();
  if (horizon < 1) throw ArgumentError("ensemble: horizon must be >= 1");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ArgumentError("ensemble: share rate must lie in [0, 1]");
  switch (spec_.kind) {
    case LossKind::Squared1D:
      if (domain.d != 1) throw DimensionError("ensemble: squared1d requires a 1-D domain");
      [[fallthrough]];
    case LossKind::LeastSquares:
      if (spec_.eta > 1.0 / (2.0 * spec_.B * spec_.B) * (1.0 + 1e-12))
        throw ArgumentError("ensemble: eta above 1/(2B^2) breaks squared-loss mixability");
      break;
    case LossKind::Logistic:
      if (spec_.eta > 1.0 + 1e-12) throw ArgumentError("ensemble: logistic loss is only 1-mixable");
      break;
    case LossKind::GenericExpConcave:
      throw ArgumentError("ensemble: generic exp-concave losses need the projected surrogate learner");
  }
  learners_.push_back(newborn(1));
  log_weights_.push_back(0.0);
}

EnsembleState EnsembleState::init(const LossSpec& spec, const DomainSpec& domain, int horizon) {
  if (horizon < 1) throw ArgumentError("ensemble: horizon must be >= 1");
  return EnsembleState(spec, domain, horizon, 1.0 / horizon);
}

EnsembleState EnsembleState::with_share(const LossSpec& spec, const DomainSpec& domain, int horizon,
                                        double mu) {
  return EnsembleState(spec, domain, horizon, mu);
}

BaseLearner EnsembleState::newborn(int birth_round) const {
  if (spec_.kind == LossKind::Logistic)
    return {birth_round, LaplacePosterior::anchor(anchor_mean_, spec_.eta, birth_round)};
  return {birth_round, QuadraticPosterior::anchor(anchor_mean_, birth_round)};
}

std::vector<double> EnsembleState::weights() const {
  std::vector<double> w;
  w.reserve(log_weights_.size());
  for (double lw : log_weights_) w.push_back(std::exp(lw));
  return w;
}

Mixture1D EnsembleState::pushforward_mixture(const Vector& x_in) const {
  const Vector x = spec_.kind == LossKind::Squared1D ? Vector::Ones(1) : x_in;
  Mixture1D out;
  out.reserve(learners_.size());
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    const Pushforward1D pf =
        std::visit([&](const auto& p) { return p.pushforward(x); }, learners_[i].posterior);
    out.push_back({log_weights_[i], pf});
  }
  return out;
}

GaussianMixture EnsembleState::mixture() const {
  GaussianMixture out;
  out.reserve(learners_.size());
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    out.push_back({log_weights_[i],
                   std::visit([](const auto& p) { return p.distribution(); }, learners_[i].posterior)});
  }
  return out;
}

double EnsembleState::predict(const Vector& x) const {
  const Mixture1D m = pushforward_mixture(x);
  if (spec_.kind == LossKind::Logistic) return predict_logistic(m);
  return predict_squared_1d(m, spec_.B, spec_.eta);
}

void EnsembleState::observe(const DataPoint& point) {
  if (round_ > horizon_) {
    std::ostringstream msg;
    msg << "ensemble: round " << round_ << " exceeds horizon " << horizon_;
    throw StateError(msg.str());
  }
  check_label(spec_, point.y);
  const Vector x = effective_feature(spec_, point);
  if (x.size() != anchor_mean_.size()) throw DimensionError("ensemble: feature dimension mismatch");
  const DataPoint obs{x, point.y};

  if (squared_family(spec_)) {
    const double b = kernel_width(spec_);
    for (std::size_t i = 0; i < learners_.size(); ++i) {
      auto& post = std::get<QuadraticPosterior>(learners_[i].posterior);
      log_weights_[i] += std::max(log_quad_mix_factor(post, obs, b), kLogMixFactorFloor);
      post.absorb(x, point.y, b);
    }
  } else {
    for (std::size_t i = 0; i < learners_.size(); ++i) {
      auto& post = std::get<LaplacePosterior>(learners_[i].posterior);
      log_weights_[i] += std::max(log_laplace_mix_factor(post, obs, spec_.eta), kLogMixFactorFloor);
      try {
        post.absorb(obs);
      } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << "round " << round_ << ", learner born at " << learners_[i].birth_round << ": " << e.what();
        throw NumericalError(msg.str());
      }
    }
  }

  const double norm = log_sum_exp(log_weights_);
  for (double& lw : log_weights_) lw -= norm;

  if (mu_ > 0.0) {
    const double keep = std::log1p(-mu_);
    for (double& lw : log_weights_) lw += keep;
    learners_.push_back(newborn(round_ + 1));
    log_weights_.push_back(std::log(mu_));
  }
  ++round_;
}

EnsembleState observe(EnsembleState state, const DataPoint& point) {
  state.observe(point);
  return state;
}

GaussianMixture mixture(const EnsembleState& state) { return state.mixture(); }

}  // namespace fsmix
