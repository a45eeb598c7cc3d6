#include "fsmix/oco.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fsmix {

namespace {

constexpr double kEigenTol = 1e-10;

std::vector<double> log_weights_of(const GaussianMixture& m) {
  std::vector<double> lw;
  lw.reserve(m.size());
  for (const auto& c : m) lw.push_back(c.log_weight);
  return lw;
}

}  // namespace

SurrogateLoss make_surrogate(const Vector& g, const Vector& w_ref, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("surrogate: gamma must be positive");
  if (g.size() != w_ref.size()) throw DimensionError("surrogate: gradient/reference dimension mismatch");
  return {g, w_ref, gamma};
}

double surrogate_gamma(double eta, double G, double D) {
  if (!(eta > 0.0 && G > 0.0 && D > 0.0)) throw ArgumentError("surrogate_gamma: parameters must be positive");
  return std::min(1.0 / (8.0 * G * D), eta / 2.0);
}

Vector mixture_mean(const GaussianMixture& mixture) {
  if (mixture.empty()) throw ArgumentError("mixture_mean: empty mixture");
  const double norm = log_sum_exp(log_weights_of(mixture));
  Vector acc = Vector::Zero(mixture.front().dist.dim());
  for (const auto& c : mixture) acc += std::exp(c.log_weight - norm) * c.dist.mean();
  return acc;
}

double log_mixture_density(const GaussianMixture& mixture, const Vector& u) {
  std::vector<double> terms;
  terms.reserve(mixture.size());
  for (const auto& c : mixture) terms.push_back(c.log_weight + c.dist.log_density(u));
  return log_sum_exp(terms) - log_sum_exp(log_weights_of(mixture));
}

GaussianMixture ew_update_surrogate(const GaussianMixture& mixture, const SurrogateLoss& f) {
  if (f.g.isZero(0.0)) return mixture;
  // exp(-gamma ft / 2) = exp(-a s^2 - b s)
  const double a = 0.25 * f.gamma * f.gamma;
  const double b = 0.5 * f.gamma;
  GaussianMixture out;
  out.reserve(mixture.size());
  for (const auto& c : mixture) {
    if (c.dist.dim() != f.g.size()) throw DimensionError("ew_update_surrogate: dimension mismatch");
    const Vector sg = c.dist.cov() * f.g;
    const Pushforward1D s{f.g.dot(c.dist.mean() - f.w_ref), f.g.dot(sg)};
    const double denom = 1.0 + 2.0 * a * s.v;
    Vector mean = c.dist.mean() - sg * ((b + 2.0 * a * s.mu) / denom);
    Matrix cov = c.dist.cov() - (2.0 * a / denom) * (sg * sg.transpose());
    cov = 0.5 * (cov + cov.transpose());
    out.push_back({c.log_weight + log_tilted_gauss_integral(s, a, b),
                   GaussianDist(std::move(mean), std::move(cov))});
  }
  const double norm = log_sum_exp(log_weights_of(out));
  for (auto& c : out) c.log_weight -= norm;
  return out;
}

MixtureInM approx_project_to_M(const GaussianMixture& mixture, const DomainSpec& domain, int horizon) {
  if (horizon < 1) throw ArgumentError("projection: horizon must be >= 1");
  const double lo = 1.0 / horizon;
  const double hi = 1.0;
  MixtureInM out;
  out.horizon = horizon;
  out.components.reserve(mixture.size());
  for (const auto& c : mixture) {
    if (c.dist.dim() != domain.d) throw DimensionError("projection: component dimension mismatch");
    Vector mean = domain.project(c.dist.mean());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c.dist.cov());
    if (eig.info() != Eigen::Success) throw MatrixError("projection: eigendecomposition failed");
    const Vector& ev = eig.eigenvalues();
    const bool inside = ev.minCoeff() >= lo && ev.maxCoeff() <= hi;
    if (inside) {
      if (mean == c.dist.mean()) {
        out.components.push_back(c);
      } else {
        out.components.push_back({c.log_weight, GaussianDist(std::move(mean), c.dist.cov())});
      }
      continue;
    }
    const Vector clamped = ev.cwiseMax(lo).cwiseMin(hi);
    Matrix cov = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
    cov = 0.5 * (cov + cov.transpose());
    out.components.push_back({c.log_weight, GaussianDist(std::move(mean), std::move(cov))});
  }
  return out;
}

std::string audit_membership(const MixtureInM& m, const DomainSpec& domain) {
  std::ostringstream why;
  if (m.components.empty()) return "empty mixture";
  const double lo = 1.0 / m.horizon;
  double total = 0.0;
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const auto& c = m.components[i];
    total += c.weight();
    if (!domain.contains(c.dist.mean())) {
      why << "component " << i << " mean outside the domain";
      return why.str();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c.dist.cov(), Eigen::EigenvaluesOnly);
    const double emin = eig.eigenvalues().minCoeff();
    const double emax = eig.eigenvalues().maxCoeff();
    if (emin < lo - kEigenTol || emax > 1.0 + kEigenTol) {
      why << "component " << i << " eigenvalues [" << emin << ", " << emax << "] outside [" << lo << ", 1]";
      return why.str();
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    why << "weights sum to " << total;
    return why.str();
  }
  return {};
}

MixtureInM fixed_share_anchor(const MixtureInM& m, double mu, const GaussianDist& anchor,
                              const DomainSpec& domain) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw ArgumentError("fixed share: mu must lie in [0, 1]");
  const MixtureInM probe{{{0.0, anchor}}, m.horizon};
  if (const std::string why = audit_membership(probe, domain); !why.empty())
    throw ConfigError("fixed share: anchor violates the constraint set: " + why);
  if (mu == 0.0) return m;
  if (mu == 1.0) return probe;
  MixtureInM out = m;
  const double keep = std::log1p(-mu);
  for (auto& c : out.components) c.log_weight += keep;
  out.components.push_back({std::log(mu), anchor});
  return out;
}

OcoState::OcoState(const LossSpec& spec, const DomainSpec& domain, int horizon)
    : spec_(spec), domain_(domain), anchor_(GaussianDist::standard(domain.center)) {
  spec_.validate();
  if (spec_.kind != LossKind::GenericExpConcave)
    throw ArgumentError("oco: loss spec must be generic exp-concave (eta, G)");
  if (horizon < 1) throw ArgumentError("oco: horizon must be >= 1");
  mu_ = 1.0 / horizon;
  gamma_ = surrogate_gamma(spec_.eta, spec_.G, domain_.diameter());
  mixture_.horizon = horizon;
  mixture_.components.push_back({0.0, anchor_});
  if (const std::string why = audit_membership(mixture_, domain_); !why.empty())
    throw ConfigError("oco: anchor violates the constraint set: " + why);
}

OcoState OcoState::init(const LossSpec& spec, const DomainSpec& domain, int horizon) {
  return OcoState(spec, domain, horizon);
}

Vector OcoState::play(const GradientOracle& grad_oracle) {
  if (round_ > mixture_.horizon) {
    std::ostringstream msg;
    msg << "oco: round " << round_ << " exceeds horizon " << mixture_.horizon;
    throw StateError(msg.str());
  }
  const Vector w = predict_mean();
  const Vector g = grad_oracle(w);
  if (g.size() != w.size()) throw DimensionError("oco: gradient dimension mismatch");
  if (!g.allFinite() || g.norm() > spec_.G * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "oco: gradient norm " << g.norm() << " exceeds G = " << spec_.G << " at round " << round_;
    throw ContractViolation(msg.str());
  }
  const SurrogateLoss f = make_surrogate(g, w, gamma_);
  const GaussianMixture tilted = ew_update_surrogate(mixture_.components, f);
  const MixtureInM projected = approx_project_to_M(tilted, domain_, mixture_.horizon);
  mixture_ = fixed_share_anchor(projected, mu_, anchor_, domain_);
  ++round_;
  return w;
}

std::pair<Vector, OcoState> oco_round(OcoState state, const GradientOracle& grad_oracle) {
  Vector w = state.play(grad_oracle);
  return {std::move(w), std::move(state)};
}

}  // namespace fsmix
