#include "fsmix/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fsmix {

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Squared1D: return "squared1d";
    case LossKind::LeastSquares: return "least_squares";
    case LossKind::Logistic: return "logistic";
    case LossKind::GenericExpConcave: return "generic_exp_concave";
  }
  return "unknown";
}

LossSpec LossSpec::squared_1d(double B, std::optional<double> eta) {
  LossSpec s;
  s.kind = LossKind::Squared1D;
  s.B = B;
  s.eta = eta.value_or(1.0 / (2.0 * B * B));
  s.beta = 2.0;
  s.validate();
  return s;
}

LossSpec LossSpec::least_squares(double B, std::optional<double> eta) {
  LossSpec s = squared_1d(B, eta);
  s.kind = LossKind::LeastSquares;
  s.beta.reset();
  return s;
}

LossSpec LossSpec::logistic(std::optional<double> eta) {
  LossSpec s;
  s.kind = LossKind::Logistic;
  s.eta = eta.value_or(1.0);
  s.validate();
  return s;
}

LossSpec LossSpec::generic_exp_concave(double eta, double G) {
  LossSpec s;
  s.kind = LossKind::GenericExpConcave;
  s.eta = eta;
  s.G = G;
  s.validate();
  return s;
}

void LossSpec::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(eta)) throw ArgumentError("loss spec: eta must be positive");
  if ((kind == LossKind::Squared1D || kind == LossKind::LeastSquares) && !positive(B))
    throw ArgumentError("loss spec: label bound B must be positive");
  if (kind == LossKind::GenericExpConcave && !positive(G))
    throw ArgumentError("loss spec: gradient bound G must be positive");
  if (beta && !positive(*beta)) throw ArgumentError("loss spec: beta must be positive");
}

DomainSpec::DomainSpec(int dim, double radius) : DomainSpec(dim, radius, Vector::Zero(dim)) {}

DomainSpec::DomainSpec(int dim, double radius, Vector c) : d(dim), R(radius), center(std::move(c)) {
  if (d < 1) throw ArgumentError("domain: dimension must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw ArgumentError("domain: radius must be positive");
  if (center.size() != d) throw DimensionError("domain: center dimension mismatch");
}

bool DomainSpec::contains(const Vector& w) const {
  if (w.size() != d) throw DimensionError("domain: point dimension mismatch");
  return (w - center).norm() <= R;
}

Vector DomainSpec::project(const Vector& w) const {
  if (w.size() != d) throw DimensionError("domain: point dimension mismatch");
  Vector offset = w - center;
  const double r = offset.norm();
  if (r <= R) return w;
  double scale = R / r;
  Vector out = center + offset * scale;
  // Rounding in the shift by center can leave the result a hair outside.
  for (int k = 0; (out - center).norm() > R && k < 64; ++k) {
    scale *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon() * (k + 1);
    out = center + offset * scale;
  }
  return out;
}

bool ComparatorSequence::within(const DomainSpec& domain) const {
  for (const auto& v : u)
    if (!domain.contains(v)) return false;
  return true;
}

Vector effective_feature(const LossSpec& spec, const DataPoint& point) {
  if (spec.kind == LossKind::Squared1D) return Vector::Ones(1);
  return point.x;
}

void check_label(const LossSpec& spec, double y) {
  switch (spec.kind) {
    case LossKind::Squared1D:
    case LossKind::LeastSquares:
      if (!std::isfinite(y) || std::abs(y) > spec.B) {
        std::ostringstream msg;
        msg << "label " << y << " outside [-" << spec.B << ", " << spec.B << "]";
        throw LabelRangeError(msg.str());
      }
      return;
    case LossKind::Logistic:
      if (y != 1.0 && y != -1.0) throw LabelRangeError("logistic label must be -1 or +1");
      return;
    case LossKind::GenericExpConcave:
      return;
  }
}

double logistic_loss(double margin) {
  // log(1 + e^{-m}) = max(-m, 0) + log1p(e^{-|m|})
  return std::max(-margin, 0.0) + std::log1p(std::exp(-std::abs(margin)));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_eval(const LossSpec& spec, double prediction, const DataPoint& point) {
  check_label(spec, point.y);
  switch (spec.kind) {
    case LossKind::Squared1D:
    case LossKind::LeastSquares: {
      const double r = prediction - point.y;
      return r * r;
    }
    case LossKind::Logistic:
      return logistic_loss(point.y * prediction);
    case LossKind::GenericExpConcave:
      break;
  }
  throw ArgumentError("loss_eval: generic exp-concave losses have no closed form");
}

double loss_eval(const LossSpec& spec, const Vector& w, const DataPoint& point) {
  const Vector x = effective_feature(spec, point);
  if (w.size() != x.size()) throw DimensionError("loss_eval: prediction/feature dimension mismatch");
  return loss_eval(spec, w.dot(x), point);
}

double path_length(const ComparatorSequence& seq) {
  if (seq.u.empty()) throw ArgumentError("path_length: empty comparator sequence");
  double total = 0.0;
  for (std::size_t t = 1; t < seq.u.size(); ++t) {
    if (seq.u[t].size() != seq.u[t - 1].size())
      throw DimensionError("path_length: inconsistent comparator dimensions");
    total += (seq.u[t] - seq.u[t - 1]).norm();
  }
  return total;
}

RegretReport dynamic_regret(const std::vector<double>& learner_losses,
                            const std::vector<double>& comparator_losses) {
  if (learner_losses.size() != comparator_losses.size())
    throw ArgumentError("dynamic_regret: loss lists differ in length");
  RegretReport report;
  report.learner_loss = learner_losses;
  report.comparator_loss = comparator_losses;
  report.cum_dynamic_regret.reserve(learner_losses.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < learner_losses.size(); ++t) {
    acc += learner_losses[t] - comparator_losses[t];
    report.cum_dynamic_regret.push_back(acc);
  }
  return report;
}

}  // namespace fsmix
