#include "fsmix/verification.hpp"

#include <algorithm>
#include <numbers>

#include "fsmix/ensemble.hpp"

namespace fsmix {

namespace {

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// P(a <= X <= b) for standard normal X, evaluated in the thinner tail.
double normal_interval(double a, double b) {
  if (a >= 0.0) return upper_tail(a) - upper_tail(b);
  if (b <= 0.0) return upper_tail(-b) - upper_tail(-a);
  return 1.0 - upper_tail(-a) - upper_tail(b);
}

void check_grid(double lo, double hi, int n) {
  if (!(lo < hi) || n < 3 || n % 2 == 0) throw ArgumentError("grid: need lo < hi and odd n >= 3");
}

void check_same_grid(const GridDensity& p, const GridDensity& q) {
  if (p.n != q.n || p.lo != q.lo || p.hi != q.hi || p.values.size() != q.values.size())
    throw ArgumentError("grid: mismatched grids");
}

void add_gaussian(GridDensity& g, double weight, double mean, double var, Discretization mode) {
  if (!(var > 0.0)) throw ArgumentError("grid: variance must be positive");
  const double sd = std::sqrt(var);
  const double h = g.delta();
  for (int j = 0; j < g.n; ++j) {
    const double z = g.z(j);
    if (mode == Discretization::CellMass) {
      g.values[j] += weight * normal_interval((z - 0.5 * h - mean) / sd, (z + 0.5 * h - mean) / sd) / h;
    } else {
      const double r = (z - mean) / sd;
      g.values[j] += weight * std::exp(-0.5 * r * r) / (sd * std::sqrt(2.0 * std::numbers::pi));
    }
  }
}

double scalar_feature(const LossSpec& spec, const DataPoint& point) {
  const Vector x = effective_feature(spec, point);
  if (x.size() != 1) throw DimensionError("grid: only one-dimensional features are supported");
  return x[0];
}

// ln sum_j delta p_j exp(-eta loss(z_j x, y)).
double grid_log_mix(const GridDensity& p, double x, double y, const LossSpec& spec) {
  const DataPoint pt{Vector::Constant(1, x), y};
  check_label(spec, y);
  std::vector<double> terms;
  terms.reserve(p.values.size());
  const double h = p.delta();
  for (int j = 0; j < p.n; ++j) {
    if (p.values[j] <= 0.0) continue;
    terms.push_back(std::log(h * p.values[j]) - spec.eta * loss_eval(spec, p.z(j) * x, pt));
  }
  if (terms.empty()) throw NumericalError("grid: density has no mass");
  return log_sum_exp(terms);
}

}  // namespace

double GridDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * delta();
}

double GridDensity::mean() const {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += z(j) * values[j];
  return s * delta();
}

double GridDensity::variance() const {
  const double m = mean();
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += (z(j) - m) * (z(j) - m) * values[j];
  return s * delta();
}

GridDensity discretize_gaussian(double lo, double hi, int n, double mean, double var, Discretization mode) {
  check_grid(lo, hi, n);
  GridDensity g{lo, hi, n, std::vector<double>(n, 0.0)};
  add_gaussian(g, 1.0, mean, var, mode);
  normalize(g);
  return g;
}

GridDensity discretize_mixture(double lo, double hi, int n, const Mixture1D& mixture, Discretization mode) {
  check_grid(lo, hi, n);
  if (mixture.empty()) throw ArgumentError("grid: empty mixture");
  std::vector<double> lw;
  for (const auto& c : mixture) lw.push_back(c.log_weight);
  const double norm = log_sum_exp(lw);
  GridDensity g{lo, hi, n, std::vector<double>(n, 0.0)};
  for (const auto& c : mixture) add_gaussian(g, std::exp(c.log_weight - norm), c.pf.mu, c.pf.v, mode);
  normalize(g);
  return g;
}

double truncated_mass(double lo, double hi, double mean, double var) {
  const double sd = std::sqrt(var);
  return upper_tail((mean - lo) / sd) + upper_tail((hi - mean) / sd);
}

void normalize(GridDensity& p) {
  const double m = p.mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw NumericalError("grid: cannot normalize a density without mass");
  for (double& v : p.values) v /= m;
}

GridDensity grid_fixed_share_round(const GridDensity& p, const DataPoint& point, const LossSpec& spec,
                                   double mu, const GridDensity& anchor) {
  check_same_grid(p, anchor);
  if (!(mu >= 0.0 && mu <= 1.0)) throw ArgumentError("grid: mu must lie in [0, 1]");
  if (mu == 1.0) return anchor;
  const double x = scalar_feature(spec, point);
  const DataPoint pt{Vector::Constant(1, x), point.y};
  std::vector<double> loss(p.n);
  for (int j = 0; j < p.n; ++j) loss[j] = loss_eval(spec, p.z(j) * x, pt);
  const double lmin = *std::min_element(loss.begin(), loss.end());
  GridDensity out = p;
  for (int j = 0; j < p.n; ++j) out.values[j] *= std::exp(-spec.eta * (loss[j] - lmin));
  normalize(out);
  for (int j = 0; j < p.n; ++j) out.values[j] = (1.0 - mu) * out.values[j] + mu * anchor.values[j];
  normalize(out);
  return out;
}

double grid_mix_loss(const GridDensity& p, double y, const LossSpec& spec) {
  return -grid_log_mix(p, 1.0, y, spec) / spec.eta;
}

double grid_mix_loss(const GridDensity& p, const DataPoint& point, const LossSpec& spec) {
  return -grid_log_mix(p, scalar_feature(spec, point), point.y, spec) / spec.eta;
}

double grid_predict(const GridDensity& p, const LossSpec& spec, double x) {
  if (spec.kind == LossKind::Logistic) {
    double s = 0.0;
    for (int j = 0; j < p.n; ++j) s += p.values[j] * sigmoid(p.z(j) * x);
    const double q = std::clamp(s * p.delta(), kProbabilityClamp, 1.0 - kProbabilityClamp);
    return std::log(q / (1.0 - q));
  }
  const double m_minus = -grid_log_mix(p, x, -spec.B, spec) / spec.eta;
  const double m_plus = -grid_log_mix(p, x, spec.B, spec) / spec.eta;
  return greedy_squared_from_mix_losses(m_minus, m_plus, spec.B);
}

double greedy_sup_gap(double z, double m_minus, double m_plus, double B) {
  return std::max((z + B) * (z + B) - m_minus, (z - B) * (z - B) - m_plus);
}

GreedySearch brute_force_greedy_gap(double m_minus, double m_plus, double B, double step) {
  if (!(B > 0.0) || !(step > 0.0)) throw ArgumentError("greedy search: B and step must be positive");
  const long cells = static_cast<long>(std::ceil(2.0 * B / step));
  GreedySearch best{-B, greedy_sup_gap(-B, m_minus, m_plus, B)};
  for (long k = 1; k <= cells; ++k) {
    const double z = k == cells ? B : -B + 2.0 * B * static_cast<double>(k) / static_cast<double>(cells);
    const double g = greedy_sup_gap(z, m_minus, m_plus, B);
    if (g < best.sup_gap) best = {z, g};
  }
  return best;
}

GreedySearch brute_force_greedy_gap(const Mixture1D& mixture, double B, double step) {
  return brute_force_greedy_gap(mix_loss_squared(mixture, -B, B).value, mix_loss_squared(mixture, B, B).value,
                                B, step);
}

GreedySearch brute_force_greedy_gap(const GridDensity& p, const LossSpec& spec, double step) {
  return brute_force_greedy_gap(grid_mix_loss(p, -spec.B, spec), grid_mix_loss(p, spec.B, spec), spec.B, step);
}

double total_variation(const GridDensity& p, const GridDensity& q) {
  check_same_grid(p, q);
  double s = 0.0;
  for (int j = 0; j < p.n; ++j) s += std::abs(p.values[j] - q.values[j]);
  return 0.5 * s * p.delta();
}

EquivalenceReport grid_equivalence(const std::vector<DataPoint>& stream, const LossSpec& spec, double lo,
                                   double hi, int n, Discretization mode) {
  if (stream.empty()) throw ArgumentError("equivalence: empty stream");
  const int T = static_cast<int>(stream.size());
  EnsembleState ens = EnsembleState::init(spec, DomainSpec(1, hi - lo), T);
  const GridDensity anchor = discretize_gaussian(lo, hi, n, 0.0, 1.0, mode);
  GridDensity p = anchor;
  EquivalenceReport rep;
  rep.gaps.reserve(stream.size());
  for (const auto& pt : stream) {
    const double x = scalar_feature(spec, pt);
    const double gap = std::abs(grid_predict(p, spec, x) - ens.predict(pt.x));
    rep.gaps.push_back(gap);
    rep.max_gap = std::max(rep.max_gap, gap);
    p = grid_fixed_share_round(p, pt, spec, ens.mu(), anchor);
    ens.observe(pt);
  }
  const Mixture1D mix = ens.pushforward_mixture(Vector::Ones(1));
  rep.final_tv = total_variation(p, discretize_mixture(lo, hi, n, mix, mode));
  return rep;
}

}  // namespace fsmix
