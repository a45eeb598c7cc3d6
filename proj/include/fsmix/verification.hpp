#pragma once

// Independent numerical oracles in one dimension: a grid discretization of
// continuous fixed-share exponential weights, grid mix losses, a brute-force
// search for the best greedy prediction, and a seeded Monte Carlo estimator.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "fsmix/forecasters.hpp"

namespace fsmix {

/// Density values on the uniform grid z_j = lo + j * delta, j = 0..n-1.
/// Normalized as sum_j delta * values[j] = 1.
struct GridDensity {
  double lo = -8.0;
  double hi = 8.0;
  int n = 4001;
  std::vector<double> values;

  double delta() const { return (hi - lo) / (n - 1); }
  double z(int j) const { return lo + j * delta(); }
  double mass() const;
  double mean() const;
  double variance() const;
};

/// CellMass stores the exact probability of each cell [z_j - delta/2, z_j + delta/2]
/// divided by delta; PointSample stores the density at z_j.
enum class Discretization { CellMass, PointSample };

inline constexpr double kDefaultGridHalfWidth = 8.0;
inline constexpr int kDefaultGridPoints = 4001;

/// Throws ArgumentError unless n is odd, n >= 3 and lo < hi.
GridDensity discretize_gaussian(double lo, double hi, int n, double mean, double var,
                                Discretization mode = Discretization::CellMass);
GridDensity discretize_mixture(double lo, double hi, int n, const Mixture1D& mixture,
                               Discretization mode = Discretization::CellMass);

/// Probability mass of N(mean, var) outside [lo, hi].
double truncated_mass(double lo, double hi, double mean, double var);

void normalize(GridDensity& p);

/// Pointwise exp(-eta f_t) reweighting, renormalization, then (1 - mu) p + mu anchor.
/// The scalar feature is x[0] (1 for Squared1D). Throws ArgumentError on a grid mismatch.
GridDensity grid_fixed_share_round(const GridDensity& p, const DataPoint& point, const LossSpec& spec,
                                   double mu, const GridDensity& anchor);

/// -(1/eta) ln sum_j delta p_j exp(-eta loss(z_j x, y)); x = 1 in the first overload.
double grid_mix_loss(const GridDensity& p, double y, const LossSpec& spec);
double grid_mix_loss(const GridDensity& p, const DataPoint& point, const LossSpec& spec);

/// Squared: greedy rule on the grid mix losses at y = -B, +B. Logistic: logit
/// of the grid mean of sigmoid(z x).
double grid_predict(const GridDensity& p, const LossSpec& spec, double x = 1.0);

struct GreedySearch {
  double z_star = 0.0;
  double sup_gap = 0.0;
};

/// max over y in {-B, B} of (z - y)^2 - m(P, y).
double greedy_sup_gap(double z, double m_minus, double m_plus, double B);

/// Grid minimizer of greedy_sup_gap over [-B, B] with step <= `step`.
GreedySearch brute_force_greedy_gap(double m_minus, double m_plus, double B, double step = 1e-3);
GreedySearch brute_force_greedy_gap(const Mixture1D& mixture, double B, double step = 1e-3);
GreedySearch brute_force_greedy_gap(const GridDensity& p, const LossSpec& spec, double step = 1e-3);

/// 1/2 sum_j delta |p_j - q_j|; grids must match.
double total_variation(const GridDensity& p, const GridDensity& q);

struct EquivalenceReport {
  std::vector<double> gaps;  // |z_grid - z_ensemble| per round
  double max_gap = 0.0;
  double final_tv = 0.0;  // grid density vs discretized ensemble mixture after the last round
};

/// Runs the grid fixed-share simulator and the learner ensemble (mu = 1/T) side
/// by side on a one-dimensional stream and compares their predictions.
EquivalenceReport grid_equivalence(const std::vector<DataPoint>& stream, const LossSpec& spec, double lo,
                                   double hi, int n, Discretization mode = Discretization::CellMass);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

inline constexpr std::int64_t kMinMcSamples = 10000;

/// Sample mean and standard error of f(X), X = sampler(rng), rng seeded with `seed`.
template <class Sampler, class F>
McEstimate mc_expectation(Sampler&& sampler, F&& f, std::int64_t n, std::uint64_t seed) {
  if (n < kMinMcSamples) throw ArgumentError("mc_expectation: at least 1e4 samples required");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double v = f(sampler(rng));
    const double d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (v - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace fsmix
