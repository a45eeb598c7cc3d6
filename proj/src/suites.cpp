#include "fsmix/suites.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "fsmix/ensemble.hpp"
#include "fsmix/oco.hpp"
#include "fsmix/verification.hpp"

namespace fsmix {

namespace {

using Suite = std::vector<CheckResult>;

CheckResult check(std::string name, bool ok, const std::string& detail) { return {std::move(name), ok, detail}; }

std::string describe(double value, double limit) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << value << " (limit " << limit << ")";
  return s.str();
}

Matrix random_spd(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n01(rng);
  return a * a.transpose() / d + 0.5 * Matrix::Identity(d, d);
}

GaussianDist random_gaussian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Vector m(d);
  for (int i = 0; i < d; ++i) m[i] = 0.5 * n01(rng);
  return GaussianDist(m, random_spd(d, rng));
}

Mixture1D random_mixture(std::mt19937_64& rng, int max_components, double spread) {
  std::uniform_int_distribution<int> count(1, max_components);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> var(0.01, 2.0);
  Mixture1D m;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) m.push_back({3.0 * u(rng), {spread * u(rng), var(rng)}});
  return m;
}

Suite gaussian_suite() {
  Suite out;
  std::mt19937_64 rng(101);
  double worst_kl = 0.0, worst_h = 0.0;
  for (int d : {1, 2, 5}) {
    const GaussianDist q = random_gaussian(d, rng);
    const GaussianDist p = random_gaussian(d, rng);
    const auto sampler = [&](std::mt19937_64& r) { return q.sample(r); };
    const auto kl = mc_expectation(sampler, [&](const Vector& w) { return q.log_density(w) - p.log_density(w); },
                                   200000, 7 + d);
    const auto h = mc_expectation(sampler, [&](const Vector& w) { return -q.log_density(w); }, 200000, 11 + d);
    worst_kl = std::max(worst_kl, std::abs(kl.estimate - kl_divergence(q, p)) / kl.standard_error);
    worst_h = std::max(worst_h, std::abs(h.estimate - entropy(q)) / h.standard_error);
  }
  out.push_back(check("kl closed form vs Monte Carlo (in standard errors)", worst_kl <= 4.0, describe(worst_kl, 4.0)));
  out.push_back(check("entropy closed form vs Monte Carlo (in standard errors)", worst_h <= 4.0, describe(worst_h, 4.0)));

  const GaussianDist g = random_gaussian(3, rng);
  const double self = kl_divergence(g, g);
  out.push_back(check("kl of a distribution with itself", std::abs(self) <= 1e-12, describe(self, 1e-12)));

  double worst_sq = 0.0, worst_tilt = 0.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Pushforward1D pf{u(rng), 0.05 + std::abs(u(rng))};
    const double y = u(rng);
    const double gh = gauss_hermite_expect(pf, [&](double s) { return std::exp(-(s - y) * (s - y) / 2.0); }, 128);
    worst_sq = std::max(worst_sq, std::abs(sq_exp_integral(pf, y, 1.0) - gh));
    const double a = 0.3 * std::abs(u(rng)), b = u(rng);
    const double gt = gauss_hermite_expect(pf, [&](double s) { return std::exp(-a * s * s - b * s); }, 128);
    worst_tilt = std::max(worst_tilt, std::abs(tilted_gauss_integral(pf, a, b) - gt) / gt);
  }
  out.push_back(check("squared-exponential integral vs quadrature", worst_sq <= 1e-12, describe(worst_sq, 1e-12)));
  out.push_back(check("tilted Gaussian integral vs quadrature (relative)", worst_tilt <= 1e-12,
                      describe(worst_tilt, 1e-12)));
  return out;
}

Suite posterior_suite() {
  Suite out;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const LossSpec spec = LossSpec::squared_1d(1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    QuadraticPosterior post = QuadraticPosterior::anchor(Vector::Zero(1), 1);
    GridDensity grid = discretize_gaussian(-8.0, 8.0, 4001, 0.0, 1.0, Discretization::PointSample);
    for (int t = 0; t < 20; ++t) {
      const DataPoint pt{Vector::Ones(1), u(rng)};
      post.absorb(pt.x, pt.y, 1.0);
      grid = grid_fixed_share_round(grid, pt, spec, 0.0, grid);
    }
    worst = std::max({worst, std::abs(post.mean()[0] - grid.mean()), std::abs(post.cov()(0, 0) - grid.variance())});
  }
  out.push_back(check("closed-form posterior vs grid quadrature", worst <= 1e-8, describe(worst, 1e-8)));

  double worst_tel = 0.0;
  for (double s1 : {1.0, 0.5, 3.0, 0.1}) {
    const double s = quad_variance_recursion_check(s1, 40);
    worst_tel = std::max(worst_tel, std::abs(1.0 / s - (1.0 / s1 + 39.0)) / (1.0 / s1 + 39.0));
  }
  out.push_back(check("telescoped variance identity", worst_tel <= 1e-13, describe(worst_tel, 1e-13)));

  QuadraticPosterior fast = QuadraticPosterior::anchor(Vector::Zero(3), 1);
  Matrix lambda = Matrix::Identity(3, 3);
  Vector shift = Vector::Zero(3);
  for (int t = 0; t < 30; ++t) {
    Vector x(3);
    for (int i = 0; i < 3; ++i) x[i] = u(rng);
    const double y = 0.9 * u(rng);
    fast.absorb(x, y, 1.0);
    lambda += x * x.transpose();
    shift += y * x;
  }
  const double drift = (fast.mean() - lambda.llt().solve(shift)).norm();
  out.push_back(check("rank-one updates vs direct solve", drift <= 1e-10, describe(drift, 1e-10)));

  LaplacePosterior lap = LaplacePosterior::anchor(Vector::Zero(2), 1.0, 1);
  for (int t = 0; t < 20; ++t) {
    Vector x(2);
    x << u(rng), u(rng);
    lap.absorb({x, u(rng) > 0 ? 1.0 : -1.0});
  }
  const double grad = lap.gradient(lap.mode()).norm();
  out.push_back(check("Laplace mode is stationary", grad <= 1e-8, describe(grad, 1e-8)));
  return out;
}

Suite equivalence_suite() {
  Suite out;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<DataPoint> stream;
  for (int t = 0; t < 50; ++t) stream.push_back({Vector::Ones(1), u(rng)});
  const LossSpec spec = LossSpec::squared_1d(1.0);
  const EquivalenceReport rep = grid_equivalence(stream, spec, -8.0, 8.0, 4001);
  out.push_back(check("grid fixed share vs learner ensemble, predictions", rep.max_gap <= 1e-3,
                      describe(rep.max_gap, 1e-3)));
  out.push_back(check("grid fixed share vs learner ensemble, total variation", rep.final_tv <= 1e-3,
                      describe(rep.final_tv, 1e-3)));

  EnsembleState ens = EnsembleState::init(spec, DomainSpec(1, 1.0), 50);
  double worst = 0.0;
  for (const auto& pt : stream) ens.observe(pt);
  double total = 0.0;
  for (double w : ens.weights()) total += w;
  worst = std::abs(total - 1.0);
  out.push_back(check("ensemble weights on the simplex", worst <= 1e-12, describe(worst, 1e-12)));
  return out;
}

Suite forecasters_suite() {
  Suite out;
  std::mt19937_64 rng(404);
  const double B = 1.0;
  double worst_gap = -1e300, worst_opt = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Mixture1D mix = random_mixture(rng, 4, rep % 4 == 0 ? 5.0 : 1.5);
    const double z = predict_squared_1d(mix, B);
    for (int k = 0; k <= 100; ++k) worst_gap = std::max(worst_gap, squared_mixability_gap(mix, z, -B + 0.02 * k, B));
    const double m_minus = mix_loss_squared(mix, -B, B).value;
    const double m_plus = mix_loss_squared(mix, B, B).value;
    const GreedySearch best = brute_force_greedy_gap(m_minus, m_plus, B);
    worst_opt = std::max(worst_opt, greedy_sup_gap(z, m_minus, m_plus, B) - best.sup_gap);
  }
  out.push_back(check("squared mixability gap non-positive", worst_gap <= 1e-9, describe(worst_gap, 1e-9)));
  out.push_back(check("greedy rule vs brute-force search", worst_opt <= 1e-6, describe(worst_opt, 1e-6)));

  double worst_log = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Mixture1D mix = random_mixture(rng, 4, 2.0);
    const double z = predict_logistic(mix, 64);
    for (double y : {-1.0, 1.0}) worst_log = std::max(worst_log, std::abs(logistic_mixability_gap(mix, z, y, 128)));
  }
  out.push_back(check("logistic mixability gap with exact components", worst_log <= 1e-6, describe(worst_log, 1e-6)));
  return out;
}

Suite oco_suite() {
  Suite out;
  const int d = 3, T = 100;
  const double R = 1.0, L = 1.0;
  const DomainSpec domain(d, R);
  const LossSpec spec = LossSpec::generic_exp_concave(std::exp(-R * L), L);
  OcoState st = OcoState::init(spec, domain, T);
  std::mt19937_64 rng(505);
  std::normal_distribution<double> n01;
  auto unit = [&] {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = n01(rng);
    return Vector(v / v.norm());
  };
  bool proper = true;
  std::string first_violation;
  double worst_density = -1e300;
  const double bound = 0.5 * d * std::log(T / (2.0 * std::numbers::pi));
  for (int t = 0; t < T; ++t) {
    const Vector x = L * unit();
    const double y = n01(rng) > 0 ? 1.0 : -1.0;
    const Vector w = st.play([&](const Vector& at) { return Vector((-y * sigmoid(-y * at.dot(x))) * x); });
    proper = proper && domain.contains(w);
    if (const std::string why = audit_membership(st.mixture(), domain); !why.empty() && first_violation.empty())
      first_violation = "round " + std::to_string(t + 1) + ": " + why;
    for (int k = 0; k < 5; ++k)
      worst_density = std::max(worst_density, log_mixture_density(st.mixture().components, domain.project(unit() * std::abs(n01(rng)))));
    for (const auto& c : st.mixture().components)
      worst_density = std::max(worst_density, log_mixture_density(st.mixture().components, c.dist.mean()));
  }
  out.push_back(check("predictions stay in the domain", proper, proper ? "all rounds" : "violation"));
  out.push_back(check("mixture stays in the constraint set", first_violation.empty(),
                      first_violation.empty() ? "all rounds" : first_violation));
  out.push_back(check("log density bound", worst_density <= bound + 1e-9, describe(worst_density - bound, 1e-9)));

  const double gamma = surrogate_gamma(spec.eta, spec.G, domain.diameter());
  double worst = -1e300;
  for (int k = 0; k < 2000; ++k) {
    const Vector x = L * unit();
    const double y = n01(rng) > 0 ? 1.0 : -1.0;
    const Vector w = domain.project(unit() * std::abs(n01(rng)));
    const Vector v = domain.project(unit() * std::abs(n01(rng)));
    const Vector g = (-y * sigmoid(-y * w.dot(x))) * x;
    const double s = g.dot(w - v);
    const double lhs = logistic_loss(y * w.dot(x)) - logistic_loss(y * v.dot(x));
    worst = std::max(worst, lhs - (s - 0.5 * gamma * s * s));
  }
  out.push_back(check("surrogate lower bound on logistic losses", worst <= 1e-12, describe(worst, 1e-12)));
  return out;
}

const std::vector<std::pair<std::string, std::function<Suite()>>>& registry() {
  static const std::vector<std::pair<std::string, std::function<Suite()>>> r = {
      {"gaussian", gaussian_suite},
      {"posterior", posterior_suite},
      {"ensemble-equivalence", equivalence_suite},
      {"forecasters", forecasters_suite},
      {"oco", oco_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  std::vector<CheckResult> out;
  for (const auto& [suite, fn] : registry()) {
    if (name != "all" && name != suite) continue;
    for (auto& r : fn()) {
      r.name = suite + ": " + r.name;
      out.push_back(std::move(r));
    }
  }
  if (out.empty()) throw ArgumentError("verify: unknown suite '" + name + "'");
  return out;
}

}  // namespace fsmix
