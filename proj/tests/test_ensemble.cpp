#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fsmix/baselines.hpp"
#include "fsmix/bench.hpp"
#include "fsmix/ensemble.hpp"
#include "fsmix/verification.hpp"

using namespace fsmix;

namespace {

DataPoint scalar(double y) { return {Vector::Ones(1), y}; }

double weight_sum(const EnsembleState& s) {
  const auto w = s.weights();
  return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

TEST_CASE("initial state") {
  const LossSpec sq = LossSpec::squared_1d(1.0);
  const DomainSpec dom(1, 1.0);
  for (int T : {1, 10, 1000000}) {
    const EnsembleState s = EnsembleState::init(sq, dom, T);
    CHECK(s.mu() == 1.0 / T);
    CHECK(s.round() == 1);
    CHECK(s.learners().size() == 1);
    CHECK(s.weights()[0] == 1.0);
    CHECK(s.anchor_mean() == dom.center);
  }
  CHECK_THROWS_AS(EnsembleState::init(sq, dom, 0), ArgumentError);
  CHECK_THROWS_AS(EnsembleState::init(LossSpec::generic_exp_concave(1.0, 1.0), dom, 5), ArgumentError);
  CHECK_THROWS_AS(EnsembleState::init(LossSpec::squared_1d(1.0, 0.9), dom, 5), ArgumentError);
  CHECK_THROWS_AS(EnsembleState::init(sq, DomainSpec(2, 1.0), 5), DimensionError);
}

TEST_CASE("first round hands mu to the newborn") {
  EnsembleState s = EnsembleState::init(LossSpec::squared_1d(1.0), DomainSpec(1, 1.0), 10);
  s = observe(s, scalar(0.4));
  REQUIRE(s.learners().size() == 2);
  CHECK(s.weights()[0] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(s.weights()[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s.learners()[1].birth_round == 2);
  CHECK(s.round() == 2);
}

TEST_CASE("equal mix factors reproduce the fixed-share weight recursion") {
  // x = 0 gives every learner the same factor exp(-y^2 / (2B^2)).
  const int T = 40;
  const double mu = 1.0 / T;
  EnsembleState s = EnsembleState::init(LossSpec::least_squares(1.0), DomainSpec(3, 1.0), T);
  for (int t = 1; t <= 25; ++t) {
    s.observe({Vector::Zero(3), 0.3});
    const auto w = s.weights();
    REQUIRE(w.size() == static_cast<std::size_t>(t + 1));
    CHECK(w[0] == doctest::Approx(std::pow(1 - mu, t)).epsilon(1e-12));
    for (int i = 1; i <= t; ++i) {
      const int born = s.learners()[i].birth_round;
      CHECK(born == i + 1);
      CHECK(w[i] == doctest::Approx(mu * std::pow(1 - mu, t + 1 - born)).epsilon(1e-12));
    }
  }
}

TEST_CASE("horizon is enforced") {
  EnsembleState s = EnsembleState::init(LossSpec::squared_1d(1.0), DomainSpec(1, 1.0), 3);
  for (int t = 0; t < 3; ++t) s.observe(scalar(0.1));
  CHECK_THROWS_AS(s.observe(scalar(0.1)), StateError);
  CHECK_THROWS_AS(s.observe(scalar(1.5)), StateError);
  EnsembleState fresh = EnsembleState::init(LossSpec::squared_1d(1.0), DomainSpec(1, 1.0), 3);
  CHECK_THROWS_AS(fresh.observe(scalar(1.5)), LabelRangeError);
}

TEST_CASE("weights stay on the simplex") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SUBCASE("squared") {
    EnsembleState s = EnsembleState::init(LossSpec::squared_1d(1.0), DomainSpec(1, 1.0), 300);
    for (int t = 1; t <= 300; ++t) {
      s.observe(scalar(u(rng)));
      CHECK(s.learners().size() == static_cast<std::size_t>(t + 1));
      CHECK(std::abs(weight_sum(s) - 1.0) <= 1e-12);
    }
  }
  SUBCASE("logistic") {
    EnsembleState s = EnsembleState::init(LossSpec::logistic(), DomainSpec(2, 1.0), 60);
    for (int t = 1; t <= 60; ++t) {
      Vector x(2);
      x << u(rng), u(rng);
      s.observe({x, u(rng) > 0 ? 1.0 : -1.0});
      CHECK(std::abs(weight_sum(s) - 1.0) <= 1e-12);
      for (double w : s.weights()) CHECK(w > 0.0);
    }
  }
}

TEST_CASE("prediction is the mix prediction of the mixture") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  EnsembleState s = EnsembleState::init(LossSpec::least_squares(1.0), DomainSpec(2, 1.0), 50);
  for (int t = 0; t < 30; ++t) {
    Vector x(2);
    x << u(rng), u(rng);
    x /= std::max(1.0, x.norm());
    const double z = s.predict(x);
    CHECK(z == doctest::Approx(predict_least_squares(s.mixture(), x, 1.0)).epsilon(1e-12));
    CHECK(std::abs(z) <= 1.0);
    s.observe({x, 0.8 * u(rng)});
  }
}

TEST_CASE("ensemble mixture tracks the grid simulator") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<DataPoint> stream;
  for (int t = 0; t < 200; ++t) stream.push_back(scalar(t < 100 ? 0.6 + 0.3 * u(rng) : -0.5 + 0.3 * u(rng)));
  const EquivalenceReport rep = grid_equivalence(stream, LossSpec::squared_1d(1.0), -8.0, 8.0, 4001);
  CHECK(rep.max_gap <= 1e-5);
  CHECK(rep.final_tv <= 1e-3);
}

TEST_CASE("static exponential weights equals share rate zero") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const LossSpec spec = LossSpec::squared_1d(1.0);
  EnsembleState a = static_ew(spec, DomainSpec(1, 1.0), 100);
  EnsembleState b = EnsembleState::with_share(spec, DomainSpec(1, 1.0), 100, 0.0);
  for (int t = 0; t < 100; ++t) {
    const DataPoint p = scalar(u(rng));
    CHECK(a.predict(p.x) == b.predict(p.x));
    a.observe(p);
    b.observe(p);
    CHECK(a.learners().size() == 1);
  }
}

TEST_CASE("fixed share costs little on a stationary stream") {
  std::mt19937_64 rng(35);
  std::normal_distribution<double> noise(0.0, 0.1);
  const LossSpec spec = LossSpec::squared_1d(1.0);
  const int T = 500;
  EnsembleState fs = EnsembleState::init(spec, DomainSpec(1, 1.0), T);
  EnsembleState st = static_ew(spec, DomainSpec(1, 1.0), T);
  double lf = 0.0, ls = 0.0;
  for (int t = 0; t < T; ++t) {
    const DataPoint p = scalar(std::clamp(0.5 + noise(rng), -1.0, 1.0));
    lf += loss_eval(spec, fs.predict(p.x), p);
    ls += loss_eval(spec, st.predict(p.x), p);
    fs.observe(p);
    st.observe(p);
  }
  CHECK((lf - ls) / T <= 0.05);
}

TEST_CASE("fixed share beats static weights under switches") {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExperimentConfig cfg;
    cfg.task = Task::Squared1D;
    cfg.T = 1000;
    cfg.drift = {DriftKind::Piecewise, 10, 0.0};
    cfg.jump = 1.0;
    cfg.seed = seed;
    cfg.algorithms = {{AlgorithmKind::FixedShare, 0.0}, {AlgorithmKind::StaticEw, 0.0}};
    const ExperimentResult r = run_experiment(cfg);
    if (r.runs[0].report.final_regret() < r.runs[1].report.final_regret()) ++wins;
  }
  CHECK(wins >= 9);
}
