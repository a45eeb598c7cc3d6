#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "fsmix/bench.hpp"

using namespace fsmix;

namespace {

struct CsvRow {
  int round;
  std::string algorithm;
  double loss, comparator_loss, cum_regret;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string f[6];
    for (auto& s : f) std::getline(ls, s, ',');
    rows.push_back({std::stoi(f[0]), f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(
      "# comment\n"
      "task = least_squares\n"
      "d = 3   # trailing\n"
      "T = 200\n"
      "drift = piecewise:4\n"
      "algorithms = fixed_share, static_ew, ogd_constant:0.05\n"
      "seed = 9\n");
  CHECK(cfg.task == Task::LeastSquares);
  CHECK(cfg.d == 3);
  CHECK(cfg.drift.kind == DriftKind::Piecewise);
  CHECK(cfg.drift.switches == 4);
  REQUIRE(cfg.algorithms.size() == 3);
  CHECK(cfg.algorithms[2].name() == "ogd_constant:0.05");
  CHECK(parse_config(dump_config(cfg)).algorithms.size() == 3);
  CHECK(dump_config(parse_config(dump_config(cfg))) == dump_config(cfg));

  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("T = 10\nT = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("T = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("task = squared1d\nd = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("offset = 0.9\njump = 0.5\ndrift = piecewise:2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("task = oco_quadratic\nalgorithms = fixed_share\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("T = 5\ndrift = piecewise:5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("algorithms = ogd_constant:-1\n"), ConfigError);
}

TEST_CASE("stream generation") {
  ExperimentConfig cfg;
  cfg.T = 300;
  SUBCASE("stationary comparators do not move") {
    const StreamBundle s = generate_stream(cfg);
    CHECK(s.points.size() == 300);
    CHECK(s.path_length == 0.0);
    for (std::size_t t = 0; t < s.points.size(); ++t) {
      CHECK(std::abs(s.points[t].y) == doctest::Approx(0.5));
      CHECK(s.points[t].y == s.comparators.u[t][0]);
    }
  }
  SUBCASE("piecewise path length is k times the jump") {
    cfg.drift = {DriftKind::Piecewise, 6, 0.0};
    cfg.jump = 0.4;
    const StreamBundle s = generate_stream(cfg);
    CHECK(s.path_length == doctest::Approx(6 * 0.4).epsilon(1e-12));
    CHECK(path_length(s.comparators) == s.path_length);
  }
  SUBCASE("noisy labels stay in range") {
    cfg.task = Task::LeastSquares;
    cfg.d = 4;
    cfg.noise_sd = 0.8;
    cfg.drift = {DriftKind::Rotating, 0, 0.05};
    const StreamBundle s = generate_stream(cfg);
    CHECK(s.comparators.within(DomainSpec(4, cfg.R)));
    for (const auto& p : s.points) {
      CHECK(std::abs(p.y) <= cfg.B);
      CHECK(p.x.norm() <= cfg.L + 1e-12);
    }
  }
  SUBCASE("logistic labels are signs") {
    cfg.task = Task::Logistic;
    cfg.d = 2;
    for (const auto& p : generate_stream(cfg).points) CHECK(std::abs(p.y) == 1.0);
  }
  SUBCASE("same seed, same stream") {
    cfg.noise_sd = 0.3;
    const StreamBundle a = generate_stream(cfg), b = generate_stream(cfg);
    for (std::size_t t = 0; t < a.points.size(); ++t) CHECK(a.points[t].y == b.points[t].y);
    cfg.seed = 2;
    const StreamBundle c = generate_stream(cfg);
    bool differs = false;
    for (std::size_t t = 0; t < a.points.size(); ++t) differs |= a.points[t].y != c.points[t].y;
    CHECK(differs);
  }
}

TEST_CASE("experiment outputs") {
  ExperimentConfig cfg = parse_config(
      "task = least_squares\nd = 2\nT = 150\nnoise_sd = 0.2\ndrift = piecewise:3\n"
      "algorithms = fixed_share, static_ew, ogd_constant:0.1, ogd_inverse_t:1, oco\n");
  const ExperimentResult r = run_experiment(cfg);
  REQUIRE(r.runs.size() == 5);
  const std::string csv = experiment_csv(r);
  CHECK(csv.rfind("round,algorithm,loss,comparator_loss,cum_regret,wallclock_ns\n", 0) == 0);
  CHECK(csv == experiment_csv(run_experiment(cfg)));

  std::map<std::string, double> acc;
  for (const CsvRow& row : parse_csv(csv)) {
    CHECK(row.loss >= 0.0);
    CHECK(row.loss <= 4.0 * cfg.B * cfg.B);
    acc[row.algorithm] += row.loss - row.comparator_loss;
    CHECK(acc[row.algorithm] == row.cum_regret);
  }
  CHECK(acc.size() == 5);

  const std::string js = summary_json(r);
  CHECK(js.find("\"final_regret\"") != std::string::npos);
  CHECK(js.find("\"path_length\"") != std::string::npos);
}

TEST_CASE("oco quadratic task") {
  ExperimentConfig cfg = parse_config("task = oco_quadratic\nd = 2\nT = 200\nalgorithms = oco, ogd_inverse_t:0.5\n");
  const ExperimentResult r = run_experiment(cfg);
  for (const auto& run : r.runs) CHECK(std::isfinite(run.report.final_regret()));
}

TEST_CASE("sweeps") {
  ExperimentConfig cfg = parse_config("T = 400\ndrift = rotating:0.01\namplitude = 0.4\nsweep_P = 0.5, 2\n");
  const SweepResult p = sweep(cfg, SweepAxis::P);
  REQUIRE(p.rows.size() == 2);
  CHECK(p.rows[0].path_length == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(p.rows[1].path_length == doctest::Approx(2.0).epsilon(1e-6));
  cfg.sweep_T = {100};
  CHECK_THROWS_AS(sweep(cfg, SweepAxis::T), ConfigError);
  CHECK(log_log_slope({1.0, 2.0, 4.0}, {3.0, 6.0, 12.0}) == doctest::Approx(1.0));
  CHECK(log_log_slope({1.0, 10.0}, {5.0, 0.05}) == doctest::Approx(-2.0));
}
