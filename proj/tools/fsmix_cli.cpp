// Command-line front end: run experiments, sweeps and verification suites.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fsmix/bench.hpp"
#include "fsmix/errors.hpp"
#include "fsmix/suites.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;

  void apply(fsmix::ExperimentConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (output_dir) cfg.output_dir = *output_dir;
  }
};

int cmd_run(const std::string& path, const Overrides& ov) {
  fsmix::ExperimentConfig cfg = fsmix::load_config(path);
  ov.apply(cfg);
  const fsmix::ExperimentResult res = fsmix::run_experiment(cfg);
  fsmix::write_outputs(res);
  std::printf("path_length %.6g\n", res.path_length);
  for (const auto& run : res.runs) std::printf("%-24s final_regret %.6g\n", run.algorithm.c_str(), run.report.final_regret());
  std::printf("wrote %s\n", (cfg.output_dir / "experiment.csv").string().c_str());
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& axis, const Overrides& ov) {
  fsmix::ExperimentConfig cfg = fsmix::load_config(path);
  ov.apply(cfg);
  const auto res = fsmix::sweep(cfg, axis == "T" ? fsmix::SweepAxis::T : fsmix::SweepAxis::P);
  fsmix::write_sweep(cfg, res);
  for (const auto& row : res.rows)
    std::printf("T=%-6d P=%-10.4g %-24s %.6g\n", row.T, row.path_length, row.algorithm.c_str(), row.final_regret);
  for (const auto& [name, slope] : res.slopes) std::printf("slope %-24s %.4f\n", name.c_str(), slope);
  return 0;
}

int cmd_verify(const std::string& suite) {
  int failures = 0;
  for (const auto& r : fsmix::run_suite(suite)) {
    std::printf("%s  %s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-share exponential weights over continuous parameter spaces"};
  app.require_subcommand(1);
  Overrides ov;

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one experiment and write experiment.csv and summary.json");
  run->add_option("--config", run_config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", ov.seed, "Override the config seed");
  run->add_option("--output-dir", ov.output_dir, "Override the config output_dir");

  std::string sweep_config, axis;
  auto* sw = app.add_subcommand("sweep", "Scale the horizon or the path length and fit log-log slopes");
  sw->add_option("--config", sweep_config, "Config file")->required()->check(CLI::ExistingFile);
  sw->add_option("--axis", axis, "T or P")->required()->check(CLI::IsMember({"T", "P"}));
  sw->add_option("--seed", ov.seed, "Override the config seed");
  sw->add_option("--output-dir", ov.output_dir, "Override the config output_dir");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run self-verification suites");
  std::vector<std::string> suites = fsmix::suite_names();
  suites.push_back("all");
  verify->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suites));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_config, ov);
    if (*sw) return cmd_sweep(sweep_config, axis, ov);
    if (*verify) return cmd_verify(suite);
  } catch (const fsmix::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
