#pragma once

// Synthetic non-stationary streams with known generating parameters, the
// run loop over every learner, and CSV / JSON emission.
//
// Config files are flat `key = value` lines; `#` starts a comment.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fsmix/core.hpp"

namespace fsmix {

enum class Task { Squared1D, LeastSquares, Logistic, OcoQuadratic };

enum class DriftKind { Stationary, Piecewise, Rotating };

struct Drift {
  DriftKind kind = DriftKind::Stationary;
  int switches = 0;   // Piecewise
  double rate = 0.0;  // Rotating, radians per round
};

enum class AlgorithmKind { FixedShare, StaticEw, OgdConstant, OgdInverseT, Oco };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::FixedShare;
  double param = 0.0;  // step size for the OGD variants

  std::string name() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Task task = Task::Squared1D;
  int d = 1;
  int T = 1000;
  double B = 1.0;
  double L = 1.0;
  double R = 1.0;
  Drift drift;
  double offset = 0.5;     // norm of the base parameter
  double jump = 0.5;       // parameter jump per switch
  double amplitude = 0.3;  // radius of rotating drift
  double noise_sd = 0.0;
  std::uint64_t seed = 1;
  std::vector<AlgorithmSpec> algorithms{{AlgorithmKind::FixedShare, 0.0}};
  std::filesystem::path output_dir = "out";
  bool timing = false;  // wall-clock fields are 0 unless set, so outputs are reproducible
  std::vector<int> sweep_T{1000, 2000, 4000};
  std::vector<double> sweep_P{1.0, 4.0, 16.0};

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

std::string to_string(Task t);
std::string to_string(const Drift& d);

/// Throws ConfigError on unknown keys, malformed values or failed validation.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& cfg);

struct StreamBundle {
  std::vector<DataPoint> points;
  ComparatorSequence comparators;
  double path_length = 0.0;
  /// oco_quadratic targets c_t; empty for prediction tasks.
  std::vector<Vector> targets;
};

/// Deterministic in cfg.seed. Throws ConfigError if labels cannot stay in range.
StreamBundle generate_stream(const ExperimentConfig& cfg);

struct AlgorithmRun {
  std::string algorithm;
  RegretReport report;
  std::vector<std::int64_t> wallclock_ns;
};

struct ExperimentResult {
  ExperimentConfig config;
  double path_length = 0.0;
  std::vector<AlgorithmRun> runs;
  double total_runtime_s = 0.0;
};

/// Learner failures are rethrown as Error with the algorithm and round attached.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const StreamBundle& stream);

std::string experiment_csv(const ExperimentResult& result);
std::string summary_json(const ExperimentResult& result);

/// Writes experiment.csv and summary.json under cfg.output_dir.
void write_outputs(const ExperimentResult& result);

enum class SweepAxis { T, P };

struct SweepRow {
  int T = 0;
  double path_length = 0.0;
  std::string algorithm;
  double final_regret = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::T;
  std::vector<SweepRow> rows;
  /// Least-squares slope of ln(regret) against ln(T) or ln(P_T), per algorithm.
  std::vector<std::pair<std::string, double>> slopes;
};

/// Axis T varies the horizon over cfg.sweep_T with the drift held fixed.
/// Axis P holds T and sets the drift so the path length hits each of cfg.sweep_P:
/// jump = P / k for piecewise drift, rate from P for rotating drift.
/// Throws ConfigError with fewer than two axis values.
SweepResult sweep(const ExperimentConfig& cfg, SweepAxis axis);

std::string sweep_csv(const SweepResult& result);
void write_sweep(const ExperimentConfig& cfg, const SweepResult& result);

/// Slope of the least-squares line through (ln x, ln y).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fsmix
