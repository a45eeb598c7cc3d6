#include "fsmix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fsmix/baselines.hpp"
#include "fsmix/ensemble.hpp"
#include "fsmix/oco.hpp"

namespace fsmix {

namespace {

using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(out))
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

Task parse_task(const std::string& v) {
  if (v == "squared1d") return Task::Squared1D;
  if (v == "least_squares") return Task::LeastSquares;
  if (v == "logistic") return Task::Logistic;
  if (v == "oco_quadratic") return Task::OcoQuadratic;
  throw ConfigError("config: unknown task '" + v + "'");
}

Drift parse_drift(const std::string& v) {
  const auto parts = split(v, ':');
  if (parts.size() == 1 && parts[0] == "stationary") return {};
  if (parts.size() == 2 && parts[0] == "piecewise") {
    const long long k = parse_int("drift", parts[1]);
    if (k < 0) throw ConfigError("config: piecewise drift needs k >= 0");
    return {DriftKind::Piecewise, static_cast<int>(k), 0.0};
  }
  if (parts.size() == 2 && parts[0] == "rotating") return {DriftKind::Rotating, 0, parse_double("drift", parts[1])};
  throw ConfigError("config: drift must be stationary, piecewise:<k> or rotating:<rate>, got '" + v + "'");
}

AlgorithmSpec parse_algorithm(const std::string& v) {
  const auto parts = split(v, ':');
  const std::string& head = parts[0];
  if (parts.size() == 1) {
    if (head == "fixed_share") return {AlgorithmKind::FixedShare, 0.0};
    if (head == "static_ew") return {AlgorithmKind::StaticEw, 0.0};
    if (head == "oco") return {AlgorithmKind::Oco, 0.0};
  }
  if (parts.size() == 2) {
    if (head == "ogd_constant") return {AlgorithmKind::OgdConstant, parse_double("algorithms", parts[1])};
    if (head == "ogd_inverse_t") return {AlgorithmKind::OgdInverseT, parse_double("algorithms", parts[1])};
  }
  throw ConfigError("config: unknown algorithm '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

Vector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = n01(rng);
  } while (v.norm() < 1e-8);
  return v / v.norm();
}

// Largest comparator norm the drift can reach.
double comparator_bound(const ExperimentConfig& c) {
  switch (c.drift.kind) {
    case DriftKind::Stationary: return c.offset;
    case DriftKind::Piecewise: return c.offset + 0.5 * c.jump;
    case DriftKind::Rotating: return c.offset + c.amplitude;
  }
  return c.offset;
}

double feature_norm(const ExperimentConfig& c) { return c.task == Task::Squared1D ? 1.0 : c.L; }

LossSpec prediction_loss(const ExperimentConfig& c) {
  switch (c.task) {
    case Task::Squared1D: return LossSpec::squared_1d(c.B);
    case Task::LeastSquares: return LossSpec::least_squares(c.B);
    case Task::Logistic: return LossSpec::logistic();
    case Task::OcoQuadratic: break;
  }
  throw ConfigError("config: oco_quadratic has no prediction loss");
}

// (eta, G) of the per-round loss as a function of w over the domain.
LossSpec oco_loss(const ExperimentConfig& c) {
  switch (c.task) {
    case Task::Squared1D:
    case Task::LeastSquares: {
      const double l = feature_norm(c);
      const double a = c.R * l + c.B;
      return LossSpec::generic_exp_concave(1.0 / (2.0 * a * a), 2.0 * a * l);
    }
    case Task::Logistic: return LossSpec::generic_exp_concave(std::exp(-c.R * c.L), c.L);
    case Task::OcoQuadratic: return LossSpec::generic_exp_concave(1.0 / (8.0 * c.R * c.R), 4.0 * c.R);
  }
  throw ConfigError("config: unknown task");
}

// Loss of parameter w on round t, with squared predictions clipped to [-B, B].
double param_loss(const ExperimentConfig& c, const StreamBundle& s, std::size_t t, const Vector& w) {
  if (c.task == Task::OcoQuadratic) return (w - s.targets[t]).squaredNorm();
  const DataPoint& pt = s.points[t];
  const LossSpec spec = prediction_loss(c);
  double z = w.dot(effective_feature(spec, pt));
  if (c.task != Task::Logistic) z = std::clamp(z, -c.B, c.B);
  return loss_eval(spec, z, pt);
}

Vector param_gradient(const ExperimentConfig& c, const StreamBundle& s, std::size_t t, const Vector& w) {
  if (c.task == Task::OcoQuadratic) return 2.0 * (w - s.targets[t]);
  const DataPoint& pt = s.points[t];
  const Vector x = c.task == Task::Squared1D ? Vector::Ones(1) : pt.x;
  const double z = w.dot(x);
  if (c.task == Task::Logistic) return (-pt.y * sigmoid(-pt.y * z)) * x;
  return (2.0 * (z - pt.y)) * x;
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& ctx) {
  const std::string msg = ctx + ": " + e.what();
  if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
  if (dynamic_cast<const ContractViolation*>(&e)) throw ContractViolation(msg);
  if (dynamic_cast<const StateError*>(&e)) throw StateError(msg);
  if (dynamic_cast<const MatrixError*>(&e)) throw MatrixError(msg);
  if (dynamic_cast<const DimensionError*>(&e)) throw DimensionError(msg);
  if (dynamic_cast<const LabelRangeError*>(&e)) throw LabelRangeError(msg);
  if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
  if (dynamic_cast<const ArgumentError*>(&e)) throw ArgumentError(msg);
  throw Error(msg);
}

template <class Step>
AlgorithmRun run_loop(const ExperimentConfig& c, const StreamBundle& s, const std::string& name, Step&& step) {
  std::vector<double> losses(c.T);
  std::vector<double> comparator(c.T);
  AlgorithmRun run{name, {}, std::vector<std::int64_t>(c.T, 0)};
  for (int t = 0; t < c.T; ++t) {
    try {
      const auto start = c.timing ? Clock::now() : Clock::time_point{};
      losses[t] = step(static_cast<std::size_t>(t));
      if (c.timing)
        run.wallclock_ns[t] = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    } catch (const Error& e) {
      rethrow_with_context(e, name + " at round " + std::to_string(t + 1));
    }
    comparator[t] = param_loss(c, s, t, s.comparators.u[t]);
  }
  run.report = dynamic_regret(losses, comparator);
  run.report.path_length = s.path_length;
  return run;
}

AlgorithmRun run_algorithm(const ExperimentConfig& c, const StreamBundle& s, const AlgorithmSpec& alg) {
  const DomainSpec domain(c.d, c.R);
  switch (alg.kind) {
    case AlgorithmKind::FixedShare:
    case AlgorithmKind::StaticEw: {
      const LossSpec spec = prediction_loss(c);
      EnsembleState st = alg.kind == AlgorithmKind::FixedShare ? EnsembleState::init(spec, domain, c.T)
                                                               : static_ew(spec, domain, c.T);
      return run_loop(c, s, alg.name(), [&](std::size_t t) {
        const DataPoint& pt = s.points[t];
        const double loss = loss_eval(spec, st.predict(pt.x), pt);
        st.observe(pt);
        return loss;
      });
    }
    case AlgorithmKind::OgdConstant:
    case AlgorithmKind::OgdInverseT: {
      const StepSchedule sched = alg.kind == AlgorithmKind::OgdConstant ? StepSchedule{ConstantStep{alg.param}}
                                                                        : StepSchedule{InverseTStep{alg.param}};
      OgdState st = OgdState::init(domain, sched);
      return run_loop(c, s, alg.name(), [&](std::size_t t) {
        const double loss = param_loss(c, s, t, st.w);
        st = ogd_step(std::move(st), param_gradient(c, s, t, st.w), domain);
        return loss;
      });
    }
    case AlgorithmKind::Oco: {
      OcoState st = OcoState::init(oco_loss(c), domain, c.T);
      return run_loop(c, s, alg.name(), [&](std::size_t t) {
        const Vector w = st.play([&](const Vector& at) { return param_gradient(c, s, t, at); });
        return param_loss(c, s, t, w);
      });
    }
  }
  throw ConfigError("config: unknown algorithm");
}

const std::set<std::string> kKeys = {"name",   "task",      "d",        "T",      "B",         "L",
                                     "R",      "drift",     "offset",   "jump",   "amplitude", "noise_sd",
                                     "seed",   "algorithms", "output_dir", "timing", "sweep_T", "sweep_P"};

}  // namespace

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case AlgorithmKind::FixedShare: return "fixed_share";
    case AlgorithmKind::StaticEw: return "static_ew";
    case AlgorithmKind::OgdConstant: return "ogd_constant:" + short_fmt(param);
    case AlgorithmKind::OgdInverseT: return "ogd_inverse_t:" + short_fmt(param);
    case AlgorithmKind::Oco: return "oco";
  }
  return "unknown";
}

std::string to_string(Task t) {
  switch (t) {
    case Task::Squared1D: return "squared1d";
    case Task::LeastSquares: return "least_squares";
    case Task::Logistic: return "logistic";
    case Task::OcoQuadratic: return "oco_quadratic";
  }
  return "unknown";
}

std::string to_string(const Drift& d) {
  switch (d.kind) {
    case DriftKind::Stationary: return "stationary";
    case DriftKind::Piecewise: return "piecewise:" + std::to_string(d.switches);
    case DriftKind::Rotating: return "rotating:" + fmt(d.rate);
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (T < 1) throw ConfigError("config: T must be >= 1");
  if (d < 1) throw ConfigError("config: d must be >= 1");
  if (task == Task::Squared1D && d != 1) throw ConfigError("config: squared1d requires d = 1");
  if (!(B > 0.0) || !(L > 0.0) || !(R > 0.0)) throw ConfigError("config: B, L and R must be positive");
  if (noise_sd < 0.0 || offset < 0.0 || jump < 0.0 || amplitude < 0.0)
    throw ConfigError("config: noise_sd, offset, jump and amplitude must be non-negative");
  if (drift.kind == DriftKind::Piecewise && drift.switches >= T) throw ConfigError("config: need k < T switches");
  if (drift.kind == DriftKind::Rotating && !(drift.rate >= 0.0)) throw ConfigError("config: rotation rate must be >= 0");
  if (algorithms.empty()) throw ConfigError("config: no algorithms listed");
  for (const auto& a : algorithms) {
    if ((a.kind == AlgorithmKind::OgdConstant || a.kind == AlgorithmKind::OgdInverseT) && !(a.param > 0.0))
      throw ConfigError("config: OGD step parameter must be positive");
    if (task == Task::OcoQuadratic && (a.kind == AlgorithmKind::FixedShare || a.kind == AlgorithmKind::StaticEw))
      throw ConfigError("config: " + a.name() + " needs a mixable prediction loss, not oco_quadratic");
  }
  const double ub = comparator_bound(*this);
  if (ub > R) throw ConfigError("config: comparators can leave the domain (offset + drift radius > R)");
  if ((task == Task::Squared1D || task == Task::LeastSquares) && ub * feature_norm(*this) > B)
    throw ConfigError("config: noiseless labels |u^T x| can exceed B");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("config: duplicate key '" + key + "'");
    if (key == "name") cfg.name = val;
    else if (key == "task") cfg.task = parse_task(val);
    else if (key == "d") cfg.d = static_cast<int>(parse_int(key, val));
    else if (key == "T") cfg.T = static_cast<int>(parse_int(key, val));
    else if (key == "B") cfg.B = parse_double(key, val);
    else if (key == "L") cfg.L = parse_double(key, val);
    else if (key == "R") cfg.R = parse_double(key, val);
    else if (key == "drift") cfg.drift = parse_drift(val);
    else if (key == "offset") cfg.offset = parse_double(key, val);
    else if (key == "jump") cfg.jump = parse_double(key, val);
    else if (key == "amplitude") cfg.amplitude = parse_double(key, val);
    else if (key == "noise_sd") cfg.noise_sd = parse_double(key, val);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "timing") cfg.timing = parse_bool(key, val);
    else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& a : split(val, ',')) cfg.algorithms.push_back(parse_algorithm(a));
    } else if (key == "sweep_T") {
      cfg.sweep_T.clear();
      for (const auto& v : split(val, ',')) cfg.sweep_T.push_back(static_cast<int>(parse_int(key, v)));
    } else if (key == "sweep_P") {
      cfg.sweep_P.clear();
      for (const auto& v : split(val, ',')) cfg.sweep_P.push_back(parse_double(key, v));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "name = " << c.name << "\n"
      << "task = " << to_string(c.task) << "\n"
      << "d = " << c.d << "\n"
      << "T = " << c.T << "\n"
      << "B = " << fmt(c.B) << "\nL = " << fmt(c.L) << "\nR = " << fmt(c.R) << "\n"
      << "drift = " << to_string(c.drift) << "\n"
      << "offset = " << fmt(c.offset) << "\njump = " << fmt(c.jump) << "\namplitude = " << fmt(c.amplitude) << "\n"
      << "noise_sd = " << fmt(c.noise_sd) << "\n"
      << "seed = " << c.seed << "\n"
      << "algorithms = ";
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) out << (i ? "," : "") << c.algorithms[i].name();
  out << "\noutput_dir = " << c.output_dir.string() << "\n"
      << "timing = " << (c.timing ? "true" : "false") << "\n";
  out << "sweep_T = ";
  for (std::size_t i = 0; i < c.sweep_T.size(); ++i) out << (i ? "," : "") << c.sweep_T[i];
  out << "\nsweep_P = ";
  for (std::size_t i = 0; i < c.sweep_P.size(); ++i) out << (i ? "," : "") << fmt(c.sweep_P[i]);
  out << "\n";
  return out.str();
}

StreamBundle generate_stream(const ExperimentConfig& c) {
  c.validate();
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const Vector e0 = random_unit(c.d, rng);
  const Vector e = random_unit(c.d, rng);
  Vector e1 = e;
  Vector e2 = Vector::Zero(c.d);
  if (c.d >= 2) {
    Vector v = random_unit(c.d, rng);
    v -= v.dot(e1) * e1;
    e2 = v / v.norm();
  }

  // Piecewise: switch rounds drawn from {2..T} without replacement.
  std::vector<char> is_switch(c.T + 1, 0);
  if (c.drift.kind == DriftKind::Piecewise) {
    std::vector<int> pool(c.T - 1);
    for (int i = 0; i < c.T - 1; ++i) pool[i] = i + 2;
    for (int i = 0; i < c.drift.switches; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
      std::swap(pool[i], pool[pick(rng)]);
      is_switch[pool[i]] = 1;
    }
  }

  StreamBundle s;
  s.points.reserve(c.T);
  s.comparators.u.reserve(c.T);
  double sign = 1.0;
  const double half = 0.5 * c.jump;
  for (int t = 1; t <= c.T; ++t) {
    Vector u = c.offset * e0;
    switch (c.drift.kind) {
      case DriftKind::Stationary: break;
      case DriftKind::Piecewise:
        if (is_switch[t]) sign = -sign;
        u += (sign * half) * e;
        break;
      case DriftKind::Rotating:
        if (c.d == 1) u[0] += c.amplitude * std::sin(c.drift.rate * t);
        else u += c.amplitude * (std::cos(c.drift.rate * t) * e1 + std::sin(c.drift.rate * t) * e2);
        break;
    }
    u = DomainSpec(c.d, c.R).project(u);
    s.comparators.u.push_back(u);

    switch (c.task) {
      case Task::Squared1D:
      case Task::LeastSquares: {
        const Vector x = c.task == Task::Squared1D ? Vector::Ones(1) : Vector(c.L * random_unit(c.d, rng));
        const double mean = u.dot(x);
        double y = mean;
        if (c.noise_sd > 0.0) {
          // Rejection keeps labels in [-B, B] without piling mass on the boundary.
          int tries = 0;
          do {
            y = mean + c.noise_sd * n01(rng);
          } while (std::abs(y) > c.B && ++tries < 1000);
        }
        s.points.push_back({x, std::clamp(y, -c.B, c.B)});
        break;
      }
      case Task::Logistic: {
        const Vector x = c.L * random_unit(c.d, rng);
        const double y = unif(rng) < sigmoid(u.dot(x)) ? 1.0 : -1.0;
        s.points.push_back({x, y});
        break;
      }
      case Task::OcoQuadratic: {
        Vector target = u;
        if (c.noise_sd > 0.0)
          for (int i = 0; i < c.d; ++i) target[i] += c.noise_sd * n01(rng);
        s.targets.push_back(DomainSpec(c.d, c.R).project(target));
        s.points.push_back({Vector::Zero(c.d), 0.0});
        break;
      }
    }
  }
  s.path_length = path_length(s.comparators);
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, generate_stream(cfg)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, const StreamBundle& stream) {
  cfg.validate();
  if (static_cast<int>(stream.points.size()) != cfg.T) throw ConfigError("bench: stream length differs from T");
  const auto start = Clock::now();
  ExperimentResult res{cfg, stream.path_length, {}, 0.0};
  for (const auto& alg : cfg.algorithms) res.runs.push_back(run_algorithm(cfg, stream, alg));
  if (cfg.timing) res.total_runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

std::string experiment_csv(const ExperimentResult& r) {
  std::string out = "round,algorithm,loss,comparator_loss,cum_regret,wallclock_ns\n";
  for (const auto& run : r.runs) {
    const auto& rep = run.report;
    for (std::size_t t = 0; t < rep.learner_loss.size(); ++t) {
      out += std::to_string(t + 1) + "," + run.algorithm + "," + fmt(rep.learner_loss[t]) + "," +
             fmt(rep.comparator_loss[t]) + "," + fmt(rep.cum_dynamic_regret[t]) + "," +
             std::to_string(run.wallclock_ns[t]) + "\n";
    }
  }
  return out;
}

std::string summary_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  const auto& c = r.config;
  j["config"] = {{"name", c.name},
                 {"task", to_string(c.task)},
                 {"d", c.d},
                 {"T", c.T},
                 {"B", c.B},
                 {"L", c.L},
                 {"R", c.R},
                 {"drift", to_string(c.drift)},
                 {"offset", c.offset},
                 {"jump", c.jump},
                 {"amplitude", c.amplitude},
                 {"noise_sd", c.noise_sd},
                 {"seed", c.seed},
                 {"timing", c.timing}};
  auto algs = nlohmann::ordered_json::array();
  for (const auto& a : c.algorithms) algs.push_back(a.name());
  j["config"]["algorithms"] = algs;
  j["label_noise"] = "gaussian, rejection-truncated so squared labels stay in [-B, B]";
  j["path_length"] = r.path_length;
  nlohmann::ordered_json fr;
  for (const auto& run : r.runs) fr[run.algorithm] = run.report.final_regret();
  j["final_regret"] = fr;
  j["total_runtime"] = r.total_runtime_s;
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("bench: cannot write " + p.string());
  out << content;
}

}  // namespace

void write_outputs(const ExperimentResult& r) {
  std::filesystem::create_directories(r.config.output_dir);
  write_file(r.config.output_dir / "experiment.csv", experiment_csv(r));
  write_file(r.config.output_dir / "summary.json", summary_json(r));
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope: need at least two matching points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nan("");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

// Rotation rate whose drift has path length `target` over T rounds.
double rate_for_path(const ExperimentConfig& c, double target) {
  if (!(c.amplitude > 0.0)) throw ConfigError("sweep: rotating drift needs amplitude > 0");
  if (c.d >= 2) {
    const double s = target / (2.0 * c.amplitude * (c.T - 1));
    if (s > 1.0) throw ConfigError("sweep: path length unreachable with this amplitude");
    return 2.0 * std::asin(s);
  }
  auto path = [&](double r) {
    double p = 0.0;
    for (int t = 1; t < c.T; ++t) p += std::abs(std::sin(r * (t + 1)) - std::sin(r * t));
    return c.amplitude * p;
  };
  double lo = 0.0, hi = 1.0;
  if (path(hi) < target) throw ConfigError("sweep: path length unreachable with this amplitude");
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (path(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SweepResult sweep(const ExperimentConfig& cfg, SweepAxis axis) {
  cfg.validate();
  SweepResult res;
  res.axis = axis;
  std::vector<ExperimentConfig> runs;
  if (axis == SweepAxis::T) {
    if (cfg.sweep_T.size() < 2) throw ConfigError("sweep: need at least two T values");
    for (int T : cfg.sweep_T) {
      ExperimentConfig c = cfg;
      c.T = T;
      runs.push_back(c);
    }
  } else {
    if (cfg.sweep_P.size() < 2) throw ConfigError("sweep: need at least two path lengths");
    for (double P : cfg.sweep_P) {
      ExperimentConfig c = cfg;
      if (cfg.drift.kind == DriftKind::Piecewise) {
        if (cfg.drift.switches < 1) throw ConfigError("sweep: piecewise drift needs k >= 1");
        c.jump = P / cfg.drift.switches;
      } else if (cfg.drift.kind == DriftKind::Rotating) {
        c.drift.rate = rate_for_path(c, P);
      } else {
        throw ConfigError("sweep: the P axis needs piecewise or rotating drift");
      }
      runs.push_back(c);
    }
  }
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  std::vector<std::string> order;
  for (const auto& c : runs) {
    const ExperimentResult r = run_experiment(c);
    for (const auto& run : r.runs) {
      res.rows.push_back({c.T, r.path_length, run.algorithm, run.report.final_regret()});
      auto& [xs, ys] = series[run.algorithm];
      if (xs.empty()) order.push_back(run.algorithm);
      xs.push_back(axis == SweepAxis::T ? static_cast<double>(c.T) : r.path_length);
      ys.push_back(run.report.final_regret());
    }
  }
  for (const auto& name : order) res.slopes.emplace_back(name, log_log_slope(series[name].first, series[name].second));
  return res;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "T,path_length,algorithm,final_regret\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.T) + "," + fmt(row.path_length) + "," + row.algorithm + "," + fmt(row.final_regret) + "\n";
  return out;
}

void write_sweep(const ExperimentConfig& cfg, const SweepResult& r) {
  std::filesystem::create_directories(cfg.output_dir);
  write_file(cfg.output_dir / "sweep.csv", sweep_csv(r));
  nlohmann::ordered_json j;
  j["axis"] = r.axis == SweepAxis::T ? "T" : "P";
  nlohmann::ordered_json slopes;
  for (const auto& [name, slope] : r.slopes) slopes[name] = std::isfinite(slope) ? nlohmann::ordered_json(slope) : nullptr;
  j["log_log_slope"] = slopes;
  write_file(cfg.output_dir / "sweep_summary.json", j.dump(2) + "\n");
}

}  // namespace fsmix
