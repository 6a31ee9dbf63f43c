// Copyright 2026 The iotledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iotledger/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "iotledger/error.hpp"
#include "iotledger/random.hpp"

namespace iotledger {

namespace {

constexpr std::uint64_t kTraceTag = 0x7ace;
constexpr std::uint64_t kTrainTraceTag = 0x7a17;
constexpr std::uint64_t kSubsetTag = 0x5b5e7;
constexpr std::uint64_t kTreeTag = 0x7fee;
constexpr std::uint64_t kStageTag = 0x57a6e;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool is_informed(const ExperimentConfig& config) {
  return config.attack.mode == AttackSpec::Mode::kInformed;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  tree.validate();
  if (const auto* s = std::get_if<SyntheticSource>(&trace_source)) {
    if (!(s->duration > 0.0)) {
      throw std::invalid_argument("synthetic duration must be positive");
    }
    if (s->jitter && !(*s->jitter >= 0.0 && *s->jitter < 1.0)) {
      throw std::invalid_argument("jitter must lie in [0, 1)");
    }
  }
  if (attack.mode == AttackSpec::Mode::kBlind && attack.train_devices.empty() &&
      attack.train_count < 1) {
    throw std::invalid_argument("blind attack needs training devices");
  }
  for (std::size_t i = 1; i < pipeline.size(); ++i) {
    if (std::holds_alternative<AggregateParams>(pipeline[i])) {
      throw std::invalid_argument("aggregate must be the first pipeline stage");
    }
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  if (const auto* s = std::get_if<SyntheticSource>(&trace_source)) {
    nlohmann::ordered_json syn;
    syn["profiles"] = s->profile_file ? s->profile_file->string() : "builtin";
    syn["duration"] = s->duration;
    syn["jitter"] = s->jitter ? nlohmann::ordered_json(*s->jitter)
                              : nlohmann::ordered_json(nullptr);
    j["trace"] = {{"synthetic", syn}};
  } else {
    const auto& c = std::get<CsvSource>(trace_source);
    j["trace"] = {{"csv",
                   {{"path", c.path.string()},
                    {"blocklist", std::vector<std::string>(c.blocklist.begin(),
                                                           c.blocklist.end())}}}};
  }
  j["pipeline"] = pipeline_to_json(pipeline);
  if (is_informed(*this)) {
    j["attack"] = {{"mode", "informed"}};
  } else {
    j["attack"] = {{"mode", "blind"},
                   {"train_devices", attack.train_devices},
                   {"train_count", attack.train_count}};
  }
  j["window"] = window;
  j["tree"] = {{"max_depth", tree.max_depth},
               {"min_samples_split", tree.min_samples_split},
               {"min_impurity_decrease", tree.min_impurity_decrease},
               {"seed", tree.seed}};
  j["folds"] = folds;
  j["trials"] = trials;
  j["base_seed"] = base_seed;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("trace")) {
    const auto& t = j.at("trace");
    if (t.contains("csv")) {
      CsvSource csv;
      const auto& node = t.at("csv");
      if (node.is_string()) {
        csv.path = node.get<std::string>();
      } else {
        csv.path = node.at("path").get<std::string>();
        if (node.contains("blocklist")) {
          const auto list = node.at("blocklist").get<std::vector<std::string>>();
          csv.blocklist.insert(list.begin(), list.end());
        }
      }
      c.trace_source = csv;
    } else {
      SyntheticSource syn;
      const auto& node = t.contains("synthetic") ? t.at("synthetic") : t;
      const auto profiles = node.value("profiles", std::string("builtin"));
      if (profiles != "builtin") syn.profile_file = profiles;
      syn.duration = node.value("duration", syn.duration);
      if (node.contains("jitter")) {
        if (node.at("jitter").is_null()) {
          syn.jitter.reset();
        } else {
          syn.jitter = node.at("jitter").get<double>();
        }
      }
      c.trace_source = syn;
    }
  }
  if (j.contains("pipeline")) c.pipeline = pipeline_from_json(j.at("pipeline"));
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    const auto mode = a.is_string() ? a.get<std::string>()
                                    : a.value("mode", std::string("informed"));
    if (mode == "blind") {
      c.attack.mode = AttackSpec::Mode::kBlind;
      if (a.is_object()) {
        c.attack.train_devices =
            a.value("train_devices", std::vector<std::string>{});
        c.attack.train_count = a.value("train_count", c.attack.train_count);
      }
    } else if (mode != "informed") {
      throw Error("unknown attack mode '" + mode + "'");
    }
  }
  c.window = j.value("window", c.window);
  if (j.contains("tree")) {
    const auto& t = j.at("tree");
    c.tree.max_depth = t.value("max_depth", c.tree.max_depth);
    c.tree.min_samples_split =
        t.value("min_samples_split", c.tree.min_samples_split);
    c.tree.min_impurity_decrease =
        t.value("min_impurity_decrease", c.tree.min_impurity_decrease);
    c.tree.seed = t.value("seed", c.tree.seed);
  }
  c.folds = j.value("folds", c.folds);
  c.trials = j.value("trials", c.trials);
  c.base_seed = j.value("base_seed", c.base_seed);
  c.validate();
  return c;
}

std::string ExperimentConfig::digest() const {
  return to_hex(sha256(to_json().dump()));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ExperimentConfig::from_json(nlohmann::json::parse(buffer.str()));
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  // Guard against rounding pushing the mean outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::uint64_t trial_seed(const ExperimentConfig& config, int trial) {
  return config.base_seed + static_cast<std::uint64_t>(trial);
}

std::vector<DeviceProfile> resolve_profiles(const SyntheticSource& source) {
  auto profiles = source.profile_file ? load_profiles(*source.profile_file)
                                      : builtin_profiles();
  if (source.jitter) {
    for (auto& p : profiles) p.jitter_frac = *source.jitter;
  }
  return profiles;
}

namespace {

struct ResolvedSource {
  std::vector<DeviceProfile> profiles;  // synthetic only
  std::optional<TraceSet> fixed_trace;  // csv only
  double duration = 0.0;
};

ResolvedSource resolve(const ExperimentConfig& config) {
  ResolvedSource r;
  if (const auto* s = std::get_if<SyntheticSource>(&config.trace_source)) {
    r.profiles = resolve_profiles(*s);
    r.duration = s->duration;
  } else {
    const auto& c = std::get<CsvSource>(config.trace_source);
    r.fixed_trace = ingest_csv(c.path, IngestOptions{c.blocklist});
    r.duration = r.fixed_trace->duration;
  }
  return r;
}

TraceSet make_trace(const ResolvedSource& source, std::uint64_t seed) {
  if (source.fixed_trace) return *source.fixed_trace;
  return synth_trace(source.profiles, source.duration,
                     derive_seed(seed, kTraceTag));
}

std::set<std::string> device_universe(const ResolvedSource& source,
                                      const TraceSet& trace) {
  if (!source.fixed_trace) {
    std::set<std::string> names;
    for (const auto& p : source.profiles) names.insert(p.name);
    return names;
  }
  return trace.devices;
}

std::vector<std::string> choose_train_devices(const ExperimentConfig& config,
                                              const std::set<std::string>& all,
                                              std::uint64_t seed) {
  if (!config.attack.train_devices.empty()) return config.attack.train_devices;
  std::vector<std::string> pool(all.begin(), all.end());
  Rng rng(derive_seed(seed, kSubsetTag));
  shuffle(std::span<std::string>(pool), rng);
  const auto keep = std::min<std::size_t>(
      pool.size(), static_cast<std::size_t>(config.attack.train_count));
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());
  return pool;
}

TraceSet make_train_trace(const ResolvedSource& source, const TraceSet& trace,
                          const std::vector<std::string>& devices,
                          std::uint64_t seed) {
  const std::set<std::string> wanted(devices.begin(), devices.end());
  if (source.fixed_trace) {
    TraceSet out;
    for (const auto& r : trace.records) {
      if (wanted.contains(r.device)) out.records.push_back(r);
    }
    normalize(out);
    out.duration = trace.duration;
    return out;
  }
  std::vector<DeviceProfile> subset;
  for (const auto& p : source.profiles) {
    if (wanted.contains(p.name)) subset.push_back(p);
  }
  if (subset.empty()) {
    throw Error("blind attack: none of the training devices has a profile");
  }
  return synth_trace(subset, source.duration,
                     derive_seed(seed, kTrainTraceTag));
}

}  // namespace

TraceSet trial_trace(const ExperimentConfig& config, std::uint64_t seed) {
  return make_trace(resolve(config), seed);
}

TreeParams trial_tree_params(const ExperimentConfig& config,
                             std::uint64_t seed) {
  TreeParams p = config.tree;
  p.seed = derive_seed(seed ^ config.tree.seed, kTreeTag);
  return p;
}

std::vector<TransformSpec> trial_pipeline(
    std::span<const TransformSpec> pipeline, std::uint64_t seed,
    bool training) {
  std::vector<TransformSpec> out;
  out.reserve(pipeline.size());
  for (std::size_t i = 0; i < pipeline.size(); ++i) {
    std::uint64_t own = 0;
    std::visit(
        [&own](const auto& p) {
          if constexpr (requires { p.seed; }) own = p.seed;
        },
        pipeline[i]);
    const std::uint64_t stage =
        derive_seed(derive_seed(seed, kStageTag + i), own) ^
        (training ? 0x9d2c5680a5a5a5a5ULL : 0);
    out.push_back(with_seed(pipeline[i], derive_seed(stage, 1)));
  }
  return out;
}

namespace {

// Everything one trial needs before any pipeline is applied.
struct TrialInputs {
  std::uint64_t seed = 0;
  TraceSet trace;
  std::vector<std::string> train_devices;
  std::optional<TraceSet> train_trace;
};

TrialInputs prepare_trial(const ExperimentConfig& config,
                          const ResolvedSource& source, int trial) {
  TrialInputs in;
  in.seed = trial_seed(config, trial);
  in.trace = make_trace(source, in.seed);
  if (!is_informed(config)) {
    in.train_devices = choose_train_devices(
        config, device_universe(source, in.trace), in.seed);
    in.train_trace =
        make_train_trace(source, in.trace, in.train_devices, in.seed);
  }
  return in;
}

std::string trial_stage(int trial, const std::string& what) {
  return "trial " + std::to_string(trial) + " " + what;
}

// Builds the ledgers of `pipeline` from `trace`, reusing `baseline` when the
// pipeline has no aggregation stage.
LedgerSet build_ledgers(const TraceSet& trace,
                        std::span<const TransformSpec> pipeline,
                        const LedgerSet* baseline) {
  if (baseline && (pipeline.empty() ||
                   !std::holds_alternative<AggregateParams>(pipeline[0]))) {
    return apply_transforms(*baseline, pipeline, 0);
  }
  return compose(trace, pipeline);
}

TrialResult evaluate(const ExperimentConfig& config, const TrialInputs& in,
                     std::span<const TransformSpec> pipeline,
                     const LedgerSet* baseline,
                     const LedgerSet* train_baseline, int trial) {
  TrialResult result;
  result.seed = in.seed;
  const auto tree = trial_tree_params(config, in.seed);
  const auto test_pipeline = trial_pipeline(pipeline, in.seed, false);
  try {
    const LedgerSet test = build_ledgers(in.trace, test_pipeline, baseline);
    result.transactions = test.transaction_count();
    result.genuine_transactions = test.genuine_count();
    if (is_informed(config)) {
      result.report = informed_attack(test, config.window, tree, config.folds);
    } else {
      const auto train_pipeline = trial_pipeline(pipeline, in.seed, true);
      const LedgerSet train =
          build_ledgers(*in.train_trace, train_pipeline, train_baseline);
      result.report = blind_attack(train, test, config.window, tree);
      result.train_devices = in.train_devices;
    }
  } catch (const StageError& e) {
    throw StageError("trial " + std::to_string(trial), e.what());
  } catch (const std::exception& e) {
    throw StageError(trial_stage(trial, "attack"), e.what());
  }
  return result;
}

}  // namespace

nlohmann::ordered_json RunResult::to_json() const {
  nlohmann::ordered_json j;
  j["config_digest"] = config_digest;
  j["accuracy"] = {{"mean", accuracy.mean},
                   {"min", accuracy.min},
                   {"max", accuracy.max},
                   {"std", accuracy.std}};
  auto& list = j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : trials) {
    nlohmann::ordered_json tj;
    tj["seed"] = t.seed;
    tj["transactions"] = t.transactions;
    tj["genuine_transactions"] = t.genuine_transactions;
    tj["overhead"] = t.overhead();
    if (!t.train_devices.empty()) tj["train_devices"] = t.train_devices;
    tj["report"] = t.report.to_json();
    list.push_back(std::move(tj));
  }
  return j;
}

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const ResolvedSource source = resolve(config);
  RunResult out;
  out.config_digest = config.digest();
  std::vector<double> accuracies;
  for (int trial = 0; trial < config.trials; ++trial) {
    const TrialInputs in = prepare_trial(config, source, trial);
    out.trials.push_back(
        evaluate(config, in, config.pipeline, nullptr, nullptr, trial));
    accuracies.push_back(out.trials.back().report.accuracy);
  }
  out.accuracy = summarize(accuracies);
  return out;
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDelay: return "delay";
    case SweepAxis::kMerge: return "merge";
    case SweepAxis::kAggregate: return "aggregate";
    case SweepAxis::kSpoof: return "spoof";
    case SweepAxis::kCombined: return "combined";
  }
  return "unknown";
}

SweepAxis axis_from_name(const std::string& name) {
  for (auto axis : {SweepAxis::kDelay, SweepAxis::kMerge, SweepAxis::kAggregate,
                    SweepAxis::kSpoof, SweepAxis::kCombined}) {
    if (axis_name(axis) == name) return axis;
  }
  throw Error("unknown sweep axis '" + name + "'");
}

std::vector<double> default_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDelay: return {0.0, 0.5, 2.0, 30.0};
    case SweepAxis::kMerge: return {1, 3, 5, 9, 13, 17};
    case SweepAxis::kAggregate: return {1, 2, 3, 5};
    case SweepAxis::kSpoof: return {0, 1, 2, 3};
    case SweepAxis::kCombined: return {0.0, 0.5, 2.0, 30.0};
  }
  return {};
}

namespace {

std::string parameter_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDelay: return "d_max";
    case SweepAxis::kMerge: return "devices_per_ledger";
    case SweepAxis::kAggregate: return "packets_per_tx";
    case SweepAxis::kSpoof: return "ratio";
    case SweepAxis::kCombined: return "d_max";
  }
  return "value";
}

int as_count(double v, const char* what) {
  const double r = std::round(v);
  if (r != v || r < 1) {
    throw std::invalid_argument(std::string(what) +
                                " sweep values must be positive integers");
  }
  return static_cast<int>(r);
}

std::vector<TransformSpec> point_pipeline(std::span<const TransformSpec> base,
                                          SweepAxis axis, double value,
                                          const CombinedStages& combined) {
  std::vector<TransformSpec> out(base.begin(), base.end());
  switch (axis) {
    case SweepAxis::kDelay:
      out.push_back(DelayParams{value, 0});
      break;
    case SweepAxis::kMerge:
      out.push_back(MergeParams{as_count(value, "merge"), 0});
      break;
    case SweepAxis::kAggregate:
      out.insert(out.begin(), AggregateParams{as_count(value, "aggregate"), 0.0});
      break;
    case SweepAxis::kSpoof: {
      SpoofParams p;
      p.ratio = value;
      out.push_back(p);
      break;
    }
    case SweepAxis::kCombined:
      out.insert(out.begin(), AggregateParams{combined.packets_per_tx, 0.0});
      out.push_back(MergeParams{combined.devices_per_ledger, 0});
      out.push_back(DelayParams{value, 0});
      break;
  }
  return out;
}

}  // namespace

const SweepPoint& SweepResult::at(double value) const {
  for (const auto& p : points) {
    if (p.value == value) return p;
  }
  throw std::out_of_range("no sweep point at " + shortest(value));
}

SweepResult sweep(const ExperimentConfig& config, SweepAxis axis,
                  std::span<const double> values,
                  const CombinedStages& combined) {
  config.validate();
  if (values.empty()) throw std::invalid_argument("sweep needs values");
  const ResolvedSource source = resolve(config);

  std::vector<std::vector<TransformSpec>> pipelines;
  for (double v : values) {
    pipelines.push_back(point_pipeline(config.pipeline, axis, v, combined));
    if (pipelines.back().size() > 1) {
      for (std::size_t i = 1; i < pipelines.back().size(); ++i) {
        if (std::holds_alternative<AggregateParams>(pipelines.back()[i])) {
          throw std::invalid_argument(
              "sweep: aggregation may only appear once, as the first stage");
        }
      }
    }
  }

  SweepResult result;
  result.parameter = parameter_name(axis);
  result.attack = is_informed(config) ? "informed" : "blind";
  result.config_digest = config.digest();
  result.tree = config.tree;
  result.window = config.window;

  std::vector<std::vector<double>> accuracies(values.size());
  std::vector<double> overhead(values.size(), 0.0);
  for (int trial = 0; trial < config.trials; ++trial) {
    const TrialInputs in = prepare_trial(config, source, trial);
    result.seeds.push_back(in.seed);
    if (trial == 0) {
      result.num_devices = device_universe(source, in.trace).size();
    }
    // Shared per-trial baselines for pipelines without aggregation.
    std::optional<LedgerSet> baseline;
    std::optional<LedgerSet> train_baseline;
    if (config.pipeline.empty() && axis != SweepAxis::kAggregate &&
        axis != SweepAxis::kCombined) {
      try {
        baseline = build_baseline(in.trace);
        if (in.train_trace) train_baseline = build_baseline(*in.train_trace);
      } catch (const std::exception& e) {
        throw StageError(trial_stage(trial, "baseline"), e.what());
      }
    }
    for (std::size_t p = 0; p < values.size(); ++p) {
      const TrialResult r =
          evaluate(config, in, pipelines[p], baseline ? &*baseline : nullptr,
                   train_baseline ? &*train_baseline : nullptr, trial);
      accuracies[p].push_back(r.report.accuracy);
      overhead[p] += r.overhead();
    }
  }
  for (std::size_t p = 0; p < values.size(); ++p) {
    SweepPoint point;
    point.value = values[p];
    point.accuracies = accuracies[p];
    point.accuracy = summarize(accuracies[p]);
    point.overhead = overhead[p] / static_cast<double>(config.trials);
    result.points.push_back(std::move(point));
  }
  result.random_guess_floor =
      result.num_devices == 0
          ? 0.0
          : 1.0 / static_cast<double>(result.num_devices) - 0.02;
  return result;
}

nlohmann::ordered_json SweepResult::to_json() const {
  nlohmann::ordered_json j;
  j["parameter"] = parameter;
  j["attack"] = attack;
  j["config_digest"] = config_digest;
  j["seeds"] = seeds;
  j["tree"] = {{"max_depth", tree.max_depth},
               {"min_samples_split", tree.min_samples_split},
               {"min_impurity_decrease", tree.min_impurity_decrease},
               {"seed", tree.seed}};
  j["window"] = window;
  j["num_devices"] = num_devices;
  j["random_guess_floor"] = random_guess_floor;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    pts.push_back({{"value", p.value},
                   {"mean", p.accuracy.mean},
                   {"min", p.accuracy.min},
                   {"max", p.accuracy.max},
                   {"std", p.accuracy.std},
                   {"accuracies", p.accuracies},
                   {"overhead", p.overhead}});
  }
  return j;
}

SweepResult SweepResult::from_json(const nlohmann::json& j) {
  SweepResult r;
  r.parameter = j.at("parameter").get<std::string>();
  r.attack = j.at("attack").get<std::string>();
  r.config_digest = j.at("config_digest").get<std::string>();
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  const auto& t = j.at("tree");
  r.tree.max_depth = t.at("max_depth").get<int>();
  r.tree.min_samples_split = t.at("min_samples_split").get<int>();
  r.tree.min_impurity_decrease = t.at("min_impurity_decrease").get<double>();
  r.tree.seed = t.at("seed").get<std::uint64_t>();
  r.window = j.at("window").get<std::size_t>();
  r.num_devices = j.at("num_devices").get<std::size_t>();
  r.random_guess_floor = j.at("random_guess_floor").get<double>();
  for (const auto& p : j.at("points")) {
    SweepPoint point;
    point.value = p.at("value").get<double>();
    point.accuracy.mean = p.at("mean").get<double>();
    point.accuracy.min = p.at("min").get<double>();
    point.accuracy.max = p.at("max").get<double>();
    point.accuracy.std = p.at("std").get<double>();
    point.accuracies = p.at("accuracies").get<std::vector<double>>();
    point.overhead = p.at("overhead").get<double>();
    r.points.push_back(std::move(point));
  }
  return r;
}

std::string SweepResult::to_csv() const {
  std::string out = "parameter,mean,min,max,std\n";
  for (const auto& p : points) {
    out += shortest(p.value) + "," + shortest(p.accuracy.mean) + "," +
           shortest(p.accuracy.min) + "," + shortest(p.accuracy.max) + "," +
           shortest(p.accuracy.std) + "\n";
  }
  return out;
}

std::optional<SweepSpec> sweep_spec_from_json(const nlohmann::json& doc) {
  if (!doc.contains("sweep")) return std::nullopt;
  const auto& s = doc.at("sweep");
  SweepSpec spec;
  spec.axis = axis_from_name(s.at("axis").get<std::string>());
  spec.values = s.contains("values") ? s.at("values").get<std::vector<double>>()
                                     : default_grid(spec.axis);
  spec.combined.packets_per_tx =
      s.value("packets_per_tx", spec.combined.packets_per_tx);
  spec.combined.devices_per_ledger =
      s.value("devices_per_ledger", spec.combined.devices_per_ledger);
  return spec;
}

void emit_report(const SweepResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  const auto write = [](const std::filesystem::path& path,
                        const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
  };
  write(dir / "report.json", result.to_json().dump(2) + "\n");
  write(dir / "sweep.csv", result.to_csv());
}

}  // namespace iotledger
