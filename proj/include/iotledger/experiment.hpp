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

#ifndef IOTLEDGER_EXPERIMENT_HPP_
#define IOTLEDGER_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "iotledger/attacker.hpp"
#include "iotledger/cart.hpp"
#include "iotledger/obfuscate.hpp"
#include "iotledger/trace.hpp"
#include "json.hpp"

namespace iotledger {

struct SyntheticSource {
  // Empty means the builtin device table.
  std::optional<std::filesystem::path> profile_file;
  double duration = 86400.0;
  // When set, replaces every profile's jitter.
  std::optional<double> jitter = kDefaultJitter;
};

struct CsvSource {
  std::filesystem::path path;
  std::set<std::string> blocklist;
};

struct AttackSpec {
  enum class Mode { kInformed, kBlind };
  Mode mode = Mode::kInformed;
  // Blind only: explicit training devices, or `train_count` drawn per trial.
  std::vector<std::string> train_devices;
  int train_count = 6;
};

struct ExperimentConfig {
  std::variant<SyntheticSource, CsvSource> trace_source = SyntheticSource{};
  std::vector<TransformSpec> pipeline;
  AttackSpec attack;
  std::size_t window = kDefaultWindow;
  TreeParams tree;
  int folds = kDefaultFolds;
  int trials = 1;
  std::uint64_t base_seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  // SHA-256 over the canonical JSON dump.
  std::string digest() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

// Per-trial derivations shared by run() and sweep(), exposed so callers can
// reproduce a single trial by hand.
std::uint64_t trial_seed(const ExperimentConfig& config, int trial);
std::vector<DeviceProfile> resolve_profiles(const SyntheticSource& source);
TraceSet trial_trace(const ExperimentConfig& config, std::uint64_t seed);
TreeParams trial_tree_params(const ExperimentConfig& config,
                             std::uint64_t seed);
// Seeds every randomized stage from (trial seed, stage index, role, the
// stage's own seed). `training` selects the blind attacker's stream.
std::vector<TransformSpec> trial_pipeline(
    std::span<const TransformSpec> pipeline, std::uint64_t seed,
    bool training = false);

struct Summary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single trial

  bool operator==(const Summary&) const = default;
};

Summary summarize(std::span<const double> values);

struct TrialResult {
  std::uint64_t seed = 0;
  AttackReport report;
  std::size_t transactions = 0;
  std::size_t genuine_transactions = 0;
  std::vector<std::string> train_devices;  // blind only

  double overhead() const {
    return genuine_transactions == 0
               ? 0.0
               : static_cast<double>(transactions) /
                     static_cast<double>(genuine_transactions);
  }
  bool operator==(const TrialResult&) const = default;
};

struct RunResult {
  std::vector<TrialResult> trials;
  Summary accuracy;
  std::string config_digest;

  nlohmann::ordered_json to_json() const;
};

// Runs config.trials repetitions with seeds base_seed + i. Stage failures are
// rethrown as StageError naming the trial and stage.
RunResult run(const ExperimentConfig& config);

enum class SweepAxis { kDelay, kMerge, kAggregate, kSpoof, kCombined };

std::string axis_name(SweepAxis axis);
SweepAxis axis_from_name(const std::string& name);
std::vector<double> default_grid(SweepAxis axis);

struct SweepPoint {
  double value = 0.0;
  Summary accuracy;
  std::vector<double> accuracies;  // per trial
  double overhead = 1.0;           // mean transactions / genuine transactions

  bool operator==(const SweepPoint&) const = default;
};

struct SweepResult {
  std::string parameter;
  std::string attack;  // "informed" or "blind"
  std::vector<SweepPoint> points;
  std::string config_digest;
  std::vector<std::uint64_t> seeds;
  TreeParams tree;
  std::size_t window = kDefaultWindow;
  std::size_t num_devices = 0;
  double random_guess_floor = 0.0;  // 1 / num_devices - 0.02

  const SweepPoint& at(double value) const;
  nlohmann::ordered_json to_json() const;
  static SweepResult from_json(const nlohmann::json& j);
  std::string to_csv() const;
  bool operator==(const SweepResult&) const = default;
};

// Fixed stages of the combined sweep; the swept value is the delay.
struct CombinedStages {
  int packets_per_tx = 2;
  int devices_per_ledger = 17;
};

// For each value, the varied stage is added to config.pipeline (aggregation
// first, the others appended) and `trials` repetitions are run. Traces and
// the baseline ledgers are shared by every point of a trial.
SweepResult sweep(const ExperimentConfig& config, SweepAxis axis,
                  std::span<const double> values,
                  const CombinedStages& combined = {});

inline SweepResult sweep_delay(const ExperimentConfig& config,
                               std::span<const double> d_max_values) {
  return sweep(config, SweepAxis::kDelay, d_max_values);
}
inline SweepResult sweep_merge(const ExperimentConfig& config,
                               std::span<const double> devices_per_ledger) {
  return sweep(config, SweepAxis::kMerge, devices_per_ledger);
}
inline SweepResult sweep_aggregate(const ExperimentConfig& config,
                                   std::span<const double> packets_per_tx) {
  return sweep(config, SweepAxis::kAggregate, packets_per_tx);
}
inline SweepResult sweep_spoof(const ExperimentConfig& config,
                               std::span<const double> ratios) {
  return sweep(config, SweepAxis::kSpoof, ratios);
}
inline SweepResult sweep_combined(const ExperimentConfig& config,
                                  std::span<const double> d_max_values,
                                  const CombinedStages& stages = {}) {
  return sweep(config, SweepAxis::kCombined, d_max_values, stages);
}

// Optional "sweep" block of a config file:
// {"axis": "delay", "values": [...], "packets_per_tx": 2,
//  "devices_per_ledger": 17}.
struct SweepSpec {
  SweepAxis axis = SweepAxis::kDelay;
  std::vector<double> values;
  CombinedStages combined;
};
std::optional<SweepSpec> sweep_spec_from_json(const nlohmann::json& doc);

// Writes <dir>/report.json and <dir>/sweep.csv, creating `dir` if needed.
void emit_report(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace iotledger

#endif  // IOTLEDGER_EXPERIMENT_HPP_
