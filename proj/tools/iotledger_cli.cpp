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

// Command-line front end: trace generation, ledger building, obfuscation,
// attacks and sweeps. Every randomized subcommand needs an explicit --seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iotledger/attacker.hpp"
#include "iotledger/error.hpp"
#include "iotledger/experiment.hpp"
#include "iotledger/ledger.hpp"
#include "iotledger/obfuscate.hpp"
#include "iotledger/trace.hpp"

namespace fs = std::filesystem;
using namespace iotledger;

namespace {

constexpr const char* kLedgerFile = "ledgers.jsonl";
constexpr const char* kSidecarFile = "labels.json";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

// A ledger directory holds the public view and the label sidecar.
void write_ledger_dir(const LedgerSet& set, const fs::path& dir) {
  fs::create_directories(dir);
  write_public_view(set, dir / kLedgerFile);
  write_sidecar(set, dir / kSidecarFile);
}

fs::path ledger_file(const fs::path& path) {
  return fs::is_directory(path) ? path / kLedgerFile : path;
}

struct LedgerDir {
  std::vector<Ledger> ledgers;
  LabelSidecar sidecar;
};

LedgerDir read_ledger_dir(const fs::path& dir) {
  LedgerDir d;
  d.ledgers = read_public_view(dir / kLedgerFile);
  d.sidecar = read_sidecar(dir / kSidecarFile);
  return d;
}

// Per-transform flags, appended in pipeline order: aggregate, merge, delay,
// spoof.
struct TransformFlags {
  std::optional<int> aggregate;
  std::optional<double> max_span;
  std::optional<int> merge;
  std::optional<double> delay;
  std::optional<double> spoof;
  std::string placement = "uniform";

  void attach(CLI::App* app) {
    app->add_option("--aggregate", aggregate, "packets per transaction")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-span", max_span, "aggregation span limit, seconds");
    app->add_option("--merge", merge, "devices per ledger")
        ->check(CLI::PositiveNumber);
    app->add_option("--delay", delay, "maximum added delay d_max, seconds")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--spoof", spoof, "fake transactions per genuine one")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--spoof-placement", placement, "uniform or after_genuine")
        ->check(CLI::IsMember({"uniform", "after_genuine"}));
  }

  std::vector<TransformSpec> pipeline() const {
    std::vector<TransformSpec> out;
    if (aggregate) out.push_back(AggregateParams{*aggregate, max_span.value_or(0)});
    if (merge) out.push_back(MergeParams{*merge, 0});
    if (delay) out.push_back(DelayParams{*delay, 0});
    if (spoof) {
      SpoofParams p;
      p.ratio = *spoof;
      p.placement = placement == "after_genuine" ? SpoofPlacement::kAfterGenuine
                                                 : SpoofPlacement::kUniformInterval;
      out.push_back(p);
    }
    return out;
  }
};

std::vector<TransformSpec> resolve_pipeline(const std::string& pipeline_file,
                                            const TransformFlags& flags) {
  std::vector<TransformSpec> out;
  if (!pipeline_file.empty()) out = parse_pipeline(read_text(pipeline_file));
  const auto extra = flags.pipeline();
  for (const auto& spec : extra) {
    if (std::holds_alternative<AggregateParams>(spec)) {
      out.insert(out.begin(), spec);
    } else {
      out.push_back(spec);
    }
  }
  return out;
}

void print_report(const AttackReport& r) {
  std::printf("accuracy %.6f over %lld instances (%lld spoofed excluded)\n",
              r.accuracy, static_cast<long long>(r.n_instances),
              static_cast<long long>(r.n_excluded_spoofed));
  std::printf("device-level accuracy %.6f\n", r.device_level_accuracy);
  for (const auto& [device, acc] : r.per_device_accuracy) {
    std::printf("  %-24s %.6f\n", device.c_str(), acc);
  }
}

void print_sweep(const SweepResult& r) {
  std::printf("%s sweep over %s (%zu devices, floor %.4f)\n", r.attack.c_str(),
              r.parameter.c_str(), r.num_devices, r.random_guess_floor);
  std::printf("%10s %9s %9s %9s %9s %9s\n", "value", "mean", "min", "max", "std",
              "overhead");
  for (const auto& p : r.points) {
    std::printf("%10g %9.4f %9.4f %9.4f %9.4f %9.3f\n", p.value,
                p.accuracy.mean, p.accuracy.min, p.accuracy.max,
                p.accuracy.std, p.overhead);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Device identification attacks on blockchain IoT ledgers"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // generate
  auto* generate = app.add_subcommand("generate", "synthesize a trace CSV");
  bool builtin = false;
  std::string profile_path;
  double duration = 86400.0;
  std::optional<double> jitter;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  auto* builtin_flag =
      generate->add_flag("--builtin", builtin, "use the builtin device table");
  generate->add_option("--profiles", profile_path, "profile JSON file")
      ->excludes(builtin_flag)
      ->check(CLI::ExistingFile);
  generate->add_option("--duration", duration, "seconds")
      ->check(CLI::PositiveNumber);
  generate->add_option("--jitter", jitter, "override every profile's jitter");
  generate->add_option("--seed", gen_seed, "RNG seed")->required();
  generate->add_option("--out", gen_out, "output CSV")->required();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and normalize a trace CSV");
  std::string ingest_in;
  std::vector<std::string> blocklist;
  std::string ingest_out;
  ingest->add_option("input", ingest_in, "trace CSV")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--blocklist", blocklist, "devices to drop")->delimiter(',');
  ingest->add_option("--out", ingest_out, "write the normalized CSV here");

  // build
  auto* build = app.add_subcommand("build", "one ledger per device");
  std::string build_trace;
  std::string build_out;
  build->add_option("--trace", build_trace, "trace CSV")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", build_out, "output ledger directory")->required();

  // obfuscate
  auto* obfuscate =
      app.add_subcommand("obfuscate", "build ledgers through a transform pipeline");
  std::string obf_trace;
  std::string obf_pipeline;
  std::optional<std::uint64_t> obf_seed;
  std::string obf_out;
  TransformFlags obf_flags;
  obfuscate->add_option("--trace", obf_trace, "trace CSV")
      ->required()
      ->check(CLI::ExistingFile);
  obfuscate->add_option("--pipeline", obf_pipeline, "pipeline JSON file")
      ->check(CLI::ExistingFile);
  obfuscate->add_option("--seed", obf_seed, "RNG seed")->required();
  obfuscate->add_option("--out", obf_out, "output ledger directory")->required();
  obf_flags.attach(obfuscate);

  // attack
  auto* attack = app.add_subcommand("attack", "classify transactions of a ledger directory");
  std::string atk_ledgers;
  std::string atk_train;
  std::string atk_mode = "informed";
  std::size_t atk_window = kDefaultWindow;
  int atk_folds = kDefaultFolds;
  TreeParams atk_tree;
  std::optional<std::uint64_t> atk_seed;
  std::string atk_out;
  attack->add_option("--ledgers", atk_ledgers, "ledger directory to classify")
      ->required()
      ->check(CLI::ExistingDirectory);
  attack->add_option("--mode", atk_mode, "informed or blind")
      ->check(CLI::IsMember({"informed", "blind"}));
  attack->add_option("--train", atk_train, "training ledger directory (blind)")
      ->check(CLI::ExistingDirectory);
  attack->add_option("--window", atk_window, "gaps per instance")
      ->check(CLI::PositiveNumber);
  attack->add_option("--folds", atk_folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000));
  attack->add_option("--max-depth", atk_tree.max_depth);
  attack->add_option("--min-samples-split", atk_tree.min_samples_split);
  attack->add_option("--min-impurity-decrease", atk_tree.min_impurity_decrease);
  attack->add_option("--seed", atk_seed, "RNG seed")->required();
  attack->add_option("--out", atk_out, "report JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sw_config;
  std::string sw_axis;
  std::vector<double> sw_values;
  std::optional<std::uint64_t> sw_seed;
  std::optional<int> sw_trials;
  std::optional<std::size_t> sw_window;
  std::string sw_pipeline;
  std::string sw_mode;
  std::string sw_out;
  sweep_cmd->add_option("--config", sw_config, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--axis", sw_axis, "delay, merge, aggregate, spoof, combined");
  sweep_cmd->add_option("--values", sw_values, "grid")->delimiter(',');
  sweep_cmd->add_option("--seed", sw_seed, "base seed (else the config's base_seed)");
  sweep_cmd->add_option("--trials", sw_trials)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--window", sw_window)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--pipeline", sw_pipeline, "fixed pipeline JSON file")
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--mode", sw_mode)->check(CLI::IsMember({"informed", "blind"}));
  sweep_cmd->add_option("--out", sw_out, "output directory")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "check every hash chain of a ledger file");
  std::string verify_in;
  verify->add_option("input", verify_in, "ledger JSONL file or ledger directory")
      ->required()
      ->check(CLI::ExistingPath);

  // report
  auto* report = app.add_subcommand("report", "summarize or re-emit a sweep report");
  std::string rep_in;
  std::string rep_out;
  report->add_option("input", rep_in, "report.json or its directory")
      ->required()
      ->check(CLI::ExistingPath);
  report->add_option("--out", rep_out, "re-emit report.json and sweep.csv here");

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (generate->parsed()) {
      stage = "generate";
      auto profiles = profile_path.empty() ? builtin_profiles()
                                           : load_profiles(profile_path);
      if (jitter) {
        for (auto& p : profiles) p.jitter_frac = *jitter;
      }
      const TraceSet trace = synth_trace(profiles, duration, *gen_seed);
      write_csv(trace, gen_out);
      std::printf("%zu records from %zu devices\n", trace.records.size(),
                  trace.devices.size());
    } else if (ingest->parsed()) {
      stage = "ingest";
      IngestOptions options;
      options.blocklist.insert(blocklist.begin(), blocklist.end());
      const TraceSet trace = ingest_csv(ingest_in, options);
      if (!ingest_out.empty()) write_csv(trace, ingest_out);
      std::printf("%zu records from %zu devices, duration %s\n",
                  trace.records.size(), trace.devices.size(),
                  format_seconds(trace.duration).c_str());
    } else if (build->parsed()) {
      stage = "ingest";
      const TraceSet trace = ingest_csv(build_trace);
      stage = "build";
      const LedgerSet set = build_baseline(trace);
      write_ledger_dir(set, build_out);
      std::printf("%zu ledgers, %zu transactions\n", set.ledgers.size(),
                  set.transaction_count());
    } else if (obfuscate->parsed()) {
      stage = "ingest";
      const TraceSet trace = ingest_csv(obf_trace);
      stage = "pipeline";
      const auto pipeline =
          trial_pipeline(resolve_pipeline(obf_pipeline, obf_flags), *obf_seed);
      stage = "obfuscate";
      const LedgerSet set = compose(trace, pipeline);
      write_ledger_dir(set, obf_out);
      std::printf("%zu ledgers, %zu transactions (%zu genuine)\n",
                  set.ledgers.size(), set.transaction_count(),
                  set.genuine_count());
    } else if (attack->parsed()) {
      stage = "load";
      const LedgerDir test = read_ledger_dir(atk_ledgers);
      atk_tree.seed = *atk_seed;
      atk_tree.validate();
      stage = "features";
      const auto test_features =
          extract_features(test.ledgers, atk_window, &test.sidecar);
      AttackReport r;
      if (atk_mode == "informed") {
        stage = "informed attack";
        r = informed_attack(test_features, atk_tree, atk_folds);
      } else {
        if (atk_train.empty()) throw Error("blind mode needs --train");
        stage = "load";
        const LedgerDir train = read_ledger_dir(atk_train);
        stage = "features";
        const auto train_features =
            extract_features(train.ledgers, atk_window, &train.sidecar);
        stage = "blind attack";
        r = blind_attack(train_features, test_features, atk_tree);
      }
      print_report(r);
      if (!atk_out.empty()) {
        stage = "write";
        write_text(atk_out, r.to_json().dump(2) + "\n");
      }
    } else if (sweep_cmd->parsed()) {
      stage = "config";
      const auto doc = nlohmann::json::parse(read_text(sw_config));
      if (!sw_seed && !doc.contains("base_seed")) {
        std::fprintf(stderr,
                     "sweep: --seed is required when the config has no "
                     "base_seed\n%s",
                     sweep_cmd->help().c_str());
        return 2;
      }
      ExperimentConfig config = ExperimentConfig::from_json(doc);
      if (sw_seed) config.base_seed = *sw_seed;
      if (sw_trials) config.trials = *sw_trials;
      if (sw_window) config.window = *sw_window;
      if (!sw_pipeline.empty()) config.pipeline = parse_pipeline(read_text(sw_pipeline));
      if (sw_mode == "informed") config.attack.mode = AttackSpec::Mode::kInformed;
      if (sw_mode == "blind") config.attack.mode = AttackSpec::Mode::kBlind;
      config.validate();
      auto spec = sweep_spec_from_json(doc).value_or(SweepSpec{});
      if (!sw_axis.empty()) {
        spec.axis = axis_from_name(sw_axis);
        if (sw_values.empty()) spec.values.clear();
      }
      if (!sw_values.empty()) spec.values = sw_values;
      if (spec.values.empty()) spec.values = default_grid(spec.axis);
      stage = "sweep";
      const SweepResult result = sweep(config, spec.axis, spec.values, spec.combined);
      stage = "report";
      emit_report(result, sw_out);
      print_sweep(result);
    } else if (verify->parsed()) {
      stage = "verify";
      const auto ledgers = read_public_view(ledger_file(verify_in));
      std::size_t failed = 0;
      for (std::size_t i = 0; i < ledgers.size(); ++i) {
        const auto diag = check_chain(ledgers[i]);
        failed += diag.ok ? 0 : 1;
        if (diag.ok) {
          std::printf("PASS %s\n", ledgers[i].ledger_id.c_str());
        } else {
          std::printf("FAIL %s: transaction %zu: %s\n",
                      ledgers[i].ledger_id.c_str(), diag.first_bad,
                      diag.reason.c_str());
        }
      }
      std::printf("%zu/%zu ledgers intact\n", ledgers.size() - failed,
                  ledgers.size());
      return failed == 0 ? 0 : 1;
    } else if (report->parsed()) {
      stage = "report";
      const fs::path in = fs::is_directory(rep_in) ? fs::path(rep_in) / "report.json"
                                                   : fs::path(rep_in);
      const SweepResult result =
          SweepResult::from_json(nlohmann::json::parse(read_text(in)));
      print_sweep(result);
      if (!rep_out.empty()) emit_report(result, rep_out);
    }
  } catch (const StageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error in %s: %s\n", stage.c_str(), e.what());
    return 1;
  }
  return 0;
}
