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

#ifndef IOTLEDGER_ATTACKER_HPP_
#define IOTLEDGER_ATTACKER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotledger/cart.hpp"
#include "iotledger/digest.hpp"
#include "iotledger/ledger.hpp"
#include "json.hpp"

namespace iotledger {

inline constexpr std::size_t kDefaultWindow = 3;
inline constexpr int kDefaultFolds = 10;

struct FeatureInstance {
  std::vector<double> gaps;
  std::optional<std::string> label;
  Digest anchor_t_id{};
  bool genuine = true;
};

// Windows of consecutive inter-transaction gaps, stored as a Dataset so they
// can be fed to the tree directly. When extracted without a sidecar,
// data.labels is empty and data.classes is empty.
struct FeatureSet {
  std::size_t window = kDefaultWindow;
  Dataset data;
  std::vector<Digest> anchors;
  std::vector<std::uint8_t> genuine;
  // Ledger index of each instance.
  std::vector<std::uint32_t> ledger;

  std::size_t size() const { return anchors.size(); }
  bool labeled() const { return !data.labels.empty() || size() == 0; }
  FeatureInstance instance(std::size_t i) const;
};

// Per ledger, sorts timestamps and slides a stride-1 window producing
// (length - window) instances of `window` gaps. The label of an instance is
// the sidecar device of its last transaction; for a fake transaction that is
// the device it was attributed to when spoofed. Throws std::invalid_argument
// for window == 0 and Error for a t_id missing from the sidecar.
FeatureSet extract_features(std::span<const Ledger> public_ledgers,
                            std::size_t window,
                            const LabelSidecar* sidecar = nullptr);

struct AttackReport {
  double accuracy = 0.0;
  std::vector<std::string> labels;  // axes of `confusion`
  std::vector<std::vector<std::int64_t>> confusion;  // [true][predicted]
  std::map<std::string, double> per_device_accuracy;
  double device_level_accuracy = 0.0;
  std::int64_t n_instances = 0;        // genuine instances evaluated
  std::int64_t n_excluded_spoofed = 0;  // spoof-anchored, not evaluated

  std::int64_t correct() const;
  std::int64_t total() const;
  nlohmann::ordered_json to_json() const;
  static AttackReport from_json(const nlohmann::json& j);
  bool operator==(const AttackReport&) const = default;
};

// Builds a report from parallel true/predicted label names.
AttackReport make_report(std::span<const std::string> truth,
                         std::span<const std::string> predicted,
                         std::int64_t excluded_spoofed = 0);

// Fold id in [0, folds) per instance: each label's instances are shuffled
// and dealt round-robin, continuing the deal across labels so overall fold
// sizes also differ by at most one.
std::vector<int> stratified_folds(std::span<const int> labels, int folds,
                                  std::uint64_t seed);

// Stratified k-fold cross-validation over every labeled instance of the set.
// Spoof-anchored instances are used for training but excluded from scoring.
// Throws Error when the set yields fewer instances than folds.
AttackReport informed_attack(const LedgerSet& set, std::size_t window,
                             const TreeParams& params,
                             int folds = kDefaultFolds);
AttackReport informed_attack(const FeatureSet& features,
                             const TreeParams& params,
                             int folds = kDefaultFolds);

// Trains on every instance of `train`, scores the genuine instances of
// `test`. Devices unseen in training can never be predicted.
AttackReport blind_attack(const LedgerSet& train, const LedgerSet& test,
                          std::size_t window, const TreeParams& params);
AttackReport blind_attack(const FeatureSet& train, const FeatureSet& test,
                          const TreeParams& params);

}  // namespace iotledger

#endif  // IOTLEDGER_ATTACKER_HPP_
