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

#ifndef IOTLEDGER_OBFUSCATE_HPP_
#define IOTLEDGER_OBFUSCATE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iotledger/ledger.hpp"
#include "iotledger/random.hpp"
#include "iotledger/trace.hpp"

namespace iotledger {

struct DelayParams {
  double d_max = 0.0;
  std::uint64_t seed = 0;
  bool operator==(const DelayParams&) const = default;
};

struct MergeParams {
  int devices_per_ledger = 1;
  std::uint64_t seed = 0;
  bool operator==(const MergeParams&) const = default;
};

struct AggregateParams {
  int packets_per_tx = 1;
  double max_span = 0.0;  // 0 = unlimited
  bool operator==(const AggregateParams&) const = default;
};

enum class SpoofPlacement {
  // Uniform over [first, last] timestamp of the ledger.
  kUniformInterval,
  // Pick a genuine transaction uniformly (excluding the last) and place the
  // fake uniformly between it and its genuine successor.
  kAfterGenuine,
};

// Custom placement: receives the ledger's sorted genuine timestamps (at least
// two) and returns a timestamp for one fake transaction.
using SpoofSampler =
    std::function<double(std::span<const double> genuine, Rng& rng)>;

struct SpoofParams {
  double ratio = 0.0;
  std::uint64_t seed = 0;
  SpoofPlacement placement = SpoofPlacement::kUniformInterval;
  SpoofSampler sampler;  // overrides `placement` when set

  bool operator==(const SpoofParams& o) const {
    return ratio == o.ratio && seed == o.seed && placement == o.placement &&
           !sampler && !o.sampler;
  }
};

// Throws std::invalid_argument when d_max < 0.
LedgerSet delay_transactions(const LedgerSet& set, const DelayParams& params);

// Throws StageError if the input is not partitioned per device, and
// std::invalid_argument when devices_per_ledger < 1.
LedgerSet merge_ledgers(const LedgerSet& set, const MergeParams& params);

// Throws std::invalid_argument for an empty trace or invalid params.
LedgerSet aggregate_packets(const TraceSet& trace,
                            const AggregateParams& params);

// Throws std::invalid_argument when ratio < 0 and StageError when ratio > 0
// meets a ledger with fewer than two transactions.
LedgerSet spoof_transactions(const LedgerSet& set, const SpoofParams& params);

using TransformSpec =
    std::variant<DelayParams, MergeParams, AggregateParams, SpoofParams>;

std::string transform_name(const TransformSpec& spec);
nlohmann::ordered_json transform_params(const TransformSpec& spec);

// Replaces the seed of a randomized transform; aggregation is unchanged.
TransformSpec with_seed(const TransformSpec& spec, std::uint64_t seed);

// Aggregation may only appear first; a baseline build is implied otherwise.
// Failures are reported as StageError naming "stage <i> (<name>)".
LedgerSet compose(const TraceSet& trace, std::span<const TransformSpec> pipeline);

// Applies ledger-level transforms (delay, merge, spoof) to an existing set.
LedgerSet apply_transforms(LedgerSet set,
                           std::span<const TransformSpec> pipeline,
                           std::size_t first_stage_index = 0);

// JSON array of {"transform": name, "params": {...}}.
std::vector<TransformSpec> pipeline_from_json(const nlohmann::json& doc);
std::vector<TransformSpec> parse_pipeline(const std::string& text);
nlohmann::ordered_json pipeline_to_json(std::span<const TransformSpec> pipeline);

}  // namespace iotledger

#endif  // IOTLEDGER_OBFUSCATE_HPP_
