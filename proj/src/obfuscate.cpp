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

#include "iotledger/obfuscate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iotledger/error.hpp"

namespace iotledger {

namespace {

void sort_by_timestamp(std::vector<PendingTx>& txs) {
  std::stable_sort(txs.begin(), txs.end(),
                   [](const PendingTx& a, const PendingTx& b) {
                     return a.timestamp < b.timestamp;
                   });
}

LedgerSet with_stage(const LedgerSet& base, std::vector<PendingLedger> pending,
                     const TransformSpec& spec, const KeyMint& keys) {
  LedgerSet out;
  out.devices = base.devices;
  out.payloads = base.payloads;
  out.provenance = base.provenance;
  out.keys = keys;
  assemble(out, std::move(pending));
  out.provenance.push_back({transform_name(spec), transform_params(spec)});
  return out;
}

}  // namespace

LedgerSet delay_transactions(const LedgerSet& set, const DelayParams& params) {
  if (!(params.d_max >= 0.0)) {
    throw std::invalid_argument("delay: d_max must be >= 0");
  }
  auto pending = disassemble(set);
  Rng rng(derive_seed(params.seed, 0xde1a7));
  for (auto& ledger : pending) {
    for (auto& tx : ledger.txs) {
      tx.timestamp += params.d_max * uniform01(rng);
    }
    sort_by_timestamp(ledger.txs);
  }
  return with_stage(set, std::move(pending), params, set.keys);
}

LedgerSet merge_ledgers(const LedgerSet& set, const MergeParams& params) {
  if (params.devices_per_ledger < 1) {
    throw std::invalid_argument("merge: devices_per_ledger must be >= 1");
  }
  if (!set.per_device()) {
    throw StageError("merge", "input ledgers are not partitioned per device");
  }
  auto pending = disassemble(set);
  std::vector<std::size_t> order(pending.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(params.seed, 0x3e7e));
  shuffle(std::span<std::size_t>(order), rng);

  KeyMint keys = set.keys;
  const auto group = static_cast<std::size_t>(params.devices_per_ledger);
  std::vector<PendingLedger> merged;
  for (std::size_t start = 0; start < order.size(); start += group) {
    const std::size_t end = std::min(order.size(), start + group);
    PendingLedger out;
    if (end - start == 1) {
      out = std::move(pending[order[start]]);
    } else {
      for (std::size_t g = start; g < end; ++g) {
        auto& src = pending[order[g]].txs;
        out.txs.insert(out.txs.end(), src.begin(), src.end());
      }
      sort_by_timestamp(out.txs);
      out.reserved_pk = keys.mint();
    }
    merged.push_back(std::move(out));
  }
  return with_stage(set, std::move(merged), params, keys);
}

LedgerSet aggregate_packets(const TraceSet& trace,
                            const AggregateParams& params) {
  if (params.packets_per_tx < 1) {
    throw std::invalid_argument("aggregate: packets_per_tx must be >= 1");
  }
  if (!(params.max_span >= 0.0)) {
    throw std::invalid_argument("aggregate: max_span must be >= 0");
  }
  if (trace.empty()) {
    throw std::invalid_argument("aggregate: trace is empty");
  }
  LedgerSet set;
  set.devices.assign(trace.devices.begin(), trace.devices.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < set.devices.size(); ++i) {
    index.emplace(set.devices[i], i);
  }
  std::vector<std::vector<const CommRecord*>> per_device(set.devices.size());
  for (const auto& r : trace.records) {
    per_device[index.at(r.device)].push_back(&r);
  }

  const auto k = static_cast<std::size_t>(params.packets_per_tx);
  std::vector<PendingLedger> pending(set.devices.size());
  for (std::uint32_t d = 0; d < set.devices.size(); ++d) {
    const auto& records = per_device[d];
    auto& ledger = pending[d];
    std::size_t i = 0;
    while (i < records.size()) {
      const double run_start = records[i]->timestamp;
      std::size_t end = i + 1;
      while (end < records.size() && end - i < k &&
             (params.max_span == 0.0 ||
              records[end]->timestamp - run_start <= params.max_span)) {
        ++end;
      }
      TxLabel label{d, false, -1};
      std::vector<std::uint8_t> data;
      bool has_data = false;
      for (std::size_t r = i; r < end; ++r) {
        if (records[r]->payload_digest) {
          has_data = true;
          data.insert(data.end(), records[r]->payload_digest->begin(),
                      records[r]->payload_digest->end());
        }
      }
      if (has_data) {
        label.payload = static_cast<std::int32_t>(set.payloads.size());
        set.payloads.push_back(sha256(data));
      }
      ledger.txs.push_back({records[end - 1]->timestamp, set.keys.mint(), label});
      i = end;
    }
    ledger.reserved_pk = set.keys.mint();
  }
  assemble(set, std::move(pending));
  set.provenance.push_back({"aggregate", transform_params(params)});
  return set;
}

LedgerSet spoof_transactions(const LedgerSet& set, const SpoofParams& params) {
  if (!(params.ratio >= 0.0) || !std::isfinite(params.ratio)) {
    throw std::invalid_argument("spoof: ratio must be finite and >= 0");
  }
  auto pending = disassemble(set);
  KeyMint keys = set.keys;
  Rng rng(derive_seed(params.seed, 0x5900f));

  for (std::size_t li = 0; li < pending.size(); ++li) {
    auto& txs = pending[li].txs;
    std::vector<double> genuine_ts;
    std::vector<std::uint32_t> genuine_dev;
    for (const auto& tx : txs) {
      if (!tx.label.spoofed) {
        genuine_ts.push_back(tx.timestamp);
        genuine_dev.push_back(tx.label.device);
      }
    }
    const auto fakes = static_cast<std::size_t>(
        std::llround(params.ratio * static_cast<double>(genuine_ts.size())));
    if (fakes == 0) continue;
    if (txs.size() < 2 || genuine_ts.size() < 2) {
      throw StageError("spoof", set.ledgers[li].ledger_id +
                                    " has fewer than two transactions");
    }
    const double lo = txs.front().timestamp;
    const double hi = txs.back().timestamp;

    std::vector<PendingTx> added;
    added.reserve(fakes);
    for (std::size_t f = 0; f < fakes; ++f) {
      double ts;
      if (params.sampler) {
        ts = params.sampler(genuine_ts, rng);
      } else if (params.placement == SpoofPlacement::kAfterGenuine) {
        const auto g = uniform_index(rng, genuine_ts.size() - 1);
        ts = uniform_in(rng, genuine_ts[g], genuine_ts[g + 1]);
      } else {
        ts = uniform_in(rng, lo, hi);
      }
      // The fake belongs to whichever device most recently transacted here.
      auto it = std::upper_bound(genuine_ts.begin(), genuine_ts.end(), ts);
      const std::size_t owner =
          it == genuine_ts.begin() ? 0 : (it - genuine_ts.begin()) - 1;
      added.push_back({ts, keys.mint(), {genuine_dev[owner], true, -1}});
    }
    std::stable_sort(added.begin(), added.end(),
                     [](const PendingTx& a, const PendingTx& b) {
                       return a.timestamp < b.timestamp;
                     });
    std::vector<PendingTx> merged;
    merged.reserve(txs.size() + added.size());
    std::merge(txs.begin(), txs.end(), added.begin(), added.end(),
               std::back_inserter(merged),
               [](const PendingTx& a, const PendingTx& b) {
                 return a.timestamp < b.timestamp;
               });
    txs = std::move(merged);
  }
  return with_stage(set, std::move(pending), params, keys);
}

std::string transform_name(const TransformSpec& spec) {
  struct Visitor {
    std::string operator()(const DelayParams&) const { return "delay"; }
    std::string operator()(const MergeParams&) const { return "merge"; }
    std::string operator()(const AggregateParams&) const { return "aggregate"; }
    std::string operator()(const SpoofParams&) const { return "spoof"; }
  };
  return std::visit(Visitor{}, spec);
}

nlohmann::ordered_json transform_params(const TransformSpec& spec) {
  struct Visitor {
    nlohmann::ordered_json operator()(const DelayParams& p) const {
      return {{"d_max", p.d_max}, {"seed", p.seed}};
    }
    nlohmann::ordered_json operator()(const MergeParams& p) const {
      return {{"devices_per_ledger", p.devices_per_ledger}, {"seed", p.seed}};
    }
    nlohmann::ordered_json operator()(const AggregateParams& p) const {
      return {{"packets_per_tx", p.packets_per_tx}, {"max_span", p.max_span}};
    }
    nlohmann::ordered_json operator()(const SpoofParams& p) const {
      nlohmann::ordered_json j{{"ratio", p.ratio}, {"seed", p.seed}};
      j["placement"] = p.sampler ? "custom"
                       : p.placement == SpoofPlacement::kAfterGenuine
                           ? "after_genuine"
                           : "uniform";
      return j;
    }
  };
  return std::visit(Visitor{}, spec);
}

TransformSpec with_seed(const TransformSpec& spec, std::uint64_t seed) {
  TransformSpec out = spec;
  std::visit(
      [seed](auto& p) {
        if constexpr (requires { p.seed; }) p.seed = seed;
      },
      out);
  return out;
}

namespace {

std::string stage_label(std::size_t index, const TransformSpec& spec) {
  return "stage " + std::to_string(index) + " (" + transform_name(spec) + ")";
}

}  // namespace

LedgerSet apply_transforms(LedgerSet set,
                           std::span<const TransformSpec> pipeline,
                           std::size_t first_stage_index) {
  for (std::size_t i = 0; i < pipeline.size(); ++i) {
    const TransformSpec& spec = pipeline[i];
    const std::string label = stage_label(first_stage_index + i, spec);
    try {
      if (const auto* p = std::get_if<DelayParams>(&spec)) {
        set = delay_transactions(set, *p);
      } else if (const auto* p = std::get_if<MergeParams>(&spec)) {
        if (!set.per_device()) {
          throw StageError(label,
                           "merge applied to ledgers that are not partitioned "
                           "per device");
        }
        set = merge_ledgers(set, *p);
      } else if (const auto* p = std::get_if<SpoofParams>(&spec)) {
        set = spoof_transactions(set, *p);
      } else {
        throw StageError(label,
                         "aggregation operates on traces and must be the "
                         "first stage");
      }
    } catch (const StageError& e) {
      if (e.stage() == label) throw;
      throw StageError(label, e.what());
    } catch (const std::exception& e) {
      throw StageError(label, e.what());
    }
  }
  return set;
}

LedgerSet compose(const TraceSet& trace,
                  std::span<const TransformSpec> pipeline) {
  if (!pipeline.empty()) {
    if (const auto* agg = std::get_if<AggregateParams>(&pipeline.front())) {
      LedgerSet set;
      try {
        set = aggregate_packets(trace, *agg);
      } catch (const std::exception& e) {
        throw StageError(stage_label(0, pipeline.front()), e.what());
      }
      return apply_transforms(std::move(set), pipeline.subspan(1), 1);
    }
  }
  LedgerSet set;
  try {
    set = build_baseline(trace);
  } catch (const std::exception& e) {
    throw StageError("baseline", e.what());
  }
  return apply_transforms(std::move(set), pipeline, 0);
}

std::vector<TransformSpec> pipeline_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error("pipeline must be a JSON array");
  std::vector<TransformSpec> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const auto name = item.at("transform").get<std::string>();
    const auto params =
        item.contains("params") ? item.at("params") : nlohmann::json::object();
    const auto seed = params.value("seed", std::uint64_t{0});
    if (name == "delay") {
      out.push_back(DelayParams{params.at("d_max").get<double>(), seed});
    } else if (name == "merge") {
      out.push_back(
          MergeParams{params.at("devices_per_ledger").get<int>(), seed});
    } else if (name == "aggregate") {
      out.push_back(AggregateParams{params.at("packets_per_tx").get<int>(),
                                    params.value("max_span", 0.0)});
    } else if (name == "spoof") {
      SpoofParams p;
      p.ratio = params.at("ratio").get<double>();
      p.seed = seed;
      const auto placement = params.value("placement", std::string("uniform"));
      if (placement == "after_genuine") {
        p.placement = SpoofPlacement::kAfterGenuine;
      } else if (placement != "uniform") {
        throw Error("pipeline entry " + std::to_string(i) +
                    ": unknown spoof placement '" + placement + "'");
      }
      out.push_back(p);
    } else {
      throw Error("pipeline entry " + std::to_string(i) +
                  ": unknown transform '" + name + "'");
    }
  }
  return out;
}

std::vector<TransformSpec> parse_pipeline(const std::string& text) {
  return pipeline_from_json(nlohmann::json::parse(text));
}

nlohmann::ordered_json pipeline_to_json(
    std::span<const TransformSpec> pipeline) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& spec : pipeline) {
    doc.push_back(
        {{"transform", transform_name(spec)}, {"params", transform_params(spec)}});
  }
  return doc;
}

}  // namespace iotledger
