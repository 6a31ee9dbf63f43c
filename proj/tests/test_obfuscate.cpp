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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "iotledger/error.hpp"
#include "iotledger/obfuscate.hpp"

namespace iotledger {
namespace {

TraceSet trace_of(const std::map<std::string, std::vector<double>>& rows) {
  TraceSet t;
  for (const auto& [device, times] : rows) {
    for (double ts : times) t.records.push_back({device, ts, {}});
  }
  normalize(t);
  t.duration = t.records.back().timestamp;
  return t;
}

TraceSet day_slice(double duration = 600.0, std::uint64_t seed = 3) {
  return synth_trace(builtin_profiles(), duration, seed);
}

std::multiset<std::pair<double, std::string>> timeline(const LedgerSet& set) {
  std::multiset<std::pair<double, std::string>> out;
  for (std::size_t l = 0; l < set.ledgers.size(); ++l) {
    for (std::size_t i = 0; i < set.ledgers[l].transactions.size(); ++i) {
      out.emplace(set.ledgers[l].transactions[i].timestamp,
                  set.device_name(set.labels[l][i]));
    }
  }
  return out;
}

void expect_chains(const LedgerSet& set) {
  for (const auto& l : set.ledgers) EXPECT_TRUE(verify_chain(l)) << l.ledger_id;
}

bool timestamps_sorted(const Ledger& l) {
  return std::is_sorted(
      l.transactions.begin(), l.transactions.end(),
      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
}

TEST(Delay, ZeroIsIdentityOnTimestamps) {
  const LedgerSet base = build_baseline(day_slice());
  const LedgerSet out = delay_transactions(base, {0.0, 5});
  ASSERT_EQ(out.ledgers.size(), base.ledgers.size());
  for (std::size_t l = 0; l < base.ledgers.size(); ++l) {
    ASSERT_EQ(out.ledgers[l].transactions.size(),
              base.ledgers[l].transactions.size());
    for (std::size_t i = 0; i < base.ledgers[l].transactions.size(); ++i) {
      EXPECT_EQ(out.ledgers[l].transactions[i].timestamp,
                base.ledgers[l].transactions[i].timestamp);
      EXPECT_EQ(out.ledgers[l].transactions[i].pk,
                base.ledgers[l].transactions[i].pk);
    }
  }
  expect_chains(out);
}

TEST(Delay, DisplacementWithinBound) {
  const LedgerSet base = build_baseline(day_slice());
  const LedgerSet out = delay_transactions(base, {2.0, 9});
  // Keys survive re-chaining, so they link each output to its original.
  std::map<Digest, double> before;
  for (const auto& l : base.ledgers) {
    for (const auto& tx : l.transactions) before[tx.pk] = tx.timestamp;
  }
  std::size_t moved = 0;
  for (const auto& l : out.ledgers) {
    EXPECT_TRUE(timestamps_sorted(l));
    for (const auto& tx : l.transactions) {
      const double shift = tx.timestamp - before.at(tx.pk);
      EXPECT_GE(shift, 0.0);
      EXPECT_LE(shift, 2.0);
      moved += shift > 0.0;
    }
  }
  EXPECT_GT(moved, 0u);
  EXPECT_EQ(out.transaction_count(), base.transaction_count());
  expect_chains(out);
  EXPECT_EQ(out.provenance.back().transform, "delay");
}

TEST(Delay, CanInvertOrder) {
  const TraceSet t = trace_of({{"a", {10.0, 10.1}}});
  const LedgerSet base = build_baseline(t);
  bool inverted = false;
  for (std::uint64_t seed = 0; seed < 64 && !inverted; ++seed) {
    const LedgerSet out = delay_transactions(base, {30.0, seed});
    expect_chains(out);
    inverted = out.ledgers[0].transactions[0].pk ==
               base.ledgers[0].transactions[1].pk;
  }
  EXPECT_TRUE(inverted);
}

TEST(Delay, RejectsNegative) {
  const LedgerSet base = build_baseline(trace_of({{"a", {1.0}}}));
  EXPECT_THROW(delay_transactions(base, {-1.0, 0}), std::invalid_argument);
}

TEST(Merge, OneIsIdentityPartition) {
  const LedgerSet base = build_baseline(day_slice());
  const LedgerSet out = merge_ledgers(base, {1, 4});
  ASSERT_EQ(out.ledgers.size(), base.ledgers.size());
  std::set<std::vector<Digest>> a, b;
  for (const auto& l : base.ledgers) {
    std::vector<Digest> keys;
    for (const auto& tx : l.transactions) keys.push_back(tx.pk);
    a.insert(keys);
  }
  for (const auto& l : out.ledgers) {
    std::vector<Digest> keys;
    for (const auto& tx : l.transactions) keys.push_back(tx.pk);
    b.insert(keys);
  }
  EXPECT_EQ(a, b);
  EXPECT_TRUE(out.per_device());
  expect_chains(out);
}

TEST(Merge, EighteenDevicesGroupsOfSeventeen) {
  std::map<std::string, std::vector<double>> rows;
  for (int d = 0; d < 18; ++d) {
    rows["dev" + std::to_string(100 + d)] = {1.0 + d, 50.0 + d, 99.0 + d};
  }
  const LedgerSet out = merge_ledgers(build_baseline(trace_of(rows)), {17, 2});
  ASSERT_EQ(out.ledgers.size(), 2u);
  std::vector<std::size_t> sizes;
  for (std::size_t l = 0; l < 2; ++l) {
    std::set<std::uint32_t> devices;
    for (const auto& label : out.labels[l]) devices.insert(label.device);
    sizes.push_back(devices.size());
  }
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 17}));
  expect_chains(out);
}

TEST(Merge, HandMergedPairs) {
  const TraceSet t = trace_of({{"a", {0, 10, 20, 30, 40}},
                               {"b", {1, 11, 21, 31, 41}},
                               {"c", {2, 12, 22, 32, 42}},
                               {"d", {3, 13, 23, 33, 43}}});
  const LedgerSet base = build_baseline(t);
  const LedgerSet out = merge_ledgers(base, {2, 17});
  ASSERT_EQ(out.ledgers.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    ASSERT_EQ(out.ledgers[l].transactions.size(), 10u);
    std::set<std::uint32_t> devices;
    for (const auto& label : out.labels[l]) devices.insert(label.device);
    ASSERT_EQ(devices.size(), 2u);
    // Hand merge of the two sorted device lists.
    std::vector<double> expected;
    for (auto d : devices) {
      for (const auto& tx : base.ledgers[d].transactions) {
        expected.push_back(tx.timestamp);
      }
    }
    std::sort(expected.begin(), expected.end());
    std::vector<double> got;
    for (const auto& tx : out.ledgers[l].transactions) got.push_back(tx.timestamp);
    EXPECT_EQ(got, expected);
  }
  EXPECT_FALSE(out.per_device());
  expect_chains(out);
}

TEST(Merge, OversizedGroupTakesAll) {
  const LedgerSet out = merge_ledgers(build_baseline(day_slice()), {100, 1});
  EXPECT_EQ(out.ledgers.size(), 1u);
  expect_chains(out);
}

TEST(Merge, PreservesTimelineMultiset) {
  const LedgerSet base = build_baseline(day_slice());
  for (int k : {2, 3, 5, 17}) {
    const LedgerSet out = merge_ledgers(base, {k, static_cast<std::uint64_t>(k)});
    EXPECT_EQ(timeline(out), timeline(base)) << k;
    for (const auto& l : out.ledgers) EXPECT_TRUE(timestamps_sorted(l));
  }
}

TEST(Merge, RejectsMixedInputAndBadSize) {
  const LedgerSet base = build_baseline(day_slice());
  const LedgerSet merged = merge_ledgers(base, {2, 1});
  EXPECT_THROW(merge_ledgers(merged, {3, 1}), StageError);
  EXPECT_THROW(merge_ledgers(base, {0, 1}), std::invalid_argument);
}

TEST(Aggregate, OneEqualsBaseline) {
  const TraceSet t = day_slice();
  LedgerSet agg = aggregate_packets(t, {1, 0.0});
  LedgerSet base = build_baseline(t);
  EXPECT_EQ(agg.ledgers, base.ledgers);
  EXPECT_EQ(agg.labels, base.labels);
  EXPECT_EQ(agg.reserved_keys, base.reserved_keys);
  EXPECT_EQ(agg.provenance.back().transform, "aggregate");
}

TEST(Aggregate, HandCollapse) {
  const LedgerSet out = aggregate_packets(trace_of({{"a", {0, 1, 2, 3}}}), {2, 0.0});
  ASSERT_EQ(out.ledgers[0].transactions.size(), 2u);
  EXPECT_EQ(out.ledgers[0].transactions[0].timestamp, 1.0);
  EXPECT_EQ(out.ledgers[0].transactions[1].timestamp, 3.0);
}

TEST(Aggregate, CeilCount) {
  const TraceSet t = day_slice();
  for (int k : {2, 3, 5, 7}) {
    const LedgerSet out = aggregate_packets(t, {k, 0.0});
    for (std::size_t d = 0; d < out.devices.size(); ++d) {
      const std::size_t n = t.records_of(out.devices[d]).size();
      const std::size_t expected = (n + k - 1) / static_cast<std::size_t>(k);
      EXPECT_EQ(out.ledgers[d].transactions.size(), expected);
    }
    expect_chains(out);
  }
}

TEST(Aggregate, MaxSpanOpensNewRun) {
  const TraceSet t = trace_of({{"a", {0, 1, 10, 11, 12}}});
  const LedgerSet out = aggregate_packets(t, {3, 5.0});
  std::vector<double> got;
  for (const auto& tx : out.ledgers[0].transactions) got.push_back(tx.timestamp);
  EXPECT_EQ(got, (std::vector<double>{1, 12}));
}

TEST(Aggregate, SmartThingsHidesShortGap) {
  const std::vector<DeviceProfile> one = {{"Smart_Things", {0.207, 58.0}, 0.0, {}}};
  const LedgerSet out = aggregate_packets(synth_trace(one, 3600.0, 1), {2, 0.0});
  const auto& txs = out.ledgers[0].transactions;
  ASSERT_GT(txs.size(), 10u);
  for (std::size_t i = 1; i + 1 < txs.size(); ++i) {
    EXPECT_NEAR(txs[i].timestamp - txs[i - 1].timestamp, 58.207, 1e-6);
  }
}

TEST(Aggregate, RejectsBadParams) {
  const TraceSet t = trace_of({{"a", {0, 1}}});
  EXPECT_THROW(aggregate_packets(t, {0, 0.0}), std::invalid_argument);
  EXPECT_THROW(aggregate_packets(t, {1, -1.0}), std::invalid_argument);
  EXPECT_THROW(aggregate_packets(TraceSet{}, {1, 0.0}), std::invalid_argument);
}

TEST(Spoof, ZeroRatioKeepsLedgers) {
  const LedgerSet base = build_baseline(day_slice());
  SpoofParams p;
  p.ratio = 0.0;
  const LedgerSet out = spoof_transactions(base, p);
  EXPECT_EQ(out.ledgers, base.ledgers);
}

TEST(Spoof, RatioThreeQuadruples) {
  std::vector<double> times;
  for (int i = 0; i < 100; ++i) times.push_back(i * 1.5);
  const LedgerSet base = build_baseline(trace_of({{"a", times}}));
  SpoofParams p;
  p.ratio = 3.0;
  p.seed = 7;
  const LedgerSet out = spoof_transactions(base, p);
  ASSERT_EQ(out.ledgers[0].transactions.size(), 400u);
  std::size_t spoofed = 0;
  for (const auto& label : out.labels[0]) spoofed += label.spoofed;
  EXPECT_EQ(spoofed, 300u);
  EXPECT_EQ(out.genuine_count(), 100u);
  const auto sidecar = out.sidecar();
  std::size_t flagged = 0;
  for (const auto& tx : out.ledgers[0].transactions) {
    flagged += sidecar.find(tx.t_id)->spoofed;
    EXPECT_GE(tx.timestamp, 0.0);
    EXPECT_LE(tx.timestamp, 99 * 1.5);
  }
  EXPECT_EQ(flagged, 300u);
  expect_chains(out);
}

TEST(Spoof, GenuineTimestampsAndRoundedCounts) {
  const LedgerSet base = build_baseline(day_slice(3600.0));
  SpoofParams p;
  p.ratio = 0.5;
  p.seed = 3;
  const LedgerSet out = spoof_transactions(base, p);
  for (std::size_t l = 0; l < base.ledgers.size(); ++l) {
    const std::size_t n = base.ledgers[l].transactions.size();
    std::vector<double> genuine;
    std::size_t fakes = 0;
    for (std::size_t i = 0; i < out.ledgers[l].transactions.size(); ++i) {
      if (out.labels[l][i].spoofed) {
        ++fakes;
      } else {
        genuine.push_back(out.ledgers[l].transactions[i].timestamp);
      }
      EXPECT_EQ(out.labels[l][i].device, base.labels[l][0].device);
    }
    std::vector<double> original;
    for (const auto& tx : base.ledgers[l].transactions) original.push_back(tx.timestamp);
    EXPECT_EQ(genuine, original);
    EXPECT_EQ(fakes, static_cast<std::size_t>(std::llround(0.5 * n)));
  }
  expect_chains(out);
}

TEST(Spoof, PublicViewHidesFakes) {
  SpoofParams p;
  p.ratio = 2.0;
  const LedgerSet out = spoof_transactions(build_baseline(day_slice(3600.0)), p);
  const std::string view = public_view(out);
  EXPECT_EQ(view.find("spoof"), std::string::npos);
  EXPECT_EQ(view.find("true"), std::string::npos);
}

TEST(Spoof, AfterGenuinePlacement) {
  const LedgerSet base = build_baseline(trace_of({{"a", {0, 10, 20, 30}}}));
  SpoofParams p;
  p.ratio = 2.0;
  p.placement = SpoofPlacement::kAfterGenuine;
  const LedgerSet out = spoof_transactions(base, p);
  EXPECT_EQ(out.ledgers[0].transactions.size(), 12u);
  EXPECT_EQ(out.provenance.back().params["placement"], "after_genuine");
  expect_chains(out);
}

TEST(Spoof, CustomSampler) {
  const LedgerSet base = build_baseline(trace_of({{"a", {0, 10, 20}}}));
  SpoofParams p;
  p.ratio = 1.0;
  p.sampler = [](std::span<const double> genuine, Rng&) { return genuine[1] + 1; };
  const LedgerSet out = spoof_transactions(base, p);
  std::size_t at_eleven = 0;
  for (const auto& tx : out.ledgers[0].transactions) at_eleven += tx.timestamp == 11.0;
  EXPECT_EQ(at_eleven, 3u);
}

TEST(Spoof, ShortLedgerIsAnError) {
  const LedgerSet base = build_baseline(trace_of({{"a", {0}}, {"b", {0, 1}}}));
  SpoofParams p;
  p.ratio = 1.0;
  EXPECT_THROW(spoof_transactions(base, p), StageError);
  p.ratio = -1.0;
  EXPECT_THROW(spoof_transactions(base, p), std::invalid_argument);
}

TEST(Compose, EmptyPipelineIsBaseline) {
  const TraceSet t = day_slice();
  EXPECT_EQ(compose(t, {}), build_baseline(t));
}

TEST(Compose, ThreeStageProvenance) {
  const std::vector<TransformSpec> pipeline = {
      AggregateParams{2, 0.0}, MergeParams{17, 1}, DelayParams{30.0, 2}};
  const LedgerSet out = compose(day_slice(), pipeline);
  ASSERT_EQ(out.provenance.size(), 3u);
  EXPECT_EQ(out.provenance[0].transform, "aggregate");
  EXPECT_EQ(out.provenance[1].transform, "merge");
  EXPECT_EQ(out.provenance[2].transform, "delay");
  EXPECT_EQ(out.provenance[2].params["d_max"], 30.0);
  expect_chains(out);
}

TEST(Compose, DoubleMergeNamesStage) {
  const std::vector<TransformSpec> pipeline = {MergeParams{2, 0}, MergeParams{3, 0}};
  try {
    compose(day_slice(), pipeline);
    FAIL() << "expected an error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "stage 1 (merge)");
  }
}

TEST(Compose, LateAggregationNamesStage) {
  const std::vector<TransformSpec> pipeline = {DelayParams{1.0, 0},
                                               AggregateParams{2, 0.0}};
  try {
    compose(day_slice(), pipeline);
    FAIL() << "expected an error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "stage 1 (aggregate)");
  }
}

TEST(Compose, EmptyTraceNamesBaseline) {
  try {
    compose(TraceSet{}, {});
    FAIL() << "expected an error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "baseline");
  }
}

TEST(Pipeline, JsonRoundTrip) {
  SpoofParams spoof;
  spoof.ratio = 1.5;
  spoof.seed = 4;
  spoof.placement = SpoofPlacement::kAfterGenuine;
  const std::vector<TransformSpec> pipeline = {
      AggregateParams{3, 2.5}, MergeParams{5, 1}, DelayParams{0.5, 2}, spoof};
  const auto text = pipeline_to_json(pipeline).dump();
  EXPECT_EQ(parse_pipeline(text), pipeline);
}

TEST(Pipeline, RejectsUnknownTransform) {
  EXPECT_THROW(parse_pipeline(R"([{"transform":"shuffle","params":{}}])"), Error);
  EXPECT_THROW(parse_pipeline(R"({"transform":"delay"})"), Error);
  EXPECT_THROW(
      parse_pipeline(R"([{"transform":"spoof","params":{"ratio":1,"placement":"x"}}])"),
      Error);
}

TEST(Transforms, DeterministicPerSeed) {
  const TraceSet t = day_slice();
  SpoofParams spoof;
  spoof.ratio = 1.0;
  spoof.seed = 11;
  const std::vector<TransformSpec> pipeline = {
      AggregateParams{2, 0.0}, DelayParams{2.0, 5}, MergeParams{3, 6}, spoof};
  EXPECT_EQ(public_view(compose(t, pipeline)), public_view(compose(t, pipeline)));
  auto other = pipeline;
  other[1] = DelayParams{2.0, 6};
  EXPECT_NE(public_view(compose(t, pipeline)), public_view(compose(t, other)));
}

TEST(Transforms, KeysStayUnique) {
  SpoofParams spoof;
  spoof.ratio = 2.0;
  const std::vector<TransformSpec> pipeline = {MergeParams{4, 1}, spoof,
                                               DelayParams{3.0, 2}};
  const LedgerSet out = compose(day_slice(3600.0), pipeline);
  std::set<Digest> keys(out.reserved_keys.begin(), out.reserved_keys.end());
  std::size_t n = out.reserved_keys.size();
  for (const auto& l : out.ledgers) {
    for (const auto& tx : l.transactions) {
      keys.insert(tx.pk);
      ++n;
    }
  }
  EXPECT_EQ(keys.size(), n);
}

}  // namespace
}  // namespace iotledger
