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

#include <filesystem>
#include <set>
#include <sstream>

#include "iotledger/error.hpp"
#include "iotledger/ledger.hpp"
#include "json.hpp"

namespace iotledger {
namespace {

TraceSet make_trace(std::initializer_list<std::pair<const char*, double>> rows) {
  TraceSet t;
  for (const auto& [device, ts] : rows) t.records.push_back({device, ts, {}});
  normalize(t);
  t.duration = t.records.back().timestamp;
  return t;
}

// Hash of the empty-prev / prev field, timestamp bits, output and pk, spelled
// out byte by byte.
Digest hand_t_id(const std::optional<Digest>& prev, double ts,
                 const Digest& output, const Digest& pk) {
  std::vector<std::uint8_t> bytes;
  const auto put_len = [&](std::uint32_t n) {
    for (int i = 0; i < 4; ++i) bytes.push_back((n >> (8 * i)) & 0xff);
  };
  if (prev) {
    put_len(32);
    bytes.insert(bytes.end(), prev->begin(), prev->end());
  } else {
    put_len(0);
  }
  std::uint64_t bits;
  std::memcpy(&bits, &ts, sizeof(bits));
  put_len(8);
  for (int i = 0; i < 8; ++i) bytes.push_back((bits >> (8 * i)) & 0xff);
  put_len(32);
  bytes.insert(bytes.end(), output.begin(), output.end());
  put_len(32);
  bytes.insert(bytes.end(), pk.begin(), pk.end());
  return sha256(bytes);
}

TEST(BuildBaseline, OneDeviceThreeRecords) {
  const LedgerSet set = build_baseline(make_trace({{"a", 1}, {"a", 2}, {"a", 3}}));
  ASSERT_EQ(set.ledgers.size(), 1u);
  const auto& txs = set.ledgers[0].transactions;
  ASSERT_EQ(txs.size(), 3u);
  EXPECT_FALSE(txs[0].prev_t_id);
  EXPECT_EQ(*txs[1].prev_t_id, txs[0].t_id);
  EXPECT_EQ(*txs[2].prev_t_id, txs[1].t_id);
  EXPECT_TRUE(verify_chain(set.ledgers[0]));
}

TEST(BuildBaseline, PartitionsByDevice) {
  const LedgerSet set =
      build_baseline(make_trace({{"a", 1}, {"b", 2}, {"a", 3}, {"b", 4}}));
  ASSERT_EQ(set.ledgers.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(set.ledgers[i].transactions.size(), 2u);
    for (const auto& label : set.labels[i]) {
      EXPECT_EQ(set.device_name(label), i == 0 ? "a" : "b");
      EXPECT_FALSE(label.spoofed);
    }
  }
  EXPECT_TRUE(set.per_device());
  EXPECT_EQ(set.provenance.size(), 1u);
  EXPECT_EQ(set.provenance[0].transform, "baseline");
}

TEST(BuildBaseline, SmartThingsDeltasAlternate) {
  std::vector<DeviceProfile> one = {{"Smart_Things", {0.207, 58.0}, 0.02, {}}};
  const LedgerSet set = build_baseline(synth_trace(one, 600.0, 3));
  const auto& txs = set.ledgers[0].transactions;
  for (std::size_t i = 1; i < txs.size(); ++i) {
    const double d = txs[i].timestamp - txs[i - 1].timestamp;
    if (d < 1.0) {
      EXPECT_NEAR(d, 0.207, 0.207 * 0.021);
    } else {
      EXPECT_NEAR(d, 58.0, 58.0 * 0.021);
    }
    if (i >= 2) {
      const double prev = txs[i - 1].timestamp - txs[i - 2].timestamp;
      EXPECT_NE(d < 1.0, prev < 1.0);
    }
  }
}

TEST(BuildBaseline, KeysOutputsAndCounts) {
  const TraceSet trace = synth_trace(builtin_profiles(), 900.0, 2);
  const LedgerSet set = build_baseline(trace);
  EXPECT_EQ(set.transaction_count(), trace.records.size());
  std::set<Digest> keys;
  for (std::size_t l = 0; l < set.ledgers.size(); ++l) {
    const auto& txs = set.ledgers[l].transactions;
    for (std::size_t i = 0; i < txs.size(); ++i) {
      EXPECT_TRUE(keys.insert(txs[i].pk).second);
      const Digest& next =
          i + 1 < txs.size() ? txs[i + 1].pk : set.reserved_keys[l];
      EXPECT_EQ(txs[i].output, sha256(std::span<const std::uint8_t>(next)));
      EXPECT_EQ(txs[i].sign, placeholder_signature(txs[i].pk, txs[i].t_id));
    }
    EXPECT_TRUE(keys.insert(set.reserved_keys[l]).second);
  }
}

TEST(BuildBaseline, PayloadSignsDigest) {
  TraceSet t = make_trace({{"a", 1}, {"a", 2}});
  t.records[0].payload_digest = std::vector<std::uint8_t>{7, 7};
  const LedgerSet set = build_baseline(t);
  const auto& tx = set.ledgers[0].transactions[0];
  const std::vector<std::uint8_t> payload = {7, 7};
  EXPECT_EQ(tx.sign, placeholder_signature(tx.pk, sha256(payload)));
  EXPECT_EQ(set.labels[0][0].payload, 0);
  EXPECT_EQ(set.labels[0][1].payload, -1);
}

TEST(BuildBaseline, RejectsEmptyTrace) {
  EXPECT_THROW(build_baseline(TraceSet{}), std::invalid_argument);
}

TEST(TransactionId, MatchesHandEncoding) {
  const Digest out = sha256("out");
  const Digest pk = sha256("pk");
  const Digest prev = sha256("prev");
  EXPECT_EQ(transaction_id(std::nullopt, 12.5, out, pk),
            hand_t_id(std::nullopt, 12.5, out, pk));
  EXPECT_EQ(transaction_id(prev, 12.5, out, pk), hand_t_id(prev, 12.5, out, pk));
  EXPECT_NE(transaction_id(prev, 12.5, out, pk),
            transaction_id(std::nullopt, 12.5, out, pk));
}

TEST(VerifyChain, BaselineOutputVerifies) {
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 300.0, 8));
  for (const auto& l : set.ledgers) EXPECT_TRUE(verify_chain(l));
}

TEST(VerifyChain, MutatedTimestampFails) {
  LedgerSet set = build_baseline(make_trace({{"a", 1}, {"a", 2}, {"a", 3}}));
  set.ledgers[0].transactions[1].timestamp += 0.001;
  const auto diag = check_chain(set.ledgers[0]);
  EXPECT_FALSE(diag.ok);
  EXPECT_EQ(diag.first_bad, 1u);
}

TEST(VerifyChain, SwappedPairFails) {
  // Two-transaction chain assembled by hand.
  const Digest pk0 = sha256("k0"), pk1 = sha256("k1"), reserved = sha256("k2");
  Ledger ledger;
  Transaction t0, t1;
  t0.timestamp = 1.0;
  t0.pk = pk0;
  t0.output = sha256(std::span<const std::uint8_t>(pk1));
  t0.t_id = hand_t_id(std::nullopt, 1.0, t0.output, pk0);
  t1.timestamp = 2.0;
  t1.pk = pk1;
  t1.output = sha256(std::span<const std::uint8_t>(reserved));
  t1.prev_t_id = t0.t_id;
  t1.t_id = hand_t_id(t0.t_id, 2.0, t1.output, pk1);
  ledger.transactions = {t0, t1};
  ASSERT_TRUE(verify_chain(ledger));

  std::swap(ledger.transactions[0], ledger.transactions[1]);
  const auto diag = check_chain(ledger);
  EXPECT_FALSE(diag.ok);
  EXPECT_EQ(diag.first_bad, 0u);  // the new head still names a predecessor

  // Relinking without rehashing the content still fails.
  ledger.transactions[0].prev_t_id.reset();
  ledger.transactions[1].prev_t_id = ledger.transactions[0].t_id;
  EXPECT_FALSE(verify_chain(ledger));
}

TEST(VerifyChain, EmptyLedgerVerifies) {
  EXPECT_TRUE(verify_chain(Ledger{}));
}

TEST(PublicView, SixFieldsPerRecord) {
  const LedgerSet set = build_baseline(make_trace({{"dev", 1}}));
  const std::string view = public_view(set);
  std::istringstream in(view);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    const auto j = nlohmann::ordered_json::parse(line);
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"t_id", "prev_t_id", "timestamp",
                                             "output", "pk", "sign"}));
    EXPECT_TRUE(j["prev_t_id"].is_null());
  }
  EXPECT_EQ(lines, 1u);
}

TEST(PublicView, LeaksNoDeviceNames) {
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 600.0, 4));
  const std::string view = public_view(set);
  for (const auto& d : set.devices) {
    EXPECT_EQ(view.find(d), std::string::npos) << d;
  }
  EXPECT_EQ(view.find("spoof"), std::string::npos);
  EXPECT_EQ(view.find("device"), std::string::npos);
}

TEST(PublicView, RoundTrip) {
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 300.0, 6));
  const auto back = parse_public_view(public_view(set));
  ASSERT_EQ(back.size(), set.ledgers.size());
  for (std::size_t l = 0; l < back.size(); ++l) {
    EXPECT_EQ(back[l].transactions, set.ledgers[l].transactions);
    EXPECT_TRUE(verify_chain(back[l]));
  }
  EXPECT_EQ(public_view(back), public_view(set));
}

TEST(PublicView, MalformedInputNamesLine) {
  EXPECT_THROW(parse_public_view("{}\n"), ParseError);
  EXPECT_THROW(parse_public_view("not json\n"), ParseError);
}

TEST(Sidecar, CoversEveryTransactionOnce) {
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 300.0, 6));
  const LabelSidecar sidecar = set.sidecar();
  EXPECT_EQ(sidecar.size(), set.transaction_count());
  EXPECT_TRUE(sidecar.unique());
  for (std::size_t l = 0; l < set.ledgers.size(); ++l) {
    for (std::size_t i = 0; i < set.ledgers[l].transactions.size(); ++i) {
      const auto entry = sidecar.find(set.ledgers[l].transactions[i].t_id);
      ASSERT_TRUE(entry);
      EXPECT_EQ(entry->device, set.device_name(set.labels[l][i]));
    }
  }
  EXPECT_FALSE(sidecar.find(sha256("nope")));
}

TEST(Sidecar, JsonRoundTrip) {
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 300.0, 6));
  const LabelSidecar sidecar = set.sidecar();
  const LabelSidecar back = LabelSidecar::from_json(sidecar.to_json());
  EXPECT_EQ(back.to_json(), sidecar.to_json());
  EXPECT_EQ(back.size(), sidecar.size());
}

TEST(LedgerFiles, WriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "iotledger_ledger_test";
  std::filesystem::create_directories(dir);
  const LedgerSet set = build_baseline(synth_trace(builtin_profiles(), 120.0, 1));
  write_public_view(set, dir / "l.jsonl");
  write_sidecar(set, dir / "s.json");
  EXPECT_EQ(public_view(read_public_view(dir / "l.jsonl")), public_view(set));
  EXPECT_EQ(read_sidecar(dir / "s.json").to_json(), set.sidecar().to_json());
  std::filesystem::remove_all(dir);
}

TEST(KeyMint, DistinctAcrossDomains) {
  KeyMint a(1), b(2);
  EXPECT_NE(a.mint(), b.mint());
  EXPECT_NE(a.mint(), a.mint());
  EXPECT_EQ(a.issued(), 3u);
}

TEST(LedgerId, Format) {
  EXPECT_EQ(ledger_id_for(0), "ledger-0000");
  EXPECT_EQ(ledger_id_for(42), "ledger-0042");
}

}  // namespace
}  // namespace iotledger
