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

#ifndef IOTLEDGER_LEDGER_HPP_
#define IOTLEDGER_LEDGER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iotledger/digest.hpp"
#include "iotledger/trace.hpp"
#include "json.hpp"

namespace iotledger {

// The six public fields of a stored transaction. Nothing here identifies the
// generating device.
struct Transaction {
  Digest t_id{};
  std::optional<Digest> prev_t_id;
  double timestamp = 0.0;
  Digest output{};  // hash of the key the next transaction will use
  Digest pk{};
  Signature sign{};

  bool operator==(const Transaction&) const = default;
};

struct Ledger {
  std::string ledger_id;
  std::vector<Transaction> transactions;

  bool operator==(const Ledger&) const = default;
};

// hash(prev_t_id || timestamp || output || pk) under the canonical encoding.
Digest transaction_id(const std::optional<Digest>& prev_t_id, double timestamp,
                      const Digest& output, const Digest& pk);

// Placeholder signature: SHA-512 of (pk || subject), where subject is the
// payload digest when the communication carried data and t_id otherwise.
Signature placeholder_signature(const Digest& pk, const Digest& subject);

struct ChainDiagnostic {
  bool ok = true;
  std::size_t first_bad = 0;
  std::string reason;
  explicit operator bool() const { return ok; }
};

ChainDiagnostic check_chain(const Ledger& ledger);
inline bool verify_chain(const Ledger& ledger) {
  return check_chain(ledger).ok;
}

// Ground truth for one transaction. `device` indexes LedgerSet::devices.
// `payload` indexes LedgerSet::payloads, or is -1 when the transaction
// carries no data.
struct TxLabel {
  std::uint32_t device = 0;
  bool spoofed = false;
  std::int32_t payload = -1;

  bool operator==(const TxLabel&) const = default;
};

struct StageRecord {
  std::string transform;
  nlohmann::ordered_json params;

  bool operator==(const StageRecord&) const = default;
};

// Deterministic source of fresh public keys. Keys minted from one KeyMint are
// pairwise distinct.
class KeyMint {
 public:
  explicit KeyMint(std::uint64_t domain = 0) : domain_(domain) {}
  Digest mint();
  std::uint64_t issued() const { return next_; }

  bool operator==(const KeyMint&) const = default;

 private:
  std::uint64_t domain_;
  std::uint64_t next_ = 0;
};

// Maps t_id to (device, spoofed). Kept apart from the public view.
class LabelSidecar {
 public:
  struct Entry {
    std::string device;
    bool spoofed = false;
    bool operator==(const Entry&) const = default;
  };

  LabelSidecar() = default;
  LabelSidecar(std::vector<std::string> devices,
               std::vector<std::pair<Digest, TxLabel>> entries);

  std::optional<Entry> find(const Digest& t_id) const;
  // Index into devices(), or nullopt for an unknown t_id.
  std::optional<TxLabel> find_label(const Digest& t_id) const;
  const std::vector<std::string>& devices() const { return devices_; }
  std::size_t size() const { return entries_.size(); }
  // True when no t_id appears twice.
  bool unique() const;

  // {"<t_id hex>": {"device": ..., "spoofed": ...}, ...} sorted by t_id.
  std::string to_json() const;
  static LabelSidecar from_json(const std::string& text);

 private:
  std::vector<std::string> devices_;
  std::vector<std::pair<Digest, TxLabel>> entries_;  // sorted by t_id
};

// A collection of ledgers plus the private bookkeeping needed to evaluate
// attacks on it. `labels[i][j]` describes `ledgers[i].transactions[j]`.
struct LedgerSet {
  std::vector<Ledger> ledgers;
  std::vector<std::vector<TxLabel>> labels;
  std::vector<Digest> reserved_keys;  // per ledger: key for the next append
  std::vector<std::string> devices;   // sorted
  std::vector<Digest> payloads;
  std::vector<StageRecord> provenance;
  KeyMint keys;

  std::size_t transaction_count() const;
  std::size_t genuine_count() const;
  LabelSidecar sidecar() const;
  // True when every ledger holds transactions of a single device.
  bool per_device() const;
  const std::string& device_name(const TxLabel& label) const {
    return devices.at(label.device);
  }

  bool operator==(const LedgerSet&) const = default;
};

// Transaction content that survives re-chaining.
struct PendingTx {
  double timestamp = 0.0;
  Digest pk{};
  TxLabel label;
};

struct PendingLedger {
  std::vector<PendingTx> txs;
  Digest reserved_pk{};
};

// Computes output, t_id, prev_t_id and sign for every entry in the given
// order. Ledger ids are assigned as ledger-0000, ledger-0001, ...
void assemble(LedgerSet& out, std::vector<PendingLedger> pending);

std::vector<PendingLedger> disassemble(const LedgerSet& set);

std::string ledger_id_for(std::size_t index);

// Builds one ledger per device, one transaction per record, with a fresh key
// per transaction. Throws std::invalid_argument for an empty trace.
LedgerSet build_baseline(const TraceSet& trace);

// JSON Lines, one transaction per line with fields t_id, prev_t_id,
// timestamp, output, pk, sign in that order. A line whose prev_t_id is null
// opens a new ledger.
std::string public_view(const LedgerSet& set);
std::string public_view(std::span<const Ledger> ledgers);
std::vector<Ledger> parse_public_view(const std::string& text);

void write_public_view(const LedgerSet& set, const std::filesystem::path& path);
void write_sidecar(const LedgerSet& set, const std::filesystem::path& path);
std::vector<Ledger> read_public_view(const std::filesystem::path& path);
LabelSidecar read_sidecar(const std::filesystem::path& path);

}  // namespace iotledger

#endif  // IOTLEDGER_LEDGER_HPP_
