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

#include "iotledger/ledger.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "iotledger/error.hpp"

namespace iotledger {

Digest transaction_id(const std::optional<Digest>& prev_t_id, double timestamp,
                      const Digest& output, const Digest& pk) {
  CanonicalEncoder enc;
  if (prev_t_id) {
    enc.bytes(*prev_t_id);
  } else {
    enc.empty();
  }
  enc.f64(timestamp).bytes(output).bytes(pk);
  return sha256(enc.view());
}

Signature placeholder_signature(const Digest& pk, const Digest& subject) {
  CanonicalEncoder enc;
  enc.bytes(pk).bytes(subject);
  return sha512(enc.view());
}

ChainDiagnostic check_chain(const Ledger& ledger) {
  const auto& txs = ledger.transactions;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Transaction& tx = txs[i];
    if (i == 0) {
      if (tx.prev_t_id) return {false, i, "chain head has a predecessor"};
    } else if (!tx.prev_t_id || *tx.prev_t_id != txs[i - 1].t_id) {
      return {false, i, "prev_t_id does not match predecessor"};
    }
    if (transaction_id(tx.prev_t_id, tx.timestamp, tx.output, tx.pk) !=
        tx.t_id) {
      return {false, i, "t_id does not match content"};
    }
  }
  return {};
}

Digest KeyMint::mint() {
  CanonicalEncoder enc;
  enc.text("iotledger/pk").u64(domain_).u64(next_++);
  return sha256(enc.view());
}

LabelSidecar::LabelSidecar(std::vector<std::string> devices,
                           std::vector<std::pair<Digest, TxLabel>> entries)
    : devices_(std::move(devices)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::optional<TxLabel> LabelSidecar::find_label(const Digest& t_id) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), t_id,
      [](const auto& entry, const Digest& key) { return entry.first < key; });
  if (it == entries_.end() || it->first != t_id) return std::nullopt;
  return it->second;
}

std::optional<LabelSidecar::Entry> LabelSidecar::find(
    const Digest& t_id) const {
  const auto label = find_label(t_id);
  if (!label) return std::nullopt;
  return Entry{devices_.at(label->device), label->spoofed};
}

bool LabelSidecar::unique() const {
  return std::adjacent_find(entries_.begin(), entries_.end(),
                            [](const auto& a, const auto& b) {
                              return a.first == b.first;
                            }) == entries_.end();
}

std::string LabelSidecar::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [t_id, label] : entries_) {
    doc[to_hex(t_id)] = {{"device", devices_.at(label.device)},
                         {"spoofed", label.spoofed}};
  }
  return doc.dump() + "\n";
}

LabelSidecar LabelSidecar::from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_object()) throw Error("sidecar must be a JSON object");
  std::map<std::string, std::uint32_t> index;
  std::vector<std::pair<Digest, std::string>> raw;
  for (const auto& [key, value] : doc.items()) {
    auto device = value.at("device").get<std::string>();
    index.emplace(device, 0);
    raw.emplace_back(digest_from_hex(key), std::move(device));
  }
  std::vector<std::string> devices;
  for (auto& [name, id] : index) {
    id = static_cast<std::uint32_t>(devices.size());
    devices.push_back(name);
  }
  std::vector<std::pair<Digest, TxLabel>> entries;
  entries.reserve(raw.size());
  for (const auto& [key, value] : doc.items()) {
    TxLabel label;
    label.device = index.at(value.at("device").get<std::string>());
    label.spoofed = value.at("spoofed").get<bool>();
    entries.emplace_back(digest_from_hex(key), label);
  }
  return LabelSidecar(std::move(devices), std::move(entries));
}

std::size_t LedgerSet::transaction_count() const {
  std::size_t n = 0;
  for (const auto& l : ledgers) n += l.transactions.size();
  return n;
}

std::size_t LedgerSet::genuine_count() const {
  std::size_t n = 0;
  for (const auto& per_ledger : labels) {
    for (const auto& label : per_ledger) n += label.spoofed ? 0 : 1;
  }
  return n;
}

LabelSidecar LedgerSet::sidecar() const {
  std::vector<std::pair<Digest, TxLabel>> entries;
  entries.reserve(transaction_count());
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    const auto& txs = ledgers[i].transactions;
    for (std::size_t j = 0; j < txs.size(); ++j) {
      entries.emplace_back(txs[j].t_id, labels[i][j]);
    }
  }
  return LabelSidecar(devices, std::move(entries));
}

bool LedgerSet::per_device() const {
  for (const auto& per_ledger : labels) {
    for (const auto& label : per_ledger) {
      if (label.device != per_ledger.front().device) return false;
    }
  }
  return true;
}

std::string ledger_id_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ledger-%04zu", index);
  return buf;
}

void assemble(LedgerSet& out, std::vector<PendingLedger> pending) {
  out.ledgers.clear();
  out.labels.clear();
  out.reserved_keys.clear();
  out.ledgers.reserve(pending.size());
  for (std::size_t li = 0; li < pending.size(); ++li) {
    const PendingLedger& src = pending[li];
    Ledger ledger;
    ledger.ledger_id = ledger_id_for(li);
    ledger.transactions.resize(src.txs.size());
    std::vector<TxLabel> labels(src.txs.size());
    for (std::size_t i = 0; i < src.txs.size(); ++i) {
      const PendingTx& p = src.txs[i];
      Transaction& tx = ledger.transactions[i];
      tx.timestamp = p.timestamp;
      tx.pk = p.pk;
      tx.output =
          sha256(i + 1 < src.txs.size() ? src.txs[i + 1].pk : src.reserved_pk);
      if (i > 0) tx.prev_t_id = ledger.transactions[i - 1].t_id;
      tx.t_id = transaction_id(tx.prev_t_id, tx.timestamp, tx.output, tx.pk);
      const Digest& subject =
          p.label.payload >= 0 ? out.payloads.at(p.label.payload) : tx.t_id;
      tx.sign = placeholder_signature(tx.pk, subject);
      labels[i] = p.label;
    }
    out.ledgers.push_back(std::move(ledger));
    out.labels.push_back(std::move(labels));
    out.reserved_keys.push_back(src.reserved_pk);
  }
}

std::vector<PendingLedger> disassemble(const LedgerSet& set) {
  std::vector<PendingLedger> out(set.ledgers.size());
  for (std::size_t li = 0; li < set.ledgers.size(); ++li) {
    const auto& txs = set.ledgers[li].transactions;
    out[li].txs.reserve(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
      out[li].txs.push_back({txs[i].timestamp, txs[i].pk, set.labels[li][i]});
    }
    out[li].reserved_pk = set.reserved_keys.at(li);
  }
  return out;
}

LedgerSet build_baseline(const TraceSet& trace) {
  if (trace.empty()) {
    throw std::invalid_argument("build_baseline: trace is empty");
  }
  LedgerSet set;
  set.devices.assign(trace.devices.begin(), trace.devices.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < set.devices.size(); ++i) {
    index.emplace(set.devices[i], i);
  }

  std::vector<std::vector<const CommRecord*>> per_device(set.devices.size());
  for (const auto& r : trace.records) per_device[index.at(r.device)].push_back(&r);

  std::vector<PendingLedger> pending(set.devices.size());
  for (std::uint32_t d = 0; d < set.devices.size(); ++d) {
    auto& ledger = pending[d];
    ledger.txs.reserve(per_device[d].size());
    for (const CommRecord* r : per_device[d]) {
      TxLabel label{d, false, -1};
      if (r->payload_digest) {
        label.payload = static_cast<std::int32_t>(set.payloads.size());
        set.payloads.push_back(sha256(*r->payload_digest));
      }
      ledger.txs.push_back({r->timestamp, set.keys.mint(), label});
    }
    ledger.reserved_pk = set.keys.mint();
  }
  assemble(set, std::move(pending));
  set.provenance.push_back({"baseline", nlohmann::ordered_json::object()});
  return set;
}

namespace {

nlohmann::ordered_json transaction_json(const Transaction& tx) {
  nlohmann::ordered_json j;
  j["t_id"] = to_hex(tx.t_id);
  j["prev_t_id"] = tx.prev_t_id ? nlohmann::ordered_json(to_hex(*tx.prev_t_id))
                                : nlohmann::ordered_json(nullptr);
  j["timestamp"] = tx.timestamp;
  j["output"] = to_hex(tx.output);
  j["pk"] = to_hex(tx.pk);
  j["sign"] = to_hex(tx.sign);
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::string public_view(std::span<const Ledger> ledgers) {
  std::string out;
  for (const auto& ledger : ledgers) {
    for (const auto& tx : ledger.transactions) {
      out += transaction_json(tx).dump();
      out += '\n';
    }
  }
  return out;
}

std::string public_view(const LedgerSet& set) {
  return public_view(std::span<const Ledger>(set.ledgers));
}

std::vector<Ledger> parse_public_view(const std::string& text) {
  std::vector<Ledger> ledgers;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Transaction tx;
      tx.t_id = digest_from_hex(j.at("t_id").get<std::string>());
      if (!j.at("prev_t_id").is_null()) {
        tx.prev_t_id = digest_from_hex(j["prev_t_id"].get<std::string>());
      }
      tx.timestamp = j.at("timestamp").get<double>();
      tx.output = digest_from_hex(j.at("output").get<std::string>());
      tx.pk = digest_from_hex(j.at("pk").get<std::string>());
      const auto sign = from_hex(j.at("sign").get<std::string>());
      if (sign.size() != tx.sign.size()) {
        throw std::invalid_argument("sign must be 64 bytes");
      }
      std::copy(sign.begin(), sign.end(), tx.sign.begin());
      if (!tx.prev_t_id || ledgers.empty()) {
        ledgers.push_back({ledger_id_for(ledgers.size()), {}});
      }
      ledgers.back().transactions.push_back(tx);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return ledgers;
}

void write_public_view(const LedgerSet& set,
                       const std::filesystem::path& path) {
  write_file(path, public_view(set));
}

void write_sidecar(const LedgerSet& set, const std::filesystem::path& path) {
  write_file(path, set.sidecar().to_json());
}

std::vector<Ledger> read_public_view(const std::filesystem::path& path) {
  return parse_public_view(read_file(path));
}

LabelSidecar read_sidecar(const std::filesystem::path& path) {
  return LabelSidecar::from_json(read_file(path));
}

}  // namespace iotledger
