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

#ifndef IOTLEDGER_TRACE_HPP_
#define IOTLEDGER_TRACE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace iotledger {

// Repeating inter-packet timing signature of one device type.
//
// Emission walks `gap_cycle` cyclically. Before advancing by gap_cycle[i] the
// generator emits burst_counts[i] extra records spaced kBurstSpacing apart
// (entries past the end of burst_counts count as zero). Every gap is scaled by
// an independent factor uniform in [1 - jitter_frac, 1 + jitter_frac].
struct DeviceProfile {
  std::string name;
  std::vector<double> gap_cycle;
  double jitter_frac = 0.02;
  std::vector<int> burst_counts;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
  int burst_at(std::size_t i) const {
    return i < burst_counts.size() ? burst_counts[i] : 0;
  }

  bool operator==(const DeviceProfile&) const = default;
};

inline constexpr double kBurstSpacing = 0.00005;
inline constexpr double kDefaultJitter = 0.02;

struct CommRecord {
  std::string device;
  double timestamp = 0.0;
  std::optional<std::vector<std::uint8_t>> payload_digest;

  bool operator==(const CommRecord&) const = default;
};

struct TraceSet {
  std::vector<CommRecord> records;
  std::set<std::string> devices;
  double duration = 0.0;

  bool empty() const { return records.empty(); }
  // Records of one device, in trace order.
  std::vector<const CommRecord*> records_of(const std::string& device) const;
};

// Sorts by (timestamp, device) keeping insertion order for full ties, then
// recomputes `devices`. `duration` is left untouched.
void normalize(TraceSet& trace);

// One profile per row of the device timing table, with the two smart-plug
// rows split into _A and _B. Every profile carries kDefaultJitter.
std::vector<DeviceProfile> builtin_profiles();

// Same table with each profile's jitter replaced.
std::vector<DeviceProfile> builtin_profiles(double jitter_frac);

// Throws std::invalid_argument if duration <= 0, profiles is empty, or a
// profile is invalid. Deterministic for a fixed seed.
TraceSet synth_trace(std::span<const DeviceProfile> profiles, double duration,
                     std::uint64_t seed);

struct IngestOptions {
  std::set<std::string> blocklist;
};

// Parses `device,timestamp[,digest_hex]` lines after a header line. Throws
// ParseError naming the offending line. Duration is the largest timestamp
// kept (0 for an empty trace).
TraceSet ingest_csv(const std::filesystem::path& path,
                    const IngestOptions& options = {});
TraceSet parse_csv(const std::string& text, const IngestOptions& options = {});

// Header `device,timestamp,digest`; timestamps are written with the shortest
// exact decimal form padded to at least six fractional digits.
std::string to_csv(const TraceSet& trace);
void write_csv(const TraceSet& trace, const std::filesystem::path& path);

// JSON array of {name, gap_cycle, jitter_frac, burst_counts}.
std::vector<DeviceProfile> profiles_from_json(const std::string& text);
std::vector<DeviceProfile> load_profiles(const std::filesystem::path& path);
std::string profiles_to_json(std::span<const DeviceProfile> profiles);

// Decimal text that parses back to exactly `value`, with >= 6 fraction digits.
std::string format_seconds(double value);

}  // namespace iotledger

#endif  // IOTLEDGER_TRACE_HPP_
