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

#include "iotledger/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "iotledger/digest.hpp"
#include "iotledger/error.hpp"
#include "iotledger/random.hpp"
#include "json.hpp"

namespace iotledger {

void DeviceProfile::validate() const {
  if (name.empty()) throw std::invalid_argument("profile name is empty");
  if (gap_cycle.empty()) {
    throw std::invalid_argument("profile " + name + ": gap_cycle is empty");
  }
  for (double gap : gap_cycle) {
    if (!(gap > 0.0) || !std::isfinite(gap)) {
      throw std::invalid_argument("profile " + name +
                                  ": gaps must be positive and finite");
    }
  }
  if (!(jitter_frac >= 0.0 && jitter_frac < 1.0)) {
    throw std::invalid_argument("profile " + name +
                                ": jitter_frac must lie in [0, 1)");
  }
  if (burst_counts.size() > gap_cycle.size()) {
    throw std::invalid_argument("profile " + name +
                                ": burst_counts longer than gap_cycle");
  }
  for (int b : burst_counts) {
    if (b < 0) {
      throw std::invalid_argument("profile " + name +
                                  ": negative burst count");
    }
  }
}

std::vector<const CommRecord*> TraceSet::records_of(
    const std::string& device) const {
  std::vector<const CommRecord*> out;
  for (const auto& r : records) {
    if (r.device == device) out.push_back(&r);
  }
  return out;
}

void normalize(TraceSet& trace) {
  std::stable_sort(trace.records.begin(), trace.records.end(),
                   [](const CommRecord& a, const CommRecord& b) {
                     if (a.timestamp != b.timestamp) {
                       return a.timestamp < b.timestamp;
                     }
                     return a.device < b.device;
                   });
  trace.devices.clear();
  for (const auto& r : trace.records) trace.devices.insert(r.device);
}

std::vector<DeviceProfile> builtin_profiles() {
  const double j = kDefaultJitter;
  return {
      {"Smart_Things", {0.207, 58.0}, j, {}},
      {"Amazon_Echo", {0.217, 30.0, 0.004, 30.0}, j, {}},
      {"TPLink_Camera", {0.12, 61.0}, j, {}},
      {"Samsung_Camera", {0.165, 30.0}, j, {}},
      {"Drop_Camera", {1.03, 0.2}, j, {}},
      {"Insteon_Camera2", {0.216, 300.0}, j, {9}},
      {"Baby_Monitor", {600.0, 0.28}, j, {}},
      {"TPLink_Smartplug_A", {0.24, 236.0}, j, {}},
      {"TPLink_Smartplug_B", {0.12, 236.0}, j, {}},
      {"iHome", {60.0, 0.205}, j, {}},
      {"Nest_Smockalarm", {0.207, 0.015}, j, {}},
      {"Netatmo_Weather", {1.72, 0.33}, j, {}},
      {"Sleep_Sensor", {10.0, 0.276}, j, {}},
      {"Lifx_Smartbulb", {1.92, 60.0}, j, {}},
      {"Triby_Speaker", {120.0, 0.3, 120.0, 0.3, 56.0, 0.3}, j, {}},
      {"Pix_Photoframe", {0.31, 0.3, 65.0, 650.0}, j, {}},
      {"HP_Printer", {90.0}, j, {}},
  };
}

std::vector<DeviceProfile> builtin_profiles(double jitter_frac) {
  auto profiles = builtin_profiles();
  for (auto& p : profiles) p.jitter_frac = jitter_frac;
  return profiles;
}

TraceSet synth_trace(std::span<const DeviceProfile> profiles, double duration,
                     std::uint64_t seed) {
  if (!(duration > 0.0)) {
    throw std::invalid_argument("synth_trace: duration must be positive");
  }
  if (profiles.empty()) {
    throw std::invalid_argument("synth_trace: no profiles");
  }
  TraceSet trace;
  trace.duration = duration;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    const DeviceProfile& profile = profiles[p];
    profile.validate();
    Rng rng(derive_seed(seed, p));
    const std::size_t cycle = profile.gap_cycle.size();
    const double lo = 1.0 - profile.jitter_frac;
    const double hi = 1.0 + profile.jitter_frac;

    double t = uniform01(rng) * profile.gap_cycle[0];
    for (std::size_t step = 0; t <= duration; ++step) {
      const std::size_t pos = step % cycle;
      trace.records.push_back({profile.name, t, std::nullopt});
      for (int b = 0; b < profile.burst_at(pos); ++b) {
        t += kBurstSpacing;
        if (t > duration) break;
        trace.records.push_back({profile.name, t, std::nullopt});
      }
      t += profile.gap_cycle[pos] * uniform_in(rng, lo, hi);
    }
  }
  normalize(trace);
  return trace;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' ||
                        s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

}  // namespace

TraceSet parse_csv(const std::string& text, const IngestOptions& options) {
  TraceSet trace;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("device")) continue;

    const auto fields = split_commas(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no, "expected device,timestamp[,digest]");
    }
    if (fields[0].empty()) throw ParseError(line_no, "empty device label");

    double ts = 0.0;
    const auto* first = fields[1].data();
    const auto* last = first + fields[1].size();
    const auto [ptr, ec] = std::from_chars(first, last, ts);
    if (ec != std::errc() || ptr != last || fields[1].empty()) {
      throw ParseError(line_no, "invalid timestamp '" +
                                    std::string(fields[1]) + "'");
    }
    if (!std::isfinite(ts) || ts < 0.0) {
      throw ParseError(line_no, "timestamp must be finite and non-negative");
    }

    CommRecord record{std::string(fields[0]), ts, std::nullopt};
    if (fields.size() == 3 && !fields[2].empty()) {
      try {
        record.payload_digest = from_hex(fields[2]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, std::string("digest: ") + e.what());
      }
    }
    if (options.blocklist.contains(record.device)) continue;
    trace.records.push_back(std::move(record));
  }
  normalize(trace);
  trace.duration = trace.records.empty() ? 0.0 : trace.records.back().timestamp;
  return trace;
}

TraceSet ingest_csv(const std::filesystem::path& path,
                    const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options);
}

std::string format_seconds(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  const auto dot = s.find('.');
  std::size_t decimals = 0;
  if (dot == std::string::npos) {
    s.push_back('.');
  } else {
    decimals = s.size() - dot - 1;
  }
  if (decimals < 6) s.append(6 - decimals, '0');
  return s;
}

std::string to_csv(const TraceSet& trace) {
  std::string out = "device,timestamp,digest\n";
  for (const auto& r : trace.records) {
    out += r.device;
    out += ',';
    out += format_seconds(r.timestamp);
    out += ',';
    if (r.payload_digest) out += to_hex(*r.payload_digest);
    out += '\n';
  }
  return out;
}

void write_csv(const TraceSet& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file " + path.string());
  out << to_csv(trace);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<DeviceProfile> profiles_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw Error("profile file must hold a JSON array");
  std::vector<DeviceProfile> out;
  for (const auto& item : doc) {
    DeviceProfile p;
    p.name = item.at("name").get<std::string>();
    p.gap_cycle = item.at("gap_cycle").get<std::vector<double>>();
    p.jitter_frac = item.value("jitter_frac", kDefaultJitter);
    if (item.contains("burst_counts") && !item["burst_counts"].is_null()) {
      p.burst_counts = item["burst_counts"].get<std::vector<int>>();
    }
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<DeviceProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return profiles_from_json(buffer.str());
}

std::string profiles_to_json(std::span<const DeviceProfile> profiles) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    doc.push_back({{"name", p.name},
                   {"gap_cycle", p.gap_cycle},
                   {"jitter_frac", p.jitter_frac},
                   {"burst_counts", p.burst_counts}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace iotledger
