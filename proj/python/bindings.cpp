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

// Python bindings. Structured values cross the boundary as JSON text; the
// iotledger package decodes them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "iotledger/attacker.hpp"
#include "iotledger/error.hpp"
#include "iotledger/experiment.hpp"
#include "iotledger/ledger.hpp"
#include "iotledger/obfuscate.hpp"
#include "iotledger/trace.hpp"

namespace py = pybind11;
using namespace iotledger;

namespace {

std::vector<DeviceProfile> profiles_or_builtin(const std::optional<std::string>& json,
                                               std::optional<double> jitter) {
  auto profiles = json ? profiles_from_json(*json) : builtin_profiles();
  if (jitter) {
    for (auto& p : profiles) p.jitter_frac = *jitter;
  }
  return profiles;
}

TreeParams tree_params(int max_depth, int min_samples_split,
                       double min_impurity_decrease, std::uint64_t seed) {
  TreeParams p;
  p.max_depth = max_depth;
  p.min_samples_split = min_samples_split;
  p.min_impurity_decrease = min_impurity_decrease;
  p.seed = seed;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_iotledger, m) {
  static py::exception<Error> error(m, "Error");
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  static py::exception<StageError> stage_error(m, "StageError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const StageError& e) {
      stage_error(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<TraceSet>(m, "Trace")
      .def_property_readonly("devices",
                             [](const TraceSet& t) {
                               return std::vector<std::string>(t.devices.begin(),
                                                               t.devices.end());
                             })
      .def_readonly("duration", &TraceSet::duration)
      .def("__len__", [](const TraceSet& t) { return t.records.size(); })
      .def("records",
           [](const TraceSet& t) {
             std::vector<std::pair<std::string, double>> out;
             out.reserve(t.records.size());
             for (const auto& r : t.records) out.emplace_back(r.device, r.timestamp);
             return out;
           })
      .def("to_csv", [](const TraceSet& t) { return to_csv(t); });

  py::class_<LedgerSet>(m, "LedgerSet")
      .def_readonly("devices", &LedgerSet::devices)
      .def("__len__", [](const LedgerSet& s) { return s.ledgers.size(); })
      .def("transaction_count", &LedgerSet::transaction_count)
      .def("genuine_count", &LedgerSet::genuine_count)
      .def("verify",
           [](const LedgerSet& s) {
             for (const auto& l : s.ledgers) {
               if (!verify_chain(l)) return false;
             }
             return true;
           })
      .def("public_view", [](const LedgerSet& s) { return public_view(s); })
      .def("sidecar_json", [](const LedgerSet& s) { return s.sidecar().to_json(); })
      .def("provenance_json", [](const LedgerSet& s) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& r : s.provenance) {
          j.push_back({{"transform", r.transform}, {"params", r.params}});
        }
        return j.dump();
      });

  m.def("builtin_profiles_json", [] { return profiles_to_json(builtin_profiles()); });
  m.def(
      "synth_trace",
      [](double duration, std::uint64_t seed, std::optional<std::string> profiles,
         std::optional<double> jitter) {
        const auto p = profiles_or_builtin(profiles, jitter);
        return synth_trace(p, duration, seed);
      },
      py::arg("duration"), py::arg("seed"), py::arg("profiles") = py::none(),
      py::arg("jitter") = py::none());
  m.def(
      "parse_csv",
      [](const std::string& text, const std::set<std::string>& blocklist) {
        return parse_csv(text, IngestOptions{blocklist});
      },
      py::arg("text"), py::arg("blocklist") = std::set<std::string>{});
  m.def("build_baseline", &build_baseline, py::arg("trace"));
  m.def(
      "compose",
      [](const TraceSet& trace, const std::string& pipeline) {
        return compose(trace, parse_pipeline(pipeline));
      },
      py::arg("trace"), py::arg("pipeline"));
  m.def(
      "informed_attack",
      [](const LedgerSet& set, std::size_t window, int folds, int max_depth,
         int min_samples_split, double min_impurity_decrease, std::uint64_t seed) {
        const auto p = tree_params(max_depth, min_samples_split, min_impurity_decrease, seed);
        return informed_attack(set, window, p, folds).to_json().dump();
      },
      py::arg("ledgers"), py::arg("window") = kDefaultWindow,
      py::arg("folds") = kDefaultFolds, py::arg("max_depth") = TreeParams{}.max_depth,
      py::arg("min_samples_split") = TreeParams{}.min_samples_split,
      py::arg("min_impurity_decrease") = 0.0, py::arg("seed") = 0);
  m.def(
      "blind_attack",
      [](const LedgerSet& train, const LedgerSet& test, std::size_t window,
         int max_depth, int min_samples_split, double min_impurity_decrease,
         std::uint64_t seed) {
        const auto p = tree_params(max_depth, min_samples_split, min_impurity_decrease, seed);
        return blind_attack(train, test, window, p).to_json().dump();
      },
      py::arg("train"), py::arg("test"), py::arg("window") = kDefaultWindow,
      py::arg("max_depth") = TreeParams{}.max_depth,
      py::arg("min_samples_split") = TreeParams{}.min_samples_split,
      py::arg("min_impurity_decrease") = 0.0, py::arg("seed") = 0);
  m.def(
      "run",
      [](const std::string& config) {
        return run(ExperimentConfig::from_json(nlohmann::json::parse(config)))
            .to_json()
            .dump();
      },
      py::arg("config"));
  m.def(
      "sweep",
      [](const std::string& config, const std::string& axis,
         std::optional<std::vector<double>> values) {
        const auto a = axis_from_name(axis);
        const auto grid = values ? *values : default_grid(a);
        return sweep(ExperimentConfig::from_json(nlohmann::json::parse(config)), a, grid)
            .to_json()
            .dump();
      },
      py::arg("config"), py::arg("axis"), py::arg("values") = py::none());
}
