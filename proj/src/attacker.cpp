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

#include "iotledger/attacker.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "iotledger/error.hpp"
#include "iotledger/random.hpp"

namespace iotledger {

FeatureInstance FeatureSet::instance(std::size_t i) const {
  FeatureInstance out;
  const auto row = data.row(i);
  out.gaps.assign(row.begin(), row.end());
  if (!data.labels.empty()) out.label = data.classes.at(data.labels.at(i));
  out.anchor_t_id = anchors.at(i);
  out.genuine = genuine.at(i) != 0;
  return out;
}

FeatureSet extract_features(std::span<const Ledger> public_ledgers,
                            std::size_t window, const LabelSidecar* sidecar) {
  if (window == 0) {
    throw std::invalid_argument("extract_features: window must be >= 1");
  }
  FeatureSet out;
  out.window = window;
  out.data.width = window;
  if (sidecar) out.data.classes = sidecar->devices();

  std::vector<std::size_t> order;
  for (std::size_t li = 0; li < public_ledgers.size(); ++li) {
    const auto& txs = public_ledgers[li].transactions;
    if (txs.size() < window + 1) continue;
    order.resize(txs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return txs[a].timestamp < txs[b].timestamp;
                     });
    for (std::size_t last = window; last < txs.size(); ++last) {
      for (std::size_t k = last - window; k < last; ++k) {
        out.data.values.push_back(txs[order[k + 1]].timestamp -
                                  txs[order[k]].timestamp);
      }
      const Transaction& anchor = txs[order[last]];
      out.anchors.push_back(anchor.t_id);
      out.ledger.push_back(static_cast<std::uint32_t>(li));
      if (sidecar) {
        const auto label = sidecar->find_label(anchor.t_id);
        if (!label) {
          throw Error("extract_features: t_id " + to_hex(anchor.t_id) +
                      " missing from sidecar");
        }
        out.data.labels.push_back(static_cast<int>(label->device));
        out.genuine.push_back(label->spoofed ? 0 : 1);
      } else {
        out.genuine.push_back(1);
      }
    }
  }
  return out;
}

std::int64_t AttackReport::correct() const {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) c += confusion[i][i];
  return c;
}

std::int64_t AttackReport::total() const {
  std::int64_t t = 0;
  for (const auto& row : confusion) {
    for (auto v : row) t += v;
  }
  return t;
}

nlohmann::ordered_json AttackReport::to_json() const {
  nlohmann::ordered_json j;
  j["accuracy"] = accuracy;
  j["n_instances"] = n_instances;
  j["n_excluded_spoofed"] = n_excluded_spoofed;
  j["device_level_accuracy"] = device_level_accuracy;
  j["per_device_accuracy"] = nlohmann::ordered_json::object();
  for (const auto& [device, acc] : per_device_accuracy) {
    j["per_device_accuracy"][device] = acc;
  }
  j["labels"] = labels;
  j["confusion"] = confusion;
  return j;
}

AttackReport AttackReport::from_json(const nlohmann::json& j) {
  AttackReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.n_instances = j.at("n_instances").get<std::int64_t>();
  r.n_excluded_spoofed = j.at("n_excluded_spoofed").get<std::int64_t>();
  r.device_level_accuracy = j.at("device_level_accuracy").get<double>();
  r.per_device_accuracy =
      j.at("per_device_accuracy").get<std::map<std::string, double>>();
  r.labels = j.at("labels").get<std::vector<std::string>>();
  r.confusion = j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
  return r;
}

namespace {

AttackReport report_from_confusion(
    std::vector<std::string> labels,
    std::vector<std::vector<std::int64_t>> confusion,
    std::int64_t excluded_spoofed) {
  AttackReport r;
  r.labels = std::move(labels);
  r.confusion = std::move(confusion);
  r.n_instances = r.total();
  r.n_excluded_spoofed = excluded_spoofed;
  r.accuracy = r.n_instances == 0
                   ? 0.0
                   : static_cast<double>(r.correct()) /
                         static_cast<double>(r.n_instances);

  std::size_t devices = 0;
  std::size_t devices_right = 0;
  for (std::size_t t = 0; t < r.labels.size(); ++t) {
    const auto& row = r.confusion[t];
    const std::int64_t n =
        std::accumulate(row.begin(), row.end(), std::int64_t{0});
    if (n == 0) continue;
    r.per_device_accuracy[r.labels[t]] =
        static_cast<double>(row[t]) / static_cast<double>(n);
    ++devices;
    const auto majority = static_cast<std::size_t>(
        std::max_element(row.begin(), row.end()) - row.begin());
    if (majority == t) ++devices_right;
  }
  r.device_level_accuracy =
      devices == 0 ? 0.0
                   : static_cast<double>(devices_right) /
                         static_cast<double>(devices);
  return r;
}

std::vector<std::vector<std::int64_t>> zero_matrix(std::size_t n) {
  return std::vector<std::vector<std::int64_t>>(
      n, std::vector<std::int64_t>(n, 0));
}

}  // namespace

AttackReport make_report(std::span<const std::string> truth,
                         std::span<const std::string> predicted,
                         std::int64_t excluded_spoofed) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("make_report: size mismatch");
  }
  std::set<std::string> axes(truth.begin(), truth.end());
  axes.insert(predicted.begin(), predicted.end());
  std::vector<std::string> labels(axes.begin(), axes.end());
  const auto index_of = [&](const std::string& s) {
    return static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), s) - labels.begin());
  };
  auto confusion = zero_matrix(labels.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++confusion[index_of(truth[i])][index_of(predicted[i])];
  }
  return report_from_confusion(std::move(labels), std::move(confusion),
                               excluded_spoofed);
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds,
                                  std::uint64_t seed) {
  if (folds < 1) throw std::invalid_argument("folds must be >= 1");
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  std::vector<std::vector<std::size_t>> strata(
      static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("negative label");
    strata[labels[i]].push_back(i);
  }
  Rng rng(derive_seed(seed, 0xf01d5));
  std::vector<int> fold(labels.size(), 0);
  std::size_t dealt = 0;
  for (auto& members : strata) {
    shuffle(std::span<std::size_t>(members), rng);
    for (std::size_t idx : members) {
      fold[idx] = static_cast<int>(dealt % static_cast<std::size_t>(folds));
      ++dealt;
    }
  }
  return fold;
}

AttackReport informed_attack(const FeatureSet& features,
                             const TreeParams& params, int folds) {
  if (!features.labeled()) {
    throw Error("informed_attack: instances are unlabeled");
  }
  if (folds < 2) throw std::invalid_argument("informed_attack: folds >= 2");
  const std::size_t n = features.size();
  if (n < static_cast<std::size_t>(folds)) {
    throw Error("informed_attack: " + std::to_string(n) +
                " instances is fewer than " + std::to_string(folds) + " folds");
  }
  const auto fold = stratified_folds(features.data.labels, folds, params.seed);
  const PresortedIndex index(features.data);
  const auto& classes = features.data.classes;

  auto confusion = zero_matrix(classes.size());
  std::int64_t excluded = 0;
  std::vector<std::uint8_t> include(n);
  for (int k = 0; k < folds; ++k) {
    std::size_t train_rows = 0;
    for (std::size_t i = 0; i < n; ++i) {
      include[i] = fold[i] != k;
      train_rows += include[i];
    }
    if (train_rows == 0) continue;
    const auto tree =
        DecisionTree::fit(features.data, index, include, params);
    for (std::size_t i = 0; i < n; ++i) {
      if (fold[i] != k) continue;
      if (!features.genuine[i]) {
        ++excluded;
        continue;
      }
      ++confusion[features.data.labels[i]]
                 [tree.predict_index(features.data.row(i))];
    }
  }
  return report_from_confusion(classes, std::move(confusion), excluded);
}

AttackReport informed_attack(const LedgerSet& set, std::size_t window,
                             const TreeParams& params, int folds) {
  const auto sidecar = set.sidecar();
  const auto features = extract_features(set.ledgers, window, &sidecar);
  return informed_attack(features, params, folds);
}

AttackReport blind_attack(const FeatureSet& train, const FeatureSet& test,
                          const TreeParams& params) {
  if (!train.labeled() || !test.labeled()) {
    throw Error("blind_attack: instances are unlabeled");
  }
  if (train.size() == 0) throw Error("blind_attack: no training instances");
  if (train.window != test.window) {
    throw std::invalid_argument("blind_attack: window mismatch");
  }
  const auto tree = DecisionTree::fit(train.data, params);
  std::set<std::string> axes(train.data.classes.begin(),
                             train.data.classes.end());
  axes.insert(test.data.classes.begin(), test.data.classes.end());
  std::vector<std::string> labels(axes.begin(), axes.end());
  const auto to_axes = [&](const std::vector<std::string>& classes) {
    std::vector<std::size_t> map;
    for (const auto& c : classes) {
      map.push_back(static_cast<std::size_t>(
          std::lower_bound(labels.begin(), labels.end(), c) - labels.begin()));
    }
    return map;
  };
  const auto train_axis = to_axes(train.data.classes);
  const auto test_axis = to_axes(test.data.classes);
  auto confusion = zero_matrix(labels.size());
  std::int64_t excluded = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!test.genuine[i]) {
      ++excluded;
      continue;
    }
    ++confusion[test_axis[test.data.labels[i]]]
               [train_axis[tree.predict_index(test.data.row(i))]];
  }
  return report_from_confusion(std::move(labels), std::move(confusion),
                               excluded);
}

AttackReport blind_attack(const LedgerSet& train, const LedgerSet& test,
                          std::size_t window, const TreeParams& params) {
  if (train.ledgers.empty() || test.ledgers.empty()) {
    throw Error("blind_attack: empty ledger set");
  }
  const auto train_sidecar = train.sidecar();
  const auto test_sidecar = test.sidecar();
  const auto train_features =
      extract_features(train.ledgers, window, &train_sidecar);
  const auto test_features =
      extract_features(test.ledgers, window, &test_sidecar);
  return blind_attack(train_features, test_features, params);
}

}  // namespace iotledger
