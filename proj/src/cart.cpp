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

#include "iotledger/cart.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "iotledger/random.hpp"
#include "json.hpp"

namespace iotledger {

void TreeParams::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_split < 2) {
    throw std::invalid_argument("min_samples_split must be >= 2");
  }
  if (!(min_impurity_decrease >= 0.0)) {
    throw std::invalid_argument("min_impurity_decrease must be >= 0");
  }
}

std::int64_t TreeNode::samples() const {
  return std::accumulate(histogram.begin(), histogram.end(), std::int64_t{0});
}

double gini(std::span<const std::int64_t> counts) {
  std::int64_t n = 0;
  double sumsq = 0.0;
  for (auto c : counts) {
    n += c;
    sumsq += static_cast<double>(c) * static_cast<double>(c);
  }
  if (n == 0) return 0.0;
  return 1.0 - sumsq / (static_cast<double>(n) * static_cast<double>(n));
}

PresortedIndex::PresortedIndex(const Dataset& data) : order_(data.width) {
  const auto n = static_cast<std::uint32_t>(data.rows());
  for (std::size_t f = 0; f < data.width; ++f) {
    auto& order = order_[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                const double va = data.values[a * data.width + f];
                const double vb = data.values[b * data.width + f];
                return va < vb || (va == vb && a < b);
              });
  }
}

namespace {

// Depth-first builder over per-feature sorted columns. Every column holds the
// same row set in each node's [begin, end) range, ordered by that feature.
class Builder {
 public:
  Builder(const Dataset& data, const PresortedIndex& index,
          std::span<const std::uint8_t> include, const TreeParams& params)
      : data_(data),
        params_(params),
        classes_(data.classes.size()),
        goes_left_(data.rows(), 0) {
    const std::size_t width = data.width;
    rows_.resize(width);
    values_.resize(width);
    for (std::size_t f = 0; f < width; ++f) {
      for (std::uint32_t row : index.order(f)) {
        if (!include.empty() && !include[row]) continue;
        rows_[f].push_back(row);
        values_[f].push_back(data.values[row * width + f]);
      }
    }
    feature_order_.resize(width);
    std::iota(feature_order_.begin(), feature_order_.end(), std::size_t{0});
    Rng rng(derive_seed(params.seed, 0xca27));
    shuffle(std::span<std::size_t>(feature_order_), rng);
    scratch_rows_.resize(rows_[0].size());
    scratch_values_.resize(rows_[0].size());
    left_counts_.resize(classes_);
    right_counts_.resize(classes_);
  }

  std::size_t size() const { return rows_.empty() ? 0 : rows_[0].size(); }

  std::vector<TreeNode> build() {
    grow(0, size(), 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    bool found = false;
    std::size_t feature = 0;
    std::size_t left_size = 0;
    double threshold = 0.0;
    double score = 0.0;  // sum over children of (sum of squared counts / n)
  };

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    TreeNode node;
    node.depth = depth;
    node.histogram.assign(classes_, 0);
    for (std::size_t i = begin; i < end; ++i) {
      ++node.histogram[data_.labels[rows_[0][i]]];
    }
    node.impurity = gini(node.histogram);
    node.label = static_cast<int>(
        std::max_element(node.histogram.begin(), node.histogram.end()) -
        node.histogram.begin());

    const std::size_t n = end - begin;
    const bool pure = node.impurity <= 0.0;
    if (pure || depth >= params_.max_depth ||
        n < static_cast<std::size_t>(params_.min_samples_split)) {
      nodes_[id] = std::move(node);
      return id;
    }

    const Split split = best_split(begin, end, node.histogram);
    if (!split.found) {
      nodes_[id] = std::move(node);
      return id;
    }
    const double child_impurity = 1.0 - split.score / static_cast<double>(n);
    const double decrease = node.impurity - child_impurity;
    if (decrease + 1e-12 < params_.min_impurity_decrease) {
      nodes_[id] = std::move(node);
      return id;
    }

    partition(begin, end, split);
    node.feature = static_cast<int>(split.feature);
    node.threshold = split.threshold;
    nodes_[id] = std::move(node);
    const std::size_t mid = begin + split.left_size;
    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  Split best_split(std::size_t begin, std::size_t end,
                   const std::vector<std::int64_t>& totals) {
    Split best;
    std::int64_t total_sq = 0;
    for (auto c : totals) total_sq += c * c;
    const std::size_t n = end - begin;
    for (std::size_t f : feature_order_) {
      const auto& rows = rows_[f];
      const auto& values = values_[f];
      if (values[begin] == values[end - 1]) continue;
      std::fill(left_counts_.begin(), left_counts_.end(), 0);
      std::copy(totals.begin(), totals.end(), right_counts_.begin());
      std::int64_t left_sq = 0;
      std::int64_t right_sq = total_sq;
      for (std::size_t i = begin; i + 1 < end; ++i) {
        const int c = data_.labels[rows[i]];
        left_sq += 2 * left_counts_[c] + 1;
        ++left_counts_[c];
        right_sq -= 2 * right_counts_[c] - 1;
        --right_counts_[c];
        if (values[i] == values[i + 1]) continue;
        const auto n_left = static_cast<double>(i + 1 - begin);
        const auto n_right = static_cast<double>(n) - n_left;
        const double score = static_cast<double>(left_sq) / n_left +
                             static_cast<double>(right_sq) / n_right;
        if (!best.found || score > best.score) {
          best.found = true;
          best.score = score;
          best.feature = f;
          best.left_size = i + 1 - begin;
          double mid = values[i] + (values[i + 1] - values[i]) / 2.0;
          if (!(mid < values[i + 1])) mid = values[i];
          best.threshold = mid;
        }
      }
    }
    return best;
  }

  void partition(std::size_t begin, std::size_t end, const Split& split) {
    const auto& chosen = rows_[split.feature];
    for (std::size_t i = begin; i < end; ++i) {
      goes_left_[chosen[i]] = i < begin + split.left_size ? 1 : 0;
    }
    for (std::size_t f = 0; f < rows_.size(); ++f) {
      if (f == split.feature) continue;
      auto& rows = rows_[f];
      auto& values = values_[f];
      std::size_t l = begin;
      std::size_t r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        if (goes_left_[rows[i]]) {
          rows[l] = rows[i];
          values[l] = values[i];
          ++l;
        } else {
          scratch_rows_[r] = rows[i];
          scratch_values_[r] = values[i];
          ++r;
        }
      }
      std::copy_n(scratch_rows_.begin(), r, rows.begin() + l);
      std::copy_n(scratch_values_.begin(), r, values.begin() + l);
    }
  }

  const Dataset& data_;
  const TreeParams& params_;
  std::size_t classes_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::vector<double>> values_;
  std::vector<std::size_t> feature_order_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_rows_;
  std::vector<double> scratch_values_;
  std::vector<std::int64_t> left_counts_;
  std::vector<std::int64_t> right_counts_;
  std::vector<TreeNode> nodes_;
};

void check_dataset(const Dataset& data) {
  if (data.width == 0) throw std::invalid_argument("dataset has zero width");
  if (data.values.size() % data.width != 0) {
    throw std::invalid_argument("dataset values do not match rows x width");
  }
  if (data.labels.size() != data.rows()) {
    throw std::invalid_argument("every instance needs a label");
  }
  if (!std::is_sorted(data.classes.begin(), data.classes.end())) {
    throw std::invalid_argument("dataset classes must be sorted");
  }
  for (int label : data.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= data.classes.size()) {
      throw std::invalid_argument("instance label outside class list");
    }
  }
}

}  // namespace

DecisionTree DecisionTree::fit(const Dataset& data, const TreeParams& params) {
  check_dataset(data);
  const PresortedIndex index(data);
  return fit(data, index, {}, params);
}

DecisionTree DecisionTree::fit(const Dataset& data, const PresortedIndex& index,
                               std::span<const std::uint8_t> include,
                               const TreeParams& params) {
  params.validate();
  check_dataset(data);
  if (!include.empty() && include.size() != data.rows()) {
    throw std::invalid_argument("include mask size mismatch");
  }
  Builder builder(data, index, include, params);
  if (builder.size() == 0) {
    throw std::invalid_argument("cannot fit a tree on zero instances");
  }
  DecisionTree tree;
  tree.nodes_ = builder.build();
  tree.classes_ = data.classes;
  tree.width_ = data.width;
  tree.params_ = params;
  return tree;
}

int DecisionTree::predict_index(std::span<const double> features) const {
  if (features.size() != width_) {
    throw std::invalid_argument("feature dimension mismatch: tree expects " +
                                std::to_string(width_) + ", got " +
                                std::to_string(features.size()));
  }
  if (nodes_.empty()) throw std::logic_error("predict on an unfitted tree");
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    node = &nodes_[features[node->feature] <= node->threshold ? node->left
                                                              : node->right];
  }
  return node->label;
}

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::string DecisionTree::to_json() const {
  nlohmann::ordered_json doc;
  doc["width"] = width_;
  doc["classes"] = classes_;
  doc["params"] = {{"max_depth", params_.max_depth},
                   {"min_samples_split", params_.min_samples_split},
                   {"min_impurity_decrease", params_.min_impurity_decrease},
                   {"seed", params_.seed}};
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    nlohmann::ordered_json j;
    j["id"] = i;
    j["depth"] = n.depth;
    if (n.is_leaf()) {
      j["leaf"] = true;
      j["label"] = classes_.at(n.label);
      j["histogram"] = n.histogram;
    } else {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
      j["histogram"] = n.histogram;
    }
    nodes.push_back(std::move(j));
  }
  return doc.dump(1) + "\n";
}

DecisionTree DecisionTree::from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  DecisionTree tree;
  tree.width_ = doc.at("width").get<std::size_t>();
  tree.classes_ = doc.at("classes").get<std::vector<std::string>>();
  const auto& p = doc.at("params");
  tree.params_.max_depth = p.at("max_depth").get<int>();
  tree.params_.min_samples_split = p.at("min_samples_split").get<int>();
  tree.params_.min_impurity_decrease = p.at("min_impurity_decrease").get<double>();
  tree.params_.seed = p.at("seed").get<std::uint64_t>();
  for (const auto& j : doc.at("nodes")) {
    TreeNode n;
    n.depth = j.at("depth").get<int>();
    n.histogram = j.at("histogram").get<std::vector<std::int64_t>>();
    n.impurity = gini(n.histogram);
    if (j.value("leaf", false)) {
      const auto label = j.at("label").get<std::string>();
      const auto it =
          std::find(tree.classes_.begin(), tree.classes_.end(), label);
      if (it == tree.classes_.end()) {
        throw std::invalid_argument("leaf label not in class list");
      }
      n.label = static_cast<int>(it - tree.classes_.begin());
    } else {
      n.feature = j.at("feature").get<int>();
      n.threshold = j.at("threshold").get<double>();
      n.left = j.at("left").get<int>();
      n.right = j.at("right").get<int>();
      n.label = static_cast<int>(
          std::max_element(n.histogram.begin(), n.histogram.end()) -
          n.histogram.begin());
    }
    tree.nodes_.push_back(std::move(n));
  }
  return tree;
}

}  // namespace iotledger
