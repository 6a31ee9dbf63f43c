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

#ifndef IOTLEDGER_CART_HPP_
#define IOTLEDGER_CART_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace iotledger {

struct TreeParams {
  int max_depth = 12;
  int min_samples_split = 4;
  double min_impurity_decrease = 0.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

// Row-major feature matrix with integer labels indexing `classes`. `classes`
// must be sorted so that index order equals lexicographic order.
struct Dataset {
  std::size_t width = 0;
  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::string> classes;

  std::size_t rows() const { return width == 0 ? 0 : values.size() / width; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * width, width};
  }
};

// Per-feature row orderings of a whole Dataset, reusable across many fits on
// subsets of its rows.
class PresortedIndex {
 public:
  explicit PresortedIndex(const Dataset& data);
  const std::vector<std::uint32_t>& order(std::size_t feature) const {
    return order_[feature];
  }

 private:
  std::vector<std::vector<std::uint32_t>> order_;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;  // majority class, ties to the lowest index
  std::vector<std::int64_t> histogram;
  double impurity = 0.0;  // Gini impurity of the training rows at this node
  int depth = 0;

  bool is_leaf() const { return feature < 0; }
  std::int64_t samples() const;
  bool operator==(const TreeNode&) const = default;
};

// CART classifier with Gini splits. Rows go left iff value <= threshold.
class DecisionTree {
 public:
  DecisionTree() = default;

  // Fits on every row. Throws std::invalid_argument for an empty dataset or
  // labels outside `classes`.
  static DecisionTree fit(const Dataset& data, const TreeParams& params);
  // Fits on the rows with include[row] != 0.
  static DecisionTree fit(const Dataset& data, const PresortedIndex& index,
                          std::span<const std::uint8_t> include,
                          const TreeParams& params);

  // Throws std::invalid_argument when features.size() != width().
  int predict_index(std::span<const double> features) const;
  const std::string& predict(std::span<const double> features) const {
    return classes_.at(predict_index(features));
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t width() const { return width_; }
  const TreeParams& params() const { return params_; }
  int depth() const;
  std::size_t leaf_count() const;

  // {"width", "classes", "params", "nodes": [...]}; leaves carry label and
  // histogram, internal nodes feature, threshold and children.
  std::string to_json() const;
  static DecisionTree from_json(const std::string& text);

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<std::string> classes_;
  std::size_t width_ = 0;
  TreeParams params_;
};

double gini(std::span<const std::int64_t> counts);

}  // namespace iotledger

#endif  // IOTLEDGER_CART_HPP_
