// Copyright 2026 The odmia Authors
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

// Second-order gradient tree boosting with logistic loss.
//
// The ensemble starts from the log-odds of the training prior. Each round
// computes g = p - y and h = p (1 - p) at the current margins and grows one
// regression tree level by level with exact greedy splits:
//
//   gain = 1/2 [G_L^2 / (H_L + lambda) + G_R^2 / (H_R + lambda)
//               - G^2 / (H + lambda)]
//
// A split is accepted when gain > 0 and both children have hessian sum
// >= min_child_weight. Candidates are midpoints between consecutive
// distinct feature values and a sample goes left when x[f] < threshold.
// Ties keep the lowest feature index, then the lowest threshold. Leaf
// values are -G / (H + lambda) scaled by the learning rate.

#ifndef ODMIA_LEARNERS_GBT_H_
#define ODMIA_LEARNERS_GBT_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/learners/common.h"

namespace odmia {

struct GbtSpec {
  int max_depth = 5;
  int n_estimators = 50;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double min_child_weight = 1.0;

  friend bool operator==(const GbtSpec&, const GbtSpec&) = default;
};

absl::Status ValidateGbtSpec(const GbtSpec& spec);

struct TreeNode {
  // Leaf when feature < 0.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root.

  double Evaluate(std::span<const double> x) const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbtModel {
  GbtSpec spec;
  int num_features = 0;
  double base_margin = 0.0;
  std::vector<RegressionTree> trees;

  double Margin(std::span<const double> x) const;
  Probabilities Predict(std::span<const double> x) const;

  friend bool operator==(const GbtModel&, const GbtModel&) = default;
};

struct GbtTrainResult {
  GbtModel model;
  // Mean logistic loss on the training set: entry 0 is the base score,
  // entry r the loss after r rounds.
  std::vector<double> loss_history;
};

absl::StatusOr<GbtTrainResult> TrainGbt(const GbtSpec& spec,
                                        std::span<const LabeledVector> data);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_GBT_H_
