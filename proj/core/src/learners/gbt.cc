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

#include "odmia/learners/gbt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace odmia {
namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticLoss(double margin, double y) {
  // y * log(1 + e^-m) + (1 - y) * log(1 + e^m)
  const double z = y > 0.5 ? -margin : margin;
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const GbtSpec& spec, size_t n, size_t d,
              const std::vector<double>& x,
              const std::vector<std::vector<uint32_t>>& sorted)
      : spec_(spec), n_(n), d_(d), x_(x), sorted_(sorted) {}

  RegressionTree Build(const std::vector<double>& g,
                       const std::vector<double>& h) {
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n_, 0);
    std::vector<NodeStats> stats(1);
    for (size_t i = 0; i < n_; ++i) {
      stats[0].g += g[i];
      stats[0].h += h[i];
    }
    std::vector<int> frontier = {0};

    for (int depth = 0; depth < spec_.max_depth && !frontier.empty();
         ++depth) {
      // slot_of[node] is the node's position in `frontier`, or -1.
      std::vector<int> slot_of(tree.nodes.size(), -1);
      for (size_t s = 0; s < frontier.size(); ++s) slot_of[frontier[s]] = s;
      std::vector<Split> best(frontier.size());

      std::vector<double> gl(frontier.size()), hl(frontier.size());
      std::vector<double> last(frontier.size());
      std::vector<char> seen(frontier.size());
      for (size_t f = 0; f < d_; ++f) {
        std::fill(gl.begin(), gl.end(), 0.0);
        std::fill(hl.begin(), hl.end(), 0.0);
        std::fill(seen.begin(), seen.end(), 0);
        for (uint32_t i : sorted_[f]) {
          const int slot = slot_of[node_of[i]];
          if (slot < 0) continue;
          const double v = x_[i * d_ + f];
          if (seen[slot] && v != last[slot]) {
            Consider(stats[frontier[slot]], gl[slot], hl[slot], f, last[slot],
                     v, best[slot]);
          }
          gl[slot] += g[i];
          hl[slot] += h[i];
          last[slot] = v;
          seen[slot] = 1;
        }
      }

      std::vector<int> next;
      for (size_t s = 0; s < frontier.size(); ++s) {
        if (best[s].feature < 0) continue;
        const int id = frontier[s];
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stats.resize(tree.nodes.size());
        TreeNode& node = tree.nodes[id];
        node.feature = best[s].feature;
        node.threshold = best[s].threshold;
        node.left = left;
        node.right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      for (size_t i = 0; i < n_; ++i) {
        const TreeNode& node = tree.nodes[node_of[i]];
        if (node.feature < 0 || node.left < 0) continue;
        if (slot_of[node_of[i]] < 0) continue;
        node_of[i] = x_[i * d_ + node.feature] < node.threshold ? node.left
                                                                : node.right;
        stats[node_of[i]].g += g[i];
        stats[node_of[i]].h += h[i];
      }
      frontier = std::move(next);
    }

    for (size_t id = 0; id < tree.nodes.size(); ++id) {
      TreeNode& node = tree.nodes[id];
      if (node.feature >= 0) continue;
      node.value =
          -stats[id].g / (stats[id].h + spec_.lambda) * spec_.learning_rate;
    }
    return tree;
  }

 private:
  void Consider(const NodeStats& total, double g_left, double h_left,
                size_t feature, double lo, double hi, Split& best) const {
    const double g_right = total.g - g_left;
    const double h_right = total.h - h_left;
    if (h_left < spec_.min_child_weight || h_right < spec_.min_child_weight) {
      return;
    }
    const double lambda = spec_.lambda;
    const double gain =
        0.5 * (g_left * g_left / (h_left + lambda) +
               g_right * g_right / (h_right + lambda) -
               total.g * total.g / (total.h + lambda));
    if (gain > best.gain) {
      double threshold = lo + 0.5 * (hi - lo);
      if (!(threshold > lo)) threshold = hi;
      best = {gain, static_cast<int>(feature), threshold};
    }
  }

  const GbtSpec& spec_;
  size_t n_, d_;
  const std::vector<double>& x_;
  const std::vector<std::vector<uint32_t>>& sorted_;
};

}  // namespace

absl::Status ValidateGbtSpec(const GbtSpec& spec) {
  if (spec.max_depth < 1) {
    return absl::InvalidArgumentError("max_depth must be >= 1");
  }
  if (spec.n_estimators < 1) {
    return absl::InvalidArgumentError("n_estimators must be >= 1");
  }
  if (!(spec.learning_rate > 0.0) || !std::isfinite(spec.learning_rate)) {
    return absl::InvalidArgumentError("learning_rate must be positive");
  }
  if (!(spec.lambda >= 0.0) || !(spec.min_child_weight >= 0.0)) {
    return absl::InvalidArgumentError(
        "lambda and min_child_weight must be >= 0");
  }
  return absl::OkStatus();
}

double RegressionTree::Evaluate(std::span<const double> x) const {
  int id = 0;
  while (nodes[id].feature >= 0) {
    const TreeNode& node = nodes[id];
    id = x[node.feature] < node.threshold ? node.left : node.right;
  }
  return nodes[id].value;
}

double GbtModel::Margin(std::span<const double> x) const {
  double m = base_margin;
  for (const RegressionTree& tree : trees) m += tree.Evaluate(x);
  return m;
}

Probabilities GbtModel::Predict(std::span<const double> x) const {
  const double p_in = Sigmoid(Margin(x));
  return {p_in, 1.0 - p_in};
}

absl::StatusOr<GbtTrainResult> TrainGbt(const GbtSpec& spec,
                                        std::span<const LabeledVector> data) {
  if (absl::Status s = ValidateGbtSpec(spec); !s.ok()) return s;
  if (data.empty()) return absl::InvalidArgumentError("no training data");
  if (absl::Status s = RequireBothClasses(data); !s.ok()) return s;
  const size_t n = data.size();
  const size_t d = data[0].features.values.size();
  if (d == 0) return absl::InvalidArgumentError("feature vectors are empty");
  for (size_t i = 0; i < n; ++i) {
    if (data[i].features.values.size() != d) {
      return absl::InvalidArgumentError(absl::StrCat(
          "shape mismatch: example ", i, " has ",
          data[i].features.values.size(), " features, expected ", d));
    }
  }

  std::vector<double> x(n * d);
  std::vector<double> y(n);
  double positives = 0.0;
  for (size_t i = 0; i < n; ++i) {
    std::copy(data[i].features.values.begin(), data[i].features.values.end(),
              x.begin() + i * d);
    y[i] = data[i].label == MembershipLabel::kIn ? 1.0 : 0.0;
    positives += y[i];
  }
  std::vector<std::vector<uint32_t>> sorted(d, std::vector<uint32_t>(n));
  for (size_t f = 0; f < d; ++f) {
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    std::stable_sort(sorted[f].begin(), sorted[f].end(),
                     [&](uint32_t a, uint32_t b) {
                       return x[a * d + f] < x[b * d + f];
                     });
  }

  GbtTrainResult result;
  GbtModel& model = result.model;
  model.spec = spec;
  model.num_features = static_cast<int>(d);
  const double prior = positives / static_cast<double>(n);
  model.base_margin = std::log(prior / (1.0 - prior));

  std::vector<double> margin(n, model.base_margin);
  auto mean_loss = [&] {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += LogisticLoss(margin[i], y[i]);
    return total / static_cast<double>(n);
  };
  result.loss_history.push_back(mean_loss());

  TreeBuilder builder(spec, n, d, x, sorted);
  std::vector<double> g(n), h(n);
  for (int round = 0; round < spec.n_estimators; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      g[i] = p - y[i];
      h[i] = p * (1.0 - p);
    }
    RegressionTree tree = builder.Build(g, h);
    for (size_t i = 0; i < n; ++i) {
      margin[i] += tree.Evaluate(std::span<const double>(x).subspan(i * d, d));
    }
    model.trees.push_back(std::move(tree));
    result.loss_history.push_back(mean_loss());
  }
  return result;
}

}  // namespace odmia
