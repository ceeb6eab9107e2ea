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

// Mini-batch SGD shared by every differentiable learner, with an optional
// differentially private aggregation step.
//
// Each epoch reshuffles the example indices (random reshuffling) and walks
// them in consecutive batches; the last batch may be short. Per batch:
//
//   sum   = sum_i clip(g_i)            clip only when private
//   sum  += N(0, sigma^2 C^2 I)        only when private and sigma > 0
//   g     = sum / B  (+ weight_decay * theta)
//   v     = momentum * v + g
//   theta = theta - learning_rate * v
//
// With momentum = weight_decay = 0 this is exactly the private step of
// DpSgdStep(). Shuffling, dropout and noise draw from separate forks of
// Rng(config.seed) ("shuffle", "dropout", "noise"), so turning noise on or
// off never changes batch order or dropout masks.

#ifndef ODMIA_LEARNERS_SGD_H_
#define ODMIA_LEARNERS_SGD_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "odmia/learners/common.h"
#include "odmia/rng.h"

namespace odmia {

// Loss of example `index` at `params`; writes its gradient into `grad`
// (zeroed by the caller). `dropout` is null when dropout must be off.
using ExampleGradientFn = std::function<double(
    std::span<const double> params, size_t index, Rng* dropout,
    std::span<double> grad)>;

struct PrivateAggregation {
  double noise_scale = 0.0;  // sigma
  double clip_bound = 1.0;   // C; +infinity disables clipping
};

struct SgdResult {
  std::vector<double> params;
  std::vector<double> epoch_loss;  // Mean training loss seen in each epoch.
  int epochs_completed = 0;
};

SgdResult RunSgd(std::vector<double> params, size_t num_examples,
                 const ExampleGradientFn& gradient, const TrainConfig& config,
                 const std::optional<PrivateAggregation>& aggregation);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_SGD_H_
