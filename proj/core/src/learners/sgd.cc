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

#include "odmia/learners/sgd.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odmia/privacy.h"

namespace odmia {

absl::Status ValidateTrainConfig(const TrainConfig& config) {
  if (!std::isfinite(config.learning_rate) || config.learning_rate < 0.0) {
    return absl::InvalidArgumentError("learning rate must be finite and >= 0");
  }
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
    return absl::InvalidArgumentError("momentum must be in [0, 1)");
  }
  if (!std::isfinite(config.weight_decay) || config.weight_decay < 0.0) {
    return absl::InvalidArgumentError("weight decay must be finite and >= 0");
  }
  if (config.batch_size <= 0) {
    return absl::InvalidArgumentError("batch size must be positive");
  }
  if (config.epochs <= 0) {
    return absl::InvalidArgumentError("epochs must be positive");
  }
  return absl::OkStatus();
}

double SoftmaxCrossEntropy(const double logits[2], int target,
                           Probabilities* probs, double dlogits[2]) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  const double z = e0 + e1;
  const double p0 = e0 / z;
  const double p1 = 1.0 - p0;
  if (probs != nullptr) *probs = {p0, p1};
  if (dlogits != nullptr) {
    dlogits[0] = p0 - (target == 0 ? 1.0 : 0.0);
    dlogits[1] = p1 - (target == 1 ? 1.0 : 0.0);
  }
  return m + std::log(z) - logits[target];
}

SgdResult RunSgd(std::vector<double> params, size_t num_examples,
                 const ExampleGradientFn& gradient, const TrainConfig& config,
                 const std::optional<PrivateAggregation>& aggregation) {
  const Rng root(config.seed);
  Rng shuffle_rng = root.Fork("shuffle");
  Rng dropout_rng = root.Fork("dropout");
  Rng noise_rng = root.Fork("noise");

  const size_t dim = params.size();
  std::vector<double> velocity(dim, 0.0);
  std::vector<double> sum(dim);
  std::vector<double> example_grad(dim);
  std::vector<size_t> order(num_examples);
  std::iota(order.begin(), order.end(), size_t{0});

  SgdResult result;
  const size_t batch_size = static_cast<size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span<size_t>(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < num_examples; start += batch_size) {
      const size_t end = std::min(num_examples, start + batch_size);
      std::fill(sum.begin(), sum.end(), 0.0);
      for (size_t k = start; k < end; ++k) {
        std::fill(example_grad.begin(), example_grad.end(), 0.0);
        epoch_loss += gradient(params, order[k], &dropout_rng, example_grad);
        if (aggregation) {
          ClipGradientInPlace(example_grad, aggregation->clip_bound);
        }
        for (size_t j = 0; j < dim; ++j) sum[j] += example_grad[j];
      }
      if (aggregation) {
        AddGaussianNoise(sum, aggregation->noise_scale,
                         aggregation->clip_bound, noise_rng);
      }
      const double batch = static_cast<double>(end - start);
      for (size_t j = 0; j < dim; ++j) {
        double g = sum[j] / batch;
        if (config.weight_decay != 0.0) g += config.weight_decay * params[j];
        velocity[j] = config.momentum * velocity[j] + g;
        params[j] -= config.learning_rate * velocity[j];
      }
    }
    result.epoch_loss.push_back(
        num_examples == 0 ? 0.0 : epoch_loss / static_cast<double>(num_examples));
    ++result.epochs_completed;
  }
  result.params = std::move(params);
  return result;
}

}  // namespace odmia
