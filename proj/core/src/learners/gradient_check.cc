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

#include "odmia/learners/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odmia/rng.h"

namespace odmia {

absl::StatusOr<GradientCheckResult> GradientCheck(const CnnModel& model,
                                                  const LabeledCanvas& sample,
                                                  double epsilon,
                                                  uint64_t seed,
                                                  int num_params) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    return absl::InvalidArgumentError("epsilon must be in [1e-7, 1e-3]");
  }
  absl::StatusOr<CnnNetwork> network = CnnNetwork::Create(model.spec);
  if (!network.ok()) return network.status();
  if (model.params.size() != network->parameter_count()) {
    return absl::InvalidArgumentError("parameter vector has wrong length");
  }
  if (sample.canvas.size() != model.spec.input_size) {
    return absl::InvalidArgumentError("shape mismatch: canvas size");
  }

  std::vector<double> input(sample.canvas.pixels().begin(),
                            sample.canvas.pixels().end());
  for (double& v : input) v /= model.input_scale;

  const Rng root(seed);
  const Rng mask_rng = root.Fork("dropout-mask");
  const bool has_dropout = model.spec.dropout_rate > 0.0;
  auto loss_at = [&](std::span<const double> params, std::span<double> grad,
                     uint64_t* pattern) {
    Rng masks = mask_rng;
    return network->LossAndGradient(params, input, sample.label,
                                    has_dropout ? &masks : nullptr, grad,
                                    pattern);
  };

  std::vector<double> params = model.params;
  std::vector<double> analytic(params.size(), 0.0);
  uint64_t base_pattern = 0;
  loss_at(params, analytic, &base_pattern);

  std::vector<size_t> order(params.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng pick = root.Fork("pick");
  pick.Shuffle(std::span<size_t>(order));

  GradientCheckResult result;
  const size_t wanted = std::min(order.size(), static_cast<size_t>(num_params));
  for (size_t idx : order) {
    if (static_cast<size_t>(result.checked) >= wanted) break;
    const double original = params[idx];
    uint64_t plus_pattern = 0, minus_pattern = 0;
    params[idx] = original + epsilon;
    const double plus = loss_at(params, {}, &plus_pattern);
    params[idx] = original - epsilon;
    const double minus = loss_at(params, {}, &minus_pattern);
    params[idx] = original;
    if (plus_pattern != base_pattern || minus_pattern != base_pattern) {
      ++result.skipped;
      continue;
    }
    const double numeric = (plus - minus) / (2.0 * epsilon);
    const double denom =
        std::max({std::abs(analytic[idx]), std::abs(numeric), 1e-6});
    result.max_relative_error = std::max(
        result.max_relative_error, std::abs(analytic[idx] - numeric) / denom);
    ++result.checked;
  }
  return result;
}

}  // namespace odmia
