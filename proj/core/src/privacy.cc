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

#include "odmia/privacy.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace odmia {

absl::Status ValidatePrivacyParams(const PrivacyParams& params) {
  if (!(params.noise_scale >= 0.0) || std::isinf(params.noise_scale)) {
    return absl::InvalidArgumentError("noise scale must be finite and >= 0");
  }
  if (!(params.clip_bound > 0.0)) {
    return absl::InvalidArgumentError("clip bound must be > 0");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  if (!(params.epochs >= 0.0) || std::isinf(params.epochs)) {
    return absl::InvalidArgumentError("epochs must be finite and >= 0");
  }
  return absl::OkStatus();
}

void ClipGradientInPlace(std::span<double> gradient, double clip_bound) {
  double sq = 0.0;
  for (double g : gradient) sq += g * g;
  const double factor = std::max(1.0, std::sqrt(sq) / clip_bound);
  if (factor == 1.0) return;
  for (double& g : gradient) g /= factor;
}

std::vector<double> ClipGradient(std::span<const double> gradient,
                                 double clip_bound) {
  std::vector<double> out(gradient.begin(), gradient.end());
  ClipGradientInPlace(out, clip_bound);
  return out;
}

void AddGaussianNoise(std::span<double> sum, double noise_scale,
                      double clip_bound, Rng& rng) {
  if (noise_scale == 0.0) return;
  const double stddev = noise_scale * clip_bound;
  for (double& s : sum) s += stddev * rng.Gaussian();
}

absl::StatusOr<std::vector<double>> DpSgdStep(
    std::span<const double> params,
    std::span<const std::vector<double>> per_example_gradients,
    double clip_bound, double noise_scale, double learning_rate, Rng& rng) {
  if (per_example_gradients.empty()) {
    return absl::InvalidArgumentError("DP-SGD step needs a non-empty batch");
  }
  std::vector<double> sum(params.size(), 0.0);
  std::vector<double> clipped;
  for (const std::vector<double>& g : per_example_gradients) {
    if (g.size() != params.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "gradient length ", g.size(), " != parameter count ", params.size()));
    }
    clipped.assign(g.begin(), g.end());
    ClipGradientInPlace(clipped, clip_bound);
    for (size_t j = 0; j < sum.size(); ++j) sum[j] += clipped[j];
  }
  AddGaussianNoise(sum, noise_scale, clip_bound, rng);
  const double batch = static_cast<double>(per_example_gradients.size());
  std::vector<double> out(params.begin(), params.end());
  for (size_t j = 0; j < out.size(); ++j) {
    out[j] -= learning_rate * (sum[j] / batch);
  }
  return out;
}

double PrivacyRho(double noise_scale, double epochs) {
  if (noise_scale == 0.0) return kInfiniteEpsilon;
  return epochs / (2.0 * noise_scale * noise_scale);
}

double PrivacyLoss(const PrivacyParams& params) {
  if (params.noise_scale == 0.0) return kInfiniteEpsilon;
  const double rho = PrivacyRho(params.noise_scale, params.epochs);
  return rho + std::sqrt(rho * std::log(1.0 / params.delta));
}

}  // namespace odmia
