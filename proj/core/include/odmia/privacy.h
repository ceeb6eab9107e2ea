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

// DP-SGD primitives and the closed-form privacy-loss accountant.
//
// The accountant assumes batches drawn by random reshuffling. For noise
// scale sigma and k passes over the data,
//
//   rho     = k / (2 sigma^2)
//   epsilon = rho + sqrt(rho * ln(1 / delta))
//
// gives an (epsilon, delta)-DP guarantee. sigma = 0 means no noise and the
// loss is reported as kInfiniteEpsilon.

#ifndef ODMIA_PRIVACY_H_
#define ODMIA_PRIVACY_H_

#include <limits>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/rng.h"

namespace odmia {

inline constexpr double kInfiniteEpsilon =
    std::numeric_limits<double>::infinity();
inline constexpr double kDefaultDelta = 1e-5;

struct PrivacyParams {
  double noise_scale = 1.0;  // sigma >= 0
  double clip_bound = 1.0;   // C > 0, may be +infinity
  double delta = kDefaultDelta;
  double epochs = 0.0;       // k >= 0, fractional passes allowed

  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

absl::Status ValidatePrivacyParams(const PrivacyParams& params);

// g / max(1, ||g||_2 / C).
std::vector<double> ClipGradient(std::span<const double> gradient,
                                 double clip_bound);
void ClipGradientInPlace(std::span<double> gradient, double clip_bound);

// Adds N(0, (sigma C)^2) independently to each coordinate, drawing from
// `rng` in coordinate order. No draws are made when sigma is 0.
void AddGaussianNoise(std::span<double> sum, double noise_scale,
                      double clip_bound, Rng& rng);

// One step of DP-SGD:
//   theta' = theta - lr * (sum_i clip(g_i) + N(0, sigma^2 C^2 I)) / B
absl::StatusOr<std::vector<double>> DpSgdStep(
    std::span<const double> params,
    std::span<const std::vector<double>> per_example_gradients,
    double clip_bound, double noise_scale, double learning_rate, Rng& rng);

// rho = k / (2 sigma^2); +infinity when sigma is 0.
double PrivacyRho(double noise_scale, double epochs);

// Closed-form epsilon; kInfiniteEpsilon when sigma is 0. The caller is
// expected to have validated `params`.
double PrivacyLoss(const PrivacyParams& params);

}  // namespace odmia

#endif  // ODMIA_PRIVACY_H_
