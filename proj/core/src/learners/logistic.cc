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

#include "odmia/learners/logistic.h"

#include <cmath>

namespace odmia {
namespace {

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

absl::Status ValidateLogisticSpec(const LogisticSpec& spec) {
  if (spec.input_dim <= 0) {
    return absl::InvalidArgumentError("input_dim must be positive");
  }
  if (!(spec.dropout_rate >= 0.0 && spec.dropout_rate < 1.0)) {
    return absl::InvalidArgumentError("dropout_rate must be in [0, 1)");
  }
  return absl::OkStatus();
}

Probabilities LogisticPredict(std::span<const double> params,
                              std::span<const double> x) {
  const size_t d = x.size();
  double z = params[d];
  for (size_t i = 0; i < d; ++i) z += params[i] * x[i];
  const double p_in = Sigmoid(z);
  return {p_in, 1.0 - p_in};
}

double LogisticLossAndGradient(const LogisticSpec& spec,
                               std::span<const double> params,
                               std::span<const double> x,
                               MembershipLabel label, Rng* dropout,
                               std::span<double> grad) {
  const size_t d = x.size();
  const bool drop = dropout != nullptr && spec.dropout_rate > 0.0;
  const double keep_scale = drop ? 1.0 / (1.0 - spec.dropout_rate) : 1.0;
  std::vector<double> input(x.begin(), x.end());
  if (drop) {
    for (double& v : input) {
      v = dropout->Uniform() >= spec.dropout_rate ? v * keep_scale : 0.0;
    }
  }
  double z = params[d];
  for (size_t i = 0; i < d; ++i) z += params[i] * input[i];
  const bool is_in = label == MembershipLabel::kIn;
  const double loss = is_in ? Softplus(-z) : Softplus(z);
  if (!grad.empty()) {
    const double dz = Sigmoid(z) - (is_in ? 1.0 : 0.0);
    for (size_t i = 0; i < d; ++i) grad[i] += dz * input[i];
    grad[d] += dz;
  }
  return loss;
}

}  // namespace odmia
