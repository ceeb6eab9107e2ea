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

// Binary logistic regression, p_in = sigmoid(w . x + b). Used as the
// differentiable stand-in target model in defense experiments. Parameters
// are [w_0 .. w_{d-1}, b], zero-initialised. Dropout, when enabled, is
// inverted dropout on the input features.

#ifndef ODMIA_LEARNERS_LOGISTIC_H_
#define ODMIA_LEARNERS_LOGISTIC_H_

#include <span>

#include "absl/status/status.h"
#include "odmia/learners/common.h"
#include "odmia/rng.h"

namespace odmia {

struct LogisticSpec {
  int input_dim = 1;
  double dropout_rate = 0.0;

  friend bool operator==(const LogisticSpec&, const LogisticSpec&) = default;
};

absl::Status ValidateLogisticSpec(const LogisticSpec& spec);

inline size_t LogisticParameterCount(const LogisticSpec& spec) {
  return static_cast<size_t>(spec.input_dim) + 1;
}

Probabilities LogisticPredict(std::span<const double> params,
                              std::span<const double> x);

double LogisticLossAndGradient(const LogisticSpec& spec,
                               std::span<const double> params,
                               std::span<const double> x,
                               MembershipLabel label, Rng* dropout,
                               std::span<double> grad);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_LOGISTIC_H_
