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

#ifndef ODMIA_LEARNERS_COMMON_H_
#define ODMIA_LEARNERS_COMMON_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "odmia/canvas.h"
#include "odmia/features.h"
#include "odmia/types.h"

namespace odmia {

// Class index 0 is kIn, 1 is kOut throughout the learners.
inline int ClassIndex(MembershipLabel label) {
  return label == MembershipLabel::kIn ? 0 : 1;
}

struct Probabilities {
  double in = 0.5;
  double out = 0.5;
};

// argmax with ties resolved towards kOut.
inline MembershipLabel Decide(const Probabilities& p) {
  return p.in > p.out ? MembershipLabel::kIn : MembershipLabel::kOut;
}

struct LabeledCanvas {
  Canvas canvas;
  MembershipLabel label = MembershipLabel::kOut;
};

struct LabeledVector {
  FeatureVector features;
  MembershipLabel label = MembershipLabel::kOut;
};

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  int batch_size = 16;
  int epochs = 10;
  uint64_t seed = 0;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

absl::Status ValidateTrainConfig(const TrainConfig& config);

// Rejects data sets that do not contain both labels.
template <typename Labeled>
absl::Status RequireBothClasses(std::span<const Labeled> data) {
  bool has_in = false, has_out = false;
  for (const Labeled& d : data) {
    (d.label == MembershipLabel::kIn ? has_in : has_out) = true;
  }
  if (!has_in || !has_out) {
    return absl::InvalidArgumentError(
        "training data must contain both in and out examples");
  }
  return absl::OkStatus();
}

// Numerically stable two-class softmax followed by cross-entropy against
// `target`. Writes dLoss/dlogit to `dlogits` when non-null.
double SoftmaxCrossEntropy(const double logits[2], int target,
                           Probabilities* probs, double dlogits[2]);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_COMMON_H_
