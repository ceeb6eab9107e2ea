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

#ifndef ODMIA_DP_TRAIN_H_
#define ODMIA_DP_TRAIN_H_

#include <span>
#include <variant>

#include "absl/status/statusor.h"
#include "odmia/learners/classifier.h"
#include "odmia/privacy.h"

namespace odmia {

using TrainingData = std::variant<std::span<const LabeledCanvas>,
                                  std::span<const LabeledVector>>;

struct DpTrainResult {
  Classifier model;
  // Completed passes over the data and the closed-form loss at that k.
  double epochs = 0.0;
  double epsilon = kInfiniteEpsilon;
};

// Trains a CNN (on canvases) or logistic model (on feature vectors) with
// per-example clipping and Gaussian noise, using the same initialisation,
// batching and update rule as the non-private trainers. privacy.epochs is
// ignored: k is the number of epochs actually completed. With sigma = 0
// and clip_bound = +infinity the result is bit-identical to TrainCnn /
// TrainLogistic under the same TrainConfig. GBT specs are rejected with
// kUnimplemented.
//
// The CNN input scale is computed from the training canvases as in
// TrainCnn and is not itself privatised.
absl::StatusOr<DpTrainResult> DpTrain(const LearnerSpec& spec,
                                      TrainingData data,
                                      const TrainConfig& config,
                                      const PrivacyParams& privacy);

}  // namespace odmia

#endif  // ODMIA_DP_TRAIN_H_
