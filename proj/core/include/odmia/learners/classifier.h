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

// Trained attack / surrogate models behind one type, plus their training
// entry points.

#ifndef ODMIA_LEARNERS_CLASSIFIER_H_
#define ODMIA_LEARNERS_CLASSIFIER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "odmia/learners/cnn.h"
#include "odmia/learners/common.h"
#include "odmia/learners/gbt.h"
#include "odmia/learners/logistic.h"
#include "odmia/learners/sgd.h"

namespace odmia {

struct CnnModel {
  CnnSpec spec;
  // Canvas pixels are divided by this before the first convolution. It is
  // the 99th percentile of the non-zero training pixels (1 when there are
  // none).
  double input_scale = 1.0;
  std::vector<double> params;

  friend bool operator==(const CnnModel&, const CnnModel&) = default;
};

struct LogisticModel {
  LogisticSpec spec;
  std::vector<double> params;

  friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

struct TrainingProvenance {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  std::vector<double> loss_history;
  // Set for models trained with DP-SGD; may be kInfiniteEpsilon.
  std::optional<double> epsilon;
  double epochs = 0.0;

  friend bool operator==(const TrainingProvenance&,
                         const TrainingProvenance&) = default;
};

using LearnerSpec = std::variant<CnnSpec, GbtSpec, LogisticSpec>;

struct Classifier {
  std::variant<CnnModel, GbtModel, LogisticModel> model;
  TrainingProvenance provenance;

  friend bool operator==(const Classifier&, const Classifier&) = default;
};

std::string_view FamilyName(const Classifier& classifier);

// 99th percentile (nearest-rank) of the non-zero pixels of `canvases`.
double CanvasInputScale(std::span<const LabeledCanvas> canvases);

absl::StatusOr<Classifier> TrainCnn(const CnnSpec& spec,
                                    std::span<const LabeledCanvas> data,
                                    const TrainConfig& config);

absl::StatusOr<Classifier> TrainLogistic(const LogisticSpec& spec,
                                         std::span<const LabeledVector> data,
                                         const TrainConfig& config);

absl::StatusOr<Classifier> TrainGbtClassifier(
    const GbtSpec& spec, std::span<const LabeledVector> data);

// CNN models take canvases; GBT and logistic models take feature vectors.
// Any other pairing, or a shape mismatch, is an InvalidArgument error.
absl::StatusOr<Probabilities> Predict(const Classifier& model,
                                      const Canvas& canvas);
absl::StatusOr<Probabilities> Predict(const Classifier& model,
                                      const FeatureVector& features);

// Per-example loss/gradient closures used by RunSgd. The data spans must
// outlive the returned function.
ExampleGradientFn MakeCnnGradientFn(const CnnNetwork& network,
                                    double input_scale,
                                    std::span<const LabeledCanvas> data);
ExampleGradientFn MakeLogisticGradientFn(const LogisticSpec& spec,
                                         std::span<const LabeledVector> data);

// Stable FNV-1a hash of a canonical text rendering of the arguments.
uint64_t HashTrainingConfig(const LearnerSpec& spec,
                            const TrainConfig& config);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_CLASSIFIER_H_
