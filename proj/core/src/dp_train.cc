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

#include "odmia/dp_train.h"

#include "odmia/learners/sgd.h"
#include "odmia/rng.h"

namespace odmia {
namespace {

DpTrainResult Finish(Classifier model, const SgdResult& trained,
                     const PrivacyParams& privacy) {
  PrivacyParams realized = privacy;
  realized.epochs = trained.epochs_completed;
  DpTrainResult out;
  out.epochs = realized.epochs;
  out.epsilon = PrivacyLoss(realized);
  model.provenance.epochs = out.epochs;
  model.provenance.epsilon = out.epsilon;
  model.provenance.loss_history = trained.epoch_loss;
  out.model = std::move(model);
  return out;
}

}  // namespace

absl::StatusOr<DpTrainResult> DpTrain(const LearnerSpec& spec,
                                      TrainingData data,
                                      const TrainConfig& config,
                                      const PrivacyParams& privacy) {
  PrivacyParams check = privacy;
  check.epochs = 0.0;
  if (absl::Status s = ValidatePrivacyParams(check); !s.ok()) return s;
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  const PrivateAggregation aggregation{privacy.noise_scale,
                                       privacy.clip_bound};

  if (std::holds_alternative<GbtSpec>(spec)) {
    return absl::UnimplementedError(
        "unsupported learner: gradient tree boosting has no per-example "
        "gradients for DP-SGD");
  }

  if (const auto* cnn_spec = std::get_if<CnnSpec>(&spec)) {
    const auto* canvases = std::get_if<std::span<const LabeledCanvas>>(&data);
    if (canvases == nullptr) {
      return absl::InvalidArgumentError("CNN training needs canvases");
    }
    absl::StatusOr<CnnNetwork> network = CnnNetwork::Create(*cnn_spec);
    if (!network.ok()) return network.status();
    if (absl::Status s = RequireBothClasses(*canvases); !s.ok()) return s;
    for (const LabeledCanvas& c : *canvases) {
      if (c.canvas.size() != cnn_spec->input_size) {
        return absl::InvalidArgumentError("shape mismatch: canvas size");
      }
    }
    CnnModel model;
    model.spec = *cnn_spec;
    model.input_scale = CanvasInputScale(*canvases);
    Rng init_rng = Rng(config.seed).Fork("init");
    SgdResult trained = RunSgd(
        network->Initialize(init_rng), canvases->size(),
        MakeCnnGradientFn(*network, model.input_scale, *canvases), config,
        aggregation);
    model.params = trained.params;
    Classifier classifier;
    classifier.model = std::move(model);
    classifier.provenance.seed = config.seed;
    classifier.provenance.config_hash = HashTrainingConfig(spec, config);
    return Finish(std::move(classifier), trained, privacy);
  }

  const auto& lr_spec = std::get<LogisticSpec>(spec);
  if (absl::Status s = ValidateLogisticSpec(lr_spec); !s.ok()) return s;
  const auto* vectors = std::get_if<std::span<const LabeledVector>>(&data);
  if (vectors == nullptr) {
    return absl::InvalidArgumentError("logistic training needs vectors");
  }
  if (absl::Status s = RequireBothClasses(*vectors); !s.ok()) return s;
  for (const LabeledVector& v : *vectors) {
    if (v.features.values.size() != static_cast<size_t>(lr_spec.input_dim)) {
      return absl::InvalidArgumentError("shape mismatch in logistic inputs");
    }
  }
  SgdResult trained =
      RunSgd(std::vector<double>(LogisticParameterCount(lr_spec), 0.0),
             vectors->size(), MakeLogisticGradientFn(lr_spec, *vectors),
             config, aggregation);
  Classifier classifier;
  classifier.model = LogisticModel{lr_spec, trained.params};
  classifier.provenance.seed = config.seed;
  classifier.provenance.config_hash = HashTrainingConfig(spec, config);
  return Finish(std::move(classifier), trained, privacy);
}

}  // namespace odmia
