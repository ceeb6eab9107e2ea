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

#include "odmia/learners/classifier.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "odmia/rng.h"

namespace odmia {
namespace {

std::string Num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Describe(const CnnSpec& s) {
  std::string out = "cnn;conv=";
  for (int c : s.conv_channels) absl::StrAppend(&out, c, ",");
  absl::StrAppend(&out, ";fc=");
  for (int u : s.fc_units) absl::StrAppend(&out, u, ",");
  absl::StrAppend(&out, ";k=", s.kernel_size, ";pool=", static_cast<int>(s.pool),
                  ";act=", static_cast<int>(s.activation),
                  ";dropout=", Num(s.dropout_rate), ";input=", s.input_size);
  return out;
}

std::string Describe(const GbtSpec& s) {
  return absl::StrCat("gbt;depth=", s.max_depth, ";n=", s.n_estimators,
                      ";lr=", Num(s.learning_rate), ";lambda=", Num(s.lambda),
                      ";mcw=", Num(s.min_child_weight));
}

std::string Describe(const LogisticSpec& s) {
  return absl::StrCat("logistic;d=", s.input_dim,
                      ";dropout=", Num(s.dropout_rate));
}

absl::Status CheckCanvasSize(const CnnSpec& spec, const Canvas& canvas) {
  if (canvas.size() != spec.input_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("shape mismatch: canvas size ", canvas.size(),
                     " != model input size ", spec.input_size));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view FamilyName(const Classifier& classifier) {
  switch (classifier.model.index()) {
    case 0:
      return "cnn";
    case 1:
      return "gbt";
    default:
      return "logistic";
  }
}

uint64_t HashTrainingConfig(const LearnerSpec& spec,
                            const TrainConfig& config) {
  std::string text = std::visit([](const auto& s) { return Describe(s); },
                                spec);
  absl::StrAppend(&text, "|lr=", Num(config.learning_rate),
                  ";mom=", Num(config.momentum),
                  ";wd=", Num(config.weight_decay), ";bs=", config.batch_size,
                  ";epochs=", config.epochs, ";seed=", config.seed);
  return HashLabel(text);
}

double CanvasInputScale(std::span<const LabeledCanvas> canvases) {
  std::vector<double> nonzero;
  for (const LabeledCanvas& c : canvases) {
    for (double p : c.canvas.pixels()) {
      if (p > 0.0) nonzero.push_back(p);
    }
  }
  if (nonzero.empty()) return 1.0;
  const size_t rank = static_cast<size_t>(
      std::ceil(0.99 * static_cast<double>(nonzero.size())));
  const size_t idx = std::max<size_t>(rank, 1) - 1;
  std::nth_element(nonzero.begin(), nonzero.begin() + idx, nonzero.end());
  return nonzero[idx];
}

ExampleGradientFn MakeCnnGradientFn(const CnnNetwork& network,
                                    double input_scale,
                                    std::span<const LabeledCanvas> data) {
  return [&network, input_scale, data](std::span<const double> params,
                                       size_t index, Rng* dropout,
                                       std::span<double> grad) {
    const LabeledCanvas& example = data[index];
    std::vector<double> input(example.canvas.pixels().begin(),
                              example.canvas.pixels().end());
    for (double& v : input) v /= input_scale;
    return network.LossAndGradient(params, input, example.label, dropout,
                                   grad);
  };
}

ExampleGradientFn MakeLogisticGradientFn(const LogisticSpec& spec,
                                         std::span<const LabeledVector> data) {
  return [spec, data](std::span<const double> params, size_t index,
                      Rng* dropout, std::span<double> grad) {
    const LabeledVector& example = data[index];
    return LogisticLossAndGradient(spec, params, example.features.values,
                                   example.label, dropout, grad);
  };
}

absl::StatusOr<Classifier> TrainCnn(const CnnSpec& spec,
                                    std::span<const LabeledCanvas> data,
                                    const TrainConfig& config) {
  absl::StatusOr<CnnNetwork> network = CnnNetwork::Create(spec);
  if (!network.ok()) return network.status();
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  if (absl::Status s = RequireBothClasses(data); !s.ok()) return s;
  for (const LabeledCanvas& example : data) {
    if (absl::Status s = CheckCanvasSize(spec, example.canvas); !s.ok()) {
      return s;
    }
  }

  CnnModel model;
  model.spec = spec;
  model.input_scale = CanvasInputScale(data);
  Rng init_rng = Rng(config.seed).Fork("init");
  SgdResult trained =
      RunSgd(network->Initialize(init_rng), data.size(),
             MakeCnnGradientFn(*network, model.input_scale, data), config,
             std::nullopt);
  model.params = std::move(trained.params);

  Classifier out;
  out.model = std::move(model);
  out.provenance.seed = config.seed;
  out.provenance.config_hash = HashTrainingConfig(spec, config);
  out.provenance.loss_history = std::move(trained.epoch_loss);
  out.provenance.epochs = trained.epochs_completed;
  return out;
}

absl::StatusOr<Classifier> TrainLogistic(const LogisticSpec& spec,
                                         std::span<const LabeledVector> data,
                                         const TrainConfig& config) {
  if (absl::Status s = ValidateLogisticSpec(spec); !s.ok()) return s;
  if (absl::Status s = ValidateTrainConfig(config); !s.ok()) return s;
  if (absl::Status s = RequireBothClasses(data); !s.ok()) return s;
  for (const LabeledVector& example : data) {
    if (example.features.values.size() !=
        static_cast<size_t>(spec.input_dim)) {
      return absl::InvalidArgumentError("shape mismatch in logistic inputs");
    }
  }
  SgdResult trained =
      RunSgd(std::vector<double>(LogisticParameterCount(spec), 0.0),
             data.size(), MakeLogisticGradientFn(spec, data), config,
             std::nullopt);
  Classifier out;
  out.model = LogisticModel{spec, std::move(trained.params)};
  out.provenance.seed = config.seed;
  out.provenance.config_hash = HashTrainingConfig(spec, config);
  out.provenance.loss_history = std::move(trained.epoch_loss);
  out.provenance.epochs = trained.epochs_completed;
  return out;
}

absl::StatusOr<Classifier> TrainGbtClassifier(
    const GbtSpec& spec, std::span<const LabeledVector> data) {
  absl::StatusOr<GbtTrainResult> trained = TrainGbt(spec, data);
  if (!trained.ok()) return trained.status();
  Classifier out;
  out.model = std::move(trained->model);
  out.provenance.config_hash = HashTrainingConfig(spec, TrainConfig{});
  out.provenance.loss_history = std::move(trained->loss_history);
  out.provenance.epochs = spec.n_estimators;
  return out;
}

absl::StatusOr<Probabilities> Predict(const Classifier& model,
                                      const Canvas& canvas) {
  const auto* cnn = std::get_if<CnnModel>(&model.model);
  if (cnn == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat(
        "type mismatch: ", std::string(FamilyName(model)), " model given a canvas"));
  }
  if (absl::Status s = CheckCanvasSize(cnn->spec, canvas); !s.ok()) return s;
  absl::StatusOr<CnnNetwork> network = CnnNetwork::Create(cnn->spec);
  if (!network.ok()) return network.status();
  if (cnn->params.size() != network->parameter_count()) {
    return absl::InvalidArgumentError("parameter vector has wrong length");
  }
  std::vector<double> input(canvas.pixels().begin(), canvas.pixels().end());
  for (double& v : input) v /= cnn->input_scale;
  return network->Predict(cnn->params, input);
}

absl::StatusOr<Probabilities> Predict(const Classifier& model,
                                      const FeatureVector& features) {
  if (const auto* gbt = std::get_if<GbtModel>(&model.model)) {
    if (features.values.size() != static_cast<size_t>(gbt->num_features)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "shape mismatch: ", features.values.size(), " features, model has ",
          gbt->num_features));
    }
    return gbt->Predict(features.values);
  }
  if (const auto* lr = std::get_if<LogisticModel>(&model.model)) {
    if (features.values.size() != static_cast<size_t>(lr->spec.input_dim)) {
      return absl::InvalidArgumentError("shape mismatch in logistic input");
    }
    return LogisticPredict(lr->params, features.values);
  }
  return absl::InvalidArgumentError(
      "type mismatch: cnn model given a feature vector");
}

}  // namespace odmia
