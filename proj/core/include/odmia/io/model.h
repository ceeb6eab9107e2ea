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

// Trained models as JSON documents.
//
//   {
//     "version": "1.0",
//     "family": "cnn" | "gbt" | "logistic",
//     "spec": {...},
//     ...family fields (params, input_scale, trees, ...),
//     "provenance": {"seed": 1, "config_hash": 123, "loss_history": [...],
//                    "epochs": 10, "epsilon": 2.5 | "inf"}
//   }
//
// Every double is written in its shortest round-trip form, so a saved and
// reloaded model predicts bit-identically. "epsilon" is omitted for
// non-private models.

#ifndef ODMIA_IO_MODEL_H_
#define ODMIA_IO_MODEL_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/learners/classifier.h"

namespace odmia {

inline constexpr std::string_view kModelVersion = "1.0";

absl::StatusOr<std::string> SerializeModel(const Classifier& model);
absl::StatusOr<Classifier> ParseModel(std::string_view json_text);

absl::Status SaveModel(const Classifier& model, const std::string& path);
absl::StatusOr<Classifier> LoadModel(const std::string& path);

}  // namespace odmia

#endif  // ODMIA_IO_MODEL_H_
