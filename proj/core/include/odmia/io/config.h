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

// Experiment configuration files (YAML). Every section and key is
// optional and defaults to the library defaults; unknown keys anywhere are
// an error naming their dotted path. SerializeConfig writes every field,
// so its output is the fully resolved configuration and parses back to an
// equal ExperimentConfig.
//
//   seed: 7
//   n_per_split: 500
//   simulator: {image_width, image_height, objects_per_image: [lo, hi],
//               proposals_per_object: [lo, hi],
//               object_size_fraction: [lo, hi], jitter_in, jitter_out,
//               score_in: [alpha, beta], score_out: [alpha, beta],
//               overfit_level}
//   shadow_simulator: {...}          # optional, same keys as simulator
//   attack:
//     kind: canvas_cnn | gbt_vector
//     canvas: {size, box_mode: uniform | original, uniform_fraction,
//              rescale_scores, accumulation: max | sum}
//     postprocess: {score_threshold, nms_threshold, rpn_nms_threshold,
//                   head_nms_threshold}
//     augmentation: [hflip, vflip, rot90, rot180, rot270]
//     cnn: {conv_channels, fc_units, kernel_size, pool: max2 | none,
//           activation: relu | identity, dropout_rate}
//     gbt: {max_depth, n_estimators, learning_rate, lambda,
//           min_child_weight}
//     n_max, balance, validation_fraction
//     train: {learning_rate, momentum, weight_decay, batch_size, epochs}
//   privacy: {noise_scale, clip_bound, delta, epochs}
//   sweep: {levels: [...]}
//   transfer: {configs: [{name, simulator: {...}}, ...]}
//   defense:
//     task: {dim, members, signal, label_noise, test_size}
//     surrogate: {kind: logistic | gbt | cnn, ...spec keys}
//     train: {...}, delta
//     defenses: [{kind: none}, {kind: dropout, rate},
//                {kind: dp, sigma, clip}]
//
// The CNN input size always equals canvas.size. One seed drives the whole
// experiment: it is copied into attack.seed and defense.seed.

#ifndef ODMIA_IO_CONFIG_H_
#define ODMIA_IO_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/pipeline.h"
#include "odmia/privacy.h"
#include "odmia/simulator.h"

namespace odmia {

struct ExperimentConfig {
  uint64_t seed = 0;
  int n_per_split = 500;
  SimulatorConfig simulator;
  std::optional<SimulatorConfig> shadow_simulator;
  AttackExperiment attack;
  PrivacyParams privacy;
  std::vector<double> sweep_levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<NamedSimulatorConfig> transfer_configs;
  DefenseExperiment defense;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Sets seed, attack.seed and defense.seed.
void SetSeed(ExperimentConfig& config, uint64_t seed);

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view yaml_text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);
std::string SerializeConfig(const ExperimentConfig& config);
absl::Status SaveConfig(const ExperimentConfig& config,
                        const std::string& path);

// Semantic checks beyond the schema (simulator, experiment and privacy
// validity).
absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

}  // namespace odmia

#endif  // ODMIA_IO_CONFIG_H_
