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

// A seeded stand-in for a trained detector. Each image holds a few
// ground-truth objects; the "detector" answers with several proposals per
// object, each a copy of the object box whose four corner coordinates are
// perturbed by isotropic Gaussian noise, scored by a Beta draw. Members
// (images the detector was trained on) get tight jitter and confident
// scores, non-members get loose jitter and hesitant scores.
//
// overfit_level t in [0, 1] moves the member parameters from the
// non-member ones (t = 0, no signal) to the configured member ones
// (t = 1): log-jitter, Beta mean and Beta concentration (alpha + beta) are
// interpolated linearly. Non-member parameters never move.

#ifndef ODMIA_SIMULATOR_H_
#define ODMIA_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/rng.h"
#include "odmia/types.h"

namespace odmia {

struct IntRange {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const RealRange&, const RealRange&) = default;
};

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double Mean() const { return alpha / (alpha + beta); }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

struct SimulatorConfig {
  int image_width = 300;
  int image_height = 300;
  IntRange objects_per_image{1, 2};
  IntRange proposals_per_object{1, 2};
  // Object side lengths as a fraction of the image side.
  RealRange object_size_fraction{0.1, 0.4};
  double jitter_in = 2.0;
  double jitter_out = 12.0;
  BetaParams score_in{8.0, 2.0};
  BetaParams score_out{2.0, 2.0};
  double overfit_level = 1.0;

  friend bool operator==(const SimulatorConfig&,
                         const SimulatorConfig&) = default;
};

// Defaults above: members separable from non-members.
SimulatorConfig LeakyPreset();
// Members and non-members share the non-member parameters.
SimulatorConfig NullPreset();
// Member boxes are near-exact and confident; non-member boxes are wildly
// scattered with scores concentrated near zero.
SimulatorConfig OracleLeakPreset();

absl::Status ValidateSimulatorConfig(const SimulatorConfig& config);

struct LabelParams {
  double jitter = 0.0;
  BetaParams score;

  friend bool operator==(const LabelParams&, const LabelParams&) = default;
};

// Parameters actually used for `label` after applying overfit_level.
LabelParams EffectiveParams(const SimulatorConfig& config,
                            MembershipLabel label);

// One simulated detector response. Boxes are clamped to the image and
// have ordered corners; scores lie in [0, 1]. No filtering or NMS is
// applied. The config must be valid.
DetectionSet SampleDetections(const SimulatorConfig& config,
                              MembershipLabel label, std::string image_id,
                              Rng& rng);

struct World {
  std::vector<MembershipRecord> target_in;
  std::vector<MembershipRecord> target_out;
  std::vector<MembershipRecord> shadow_in;
  std::vector<MembershipRecord> shadow_out;

  friend bool operator==(const World&, const World&) = default;
};

// Four record sets of n_per_split images each with mutually distinct
// image ids. Image i of split "target_in" is drawn from
// Rng(seed).Fork("target_in").Fork(i), and likewise for the other splits,
// so the target half does not depend on the shadow config. The shadow
// half uses `shadow_config` when given, otherwise `config`.
absl::StatusOr<World> GenerateWorld(
    const SimulatorConfig& config, int n_per_split, uint64_t seed,
    const std::optional<SimulatorConfig>& shadow_config = std::nullopt);

// Closed-form symmetrised KL divergence between the member and non-member
// generative parameters: one Gaussian term per corner coordinate (four)
// plus the Beta score term. Zero for identical parameters, +infinity when
// exactly one jitter is zero.
double SeparabilityProxy(const SimulatorConfig& config);

}  // namespace odmia

#endif  // ODMIA_SIMULATOR_H_
