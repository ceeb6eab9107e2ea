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

#include "odmia/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "absl/strings/str_cat.h"

namespace odmia {
namespace {

bool Positive(double v) { return std::isfinite(v) && v > 0.0; }

double Interpolate(double from, double to, double t) {
  return from + t * (to - from);
}

double GaussianSymmetricKl(double sigma_a, double sigma_b) {
  if (sigma_a == sigma_b) return 0.0;
  if (sigma_a == 0.0 || sigma_b == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double r = (sigma_a * sigma_a) / (sigma_b * sigma_b);
  return 0.5 * (r + 1.0 / r - 2.0);
}

double LogBetaFunction(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double BetaKl(const BetaParams& p, const BetaParams& q) {
  using boost::math::digamma;
  const double a1 = p.alpha, b1 = p.beta, a2 = q.alpha, b2 = q.beta;
  return LogBetaFunction(a2, b2) - LogBetaFunction(a1, b1) +
         (a1 - a2) * digamma(a1) + (b1 - b2) * digamma(b1) +
         (a2 - a1 + b2 - b1) * digamma(a1 + b1);
}

double Clamp(double v, double hi) { return std::clamp(v, 0.0, hi); }

int DrawInRange(const IntRange& range, Rng& rng) {
  return range.lo + static_cast<int>(rng.UniformInt(
                        static_cast<uint64_t>(range.hi - range.lo) + 1));
}

std::vector<MembershipRecord> DrawSplit(const SimulatorConfig& config,
                                        int n, const Rng& root,
                                        std::string_view split,
                                        RecordSource source,
                                        MembershipLabel label) {
  const Rng split_rng = root.Fork(split);
  std::vector<MembershipRecord> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%.*s-%06d",
                  static_cast<int>(split.size()), split.data(), i);
    Rng rng = split_rng.Fork(static_cast<uint64_t>(i));
    MembershipRecord record;
    record.detections = SampleDetections(config, label, id, rng);
    record.label = label;
    record.source = source;
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace

SimulatorConfig LeakyPreset() { return SimulatorConfig{}; }

SimulatorConfig NullPreset() {
  SimulatorConfig config;
  config.jitter_in = config.jitter_out;
  config.score_in = config.score_out;
  return config;
}

SimulatorConfig OracleLeakPreset() {
  SimulatorConfig config;
  config.jitter_in = 1.0;
  config.jitter_out = 60.0;
  config.score_in = {50.0, 1.0};
  config.score_out = {1.0, 50.0};
  return config;
}

absl::Status ValidateSimulatorConfig(const SimulatorConfig& config) {
  if (config.image_width <= 0 || config.image_height <= 0) {
    return absl::InvalidArgumentError("image size must be positive");
  }
  if (config.objects_per_image.lo < 1 ||
      config.objects_per_image.hi < config.objects_per_image.lo) {
    return absl::InvalidArgumentError(
        "objects_per_image must satisfy 1 <= lo <= hi");
  }
  if (config.proposals_per_object.lo < 1 ||
      config.proposals_per_object.hi < config.proposals_per_object.lo) {
    return absl::InvalidArgumentError(
        "proposals_per_object must satisfy 1 <= lo <= hi");
  }
  const RealRange& size = config.object_size_fraction;
  if (!Positive(size.lo) || !(size.hi >= size.lo) || size.hi > 1.0) {
    return absl::InvalidArgumentError(
        "object_size_fraction must satisfy 0 < lo <= hi <= 1");
  }
  if (!std::isfinite(config.jitter_in) || config.jitter_in < 0.0 ||
      !std::isfinite(config.jitter_out) || config.jitter_out < 0.0) {
    return absl::InvalidArgumentError("jitters must be finite and >= 0");
  }
  for (const BetaParams& p : {config.score_in, config.score_out}) {
    if (!Positive(p.alpha) || !Positive(p.beta)) {
      return absl::InvalidArgumentError(
          "Beta score parameters must be positive");
    }
  }
  if (!(config.overfit_level >= 0.0 && config.overfit_level <= 1.0)) {
    return absl::InvalidArgumentError("overfit_level must be in [0, 1]");
  }
  return absl::OkStatus();
}

LabelParams EffectiveParams(const SimulatorConfig& config,
                            MembershipLabel label) {
  const LabelParams out{config.jitter_out, config.score_out};
  if (label == MembershipLabel::kOut) return out;
  const LabelParams in{config.jitter_in, config.score_in};
  const double t = config.overfit_level;
  if (t == 0.0 || in == out) return out;
  if (t == 1.0) return in;

  LabelParams mixed;
  mixed.jitter = std::pow(out.jitter, 1.0 - t) * std::pow(in.jitter, t);
  const double mean = Interpolate(out.score.Mean(), in.score.Mean(), t);
  const double concentration =
      Interpolate(out.score.alpha + out.score.beta,
                  in.score.alpha + in.score.beta, t);
  mixed.score = {mean * concentration, (1.0 - mean) * concentration};
  return mixed;
}

DetectionSet SampleDetections(const SimulatorConfig& config,
                              MembershipLabel label, std::string image_id,
                              Rng& rng) {
  const LabelParams params = EffectiveParams(config, label);
  const double w = config.image_width;
  const double h = config.image_height;
  const RealRange& frac = config.object_size_fraction;

  DetectionSet set;
  set.image_id = std::move(image_id);
  set.width = config.image_width;
  set.height = config.image_height;
  const int objects = DrawInRange(config.objects_per_image, rng);
  for (int o = 0; o < objects; ++o) {
    const double bw = w * Interpolate(frac.lo, frac.hi, rng.Uniform());
    const double bh = h * Interpolate(frac.lo, frac.hi, rng.Uniform());
    const double x0 = (w - bw) * rng.Uniform();
    const double y0 = (h - bh) * rng.Uniform();
    const BBox truth{x0, y0, x0 + bw, y0 + bh};
    const int proposals = DrawInRange(config.proposals_per_object, rng);
    for (int p = 0; p < proposals; ++p) {
      double c[4] = {truth.x0, truth.y0, truth.x1, truth.y1};
      for (double& v : c) v += params.jitter * rng.Gaussian();
      ScoredBox box;
      box.box = {Clamp(std::min(c[0], c[2]), w), Clamp(std::min(c[1], c[3]), h),
                 Clamp(std::max(c[0], c[2]), w), Clamp(std::max(c[1], c[3]), h)};
      box.score = std::clamp(rng.Beta(params.score.alpha, params.score.beta),
                             0.0, 1.0);
      set.boxes.push_back(box);
    }
  }
  return set;
}

absl::StatusOr<World> GenerateWorld(
    const SimulatorConfig& config, int n_per_split, uint64_t seed,
    const std::optional<SimulatorConfig>& shadow_config) {
  if (n_per_split < 1) {
    return absl::InvalidArgumentError("n_per_split must be >= 1");
  }
  if (absl::Status s = ValidateSimulatorConfig(config); !s.ok()) return s;
  const SimulatorConfig& shadow = shadow_config ? *shadow_config : config;
  if (shadow_config) {
    if (absl::Status s = ValidateSimulatorConfig(shadow); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("shadow config: ", s.message()));
    }
  }
  const Rng root(seed);
  World world;
  world.target_in = DrawSplit(config, n_per_split, root, "target_in",
                              RecordSource::kTarget, MembershipLabel::kIn);
  world.target_out = DrawSplit(config, n_per_split, root, "target_out",
                               RecordSource::kTarget, MembershipLabel::kOut);
  world.shadow_in = DrawSplit(shadow, n_per_split, root, "shadow_in",
                              RecordSource::kShadow, MembershipLabel::kIn);
  world.shadow_out = DrawSplit(shadow, n_per_split, root, "shadow_out",
                               RecordSource::kShadow, MembershipLabel::kOut);
  return world;
}

double SeparabilityProxy(const SimulatorConfig& config) {
  const LabelParams in = EffectiveParams(config, MembershipLabel::kIn);
  const LabelParams out = EffectiveParams(config, MembershipLabel::kOut);
  const double corners = 4.0 * GaussianSymmetricKl(in.jitter, out.jitter);
  const double scores = in.score == out.score
                            ? 0.0
                            : BetaKl(in.score, out.score) +
                                  BetaKl(out.score, in.score);
  return corners + scores;
}

}  // namespace odmia
