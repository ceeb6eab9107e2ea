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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "odmia/rng.h"

namespace odmia {
namespace {

struct Moments {
  double corner_gap = 0.0;  // Mean |corner difference| between proposals.
  double score = 0.0;
};

// One object with two proposals per image, so the two boxes differ only by
// their independent jitters.
Moments Measure(SimulatorConfig cfg, MembershipLabel label, int n) {
  cfg.objects_per_image = {1, 1};
  cfg.proposals_per_object = {2, 2};
  Rng rng(17);
  Moments m;
  int gaps = 0, scores = 0;
  for (int i = 0; i < n; ++i) {
    const DetectionSet set = SampleDetections(cfg, label, "x", rng);
    EXPECT_EQ(set.boxes.size(), 2u);
    const BBox& a = set.boxes[0].box;
    const BBox& b = set.boxes[1].box;
    for (double d : {a.x0 - b.x0, a.y0 - b.y0, a.x1 - b.x1, a.y1 - b.y1}) {
      m.corner_gap += std::abs(d);
      ++gaps;
    }
    for (const ScoredBox& s : set.boxes) {
      m.score += s.score;
      ++scores;
    }
  }
  m.corner_gap /= gaps;
  m.score /= scores;
  return m;
}

TEST(SimulatorTest, PresetsAreValid) {
  for (const SimulatorConfig& c :
       {LeakyPreset(), NullPreset(), OracleLeakPreset()}) {
    EXPECT_TRUE(ValidateSimulatorConfig(c).ok());
  }
  EXPECT_EQ(LeakyPreset(), SimulatorConfig{});
  EXPECT_EQ(NullPreset().jitter_in, NullPreset().jitter_out);
  EXPECT_EQ(NullPreset().score_in, NullPreset().score_out);
}

TEST(SimulatorTest, MembersAreTighterAndMoreConfident) {
  const Moments in = Measure(LeakyPreset(), MembershipLabel::kIn, 1000);
  const Moments out = Measure(LeakyPreset(), MembershipLabel::kOut, 1000);
  EXPECT_LT(in.corner_gap, out.corner_gap);
  EXPECT_GT(in.score, out.score);
  // Difference of two N(0, j^2) draws has mean absolute value 2j/sqrt(pi);
  // the small member jitter is almost never clamped.
  EXPECT_NEAR(in.corner_gap, 2 * 2.0 / std::sqrt(std::numbers::pi), 0.15);
  EXPECT_NEAR(in.score, 0.8, 0.01);
  EXPECT_NEAR(out.score, 0.5, 0.015);
}

TEST(SimulatorTest, BoxesAreClampedOrderedAndScored) {
  SimulatorConfig cfg = OracleLeakPreset();
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const DetectionSet set =
        SampleDetections(cfg, i % 2 ? MembershipLabel::kIn
                                    : MembershipLabel::kOut,
                         "id", rng);
    EXPECT_TRUE(ValidateDetectionSet(set).ok());
    for (const ScoredBox& b : set.boxes) {
      EXPECT_GE(b.box.x0, 0.0);
      EXPECT_LE(b.box.x1, cfg.image_width);
      EXPECT_GE(b.box.y0, 0.0);
      EXPECT_LE(b.box.y1, cfg.image_height);
      EXPECT_LE(b.box.x0, b.box.x1);
      EXPECT_LE(b.box.y0, b.box.y1);
      EXPECT_GE(b.score, 0.0);
      EXPECT_LE(b.score, 1.0);
    }
  }
}

TEST(SimulatorTest, OverfitLevelEndpointsAndMonotonicity) {
  SimulatorConfig cfg;
  cfg.overfit_level = 0.0;
  EXPECT_EQ(EffectiveParams(cfg, MembershipLabel::kIn),
            EffectiveParams(cfg, MembershipLabel::kOut));
  EXPECT_EQ(SeparabilityProxy(cfg), 0.0);
  cfg.overfit_level = 1.0;
  EXPECT_EQ(EffectiveParams(cfg, MembershipLabel::kIn).jitter, cfg.jitter_in);
  EXPECT_EQ(EffectiveParams(cfg, MembershipLabel::kIn).score, cfg.score_in);
  double prev_proxy = -1.0, prev_jitter = 1e9, prev_mean = -1.0;
  for (int i = 0; i <= 10; ++i) {
    cfg.overfit_level = i / 10.0;
    const LabelParams p = EffectiveParams(cfg, MembershipLabel::kIn);
    EXPECT_EQ(EffectiveParams(cfg, MembershipLabel::kOut).jitter,
              cfg.jitter_out);
    EXPECT_LT(p.jitter, prev_jitter);
    EXPECT_GT(p.score.Mean(), prev_mean);
    const double proxy = SeparabilityProxy(cfg);
    EXPECT_GT(proxy, prev_proxy);
    prev_jitter = p.jitter;
    prev_mean = p.score.Mean();
    prev_proxy = proxy;
  }
}

TEST(SimulatorTest, SeparabilityProxyClosedForm) {
  SimulatorConfig cfg;
  cfg.score_in = cfg.score_out;
  const double r = cfg.jitter_in * cfg.jitter_in /
                   (cfg.jitter_out * cfg.jitter_out);
  // Symmetrised Gaussian KL per coordinate: (r + 1/r - 2) / 2.
  EXPECT_NEAR(SeparabilityProxy(cfg), 4 * 0.5 * (r + 1 / r - 2), 1e-9);
  EXPECT_EQ(SeparabilityProxy(NullPreset()), 0.0);
  cfg.jitter_in = 0.0;
  EXPECT_TRUE(std::isinf(SeparabilityProxy(cfg)));
}

TEST(SimulatorTest, WorldShapeAndIds) {
  absl::StatusOr<World> w = GenerateWorld(LeakyPreset(), 5, 1);
  ASSERT_TRUE(w.ok());
  std::set<std::string> ids;
  auto check = [&](const std::vector<MembershipRecord>& part,
                   MembershipLabel label, RecordSource source) {
    ASSERT_EQ(part.size(), 5u);
    for (const MembershipRecord& r : part) {
      EXPECT_EQ(r.label, label);
      EXPECT_EQ(r.source, source);
      ids.insert(r.detections.image_id);
    }
  };
  check(w->target_in, MembershipLabel::kIn, RecordSource::kTarget);
  check(w->target_out, MembershipLabel::kOut, RecordSource::kTarget);
  check(w->shadow_in, MembershipLabel::kIn, RecordSource::kShadow);
  check(w->shadow_out, MembershipLabel::kOut, RecordSource::kShadow);
  EXPECT_EQ(ids.size(), 20u);
  EXPECT_EQ(w->target_in[3].detections.image_id, "target_in-000003");
}

TEST(SimulatorTest, WorldsAreDeterministic) {
  EXPECT_EQ(*GenerateWorld(LeakyPreset(), 20, 9),
            *GenerateWorld(LeakyPreset(), 20, 9));
  EXPECT_NE(GenerateWorld(LeakyPreset(), 20, 9)->target_in,
            GenerateWorld(LeakyPreset(), 20, 10)->target_in);
}

TEST(SimulatorTest, TargetStreamIsolatedFromShadowConfig) {
  const World a = *GenerateWorld(LeakyPreset(), 15, 4, NullPreset());
  const World b = *GenerateWorld(LeakyPreset(), 15, 4, OracleLeakPreset());
  EXPECT_EQ(a.target_in, b.target_in);
  EXPECT_EQ(a.target_out, b.target_out);
  EXPECT_NE(a.shadow_in, b.shadow_in);
}

TEST(SimulatorTest, PrefixStability) {
  const World small = *GenerateWorld(LeakyPreset(), 3, 8);
  const World large = *GenerateWorld(LeakyPreset(), 10, 8);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(small.shadow_out[i], large.shadow_out[i]);
  }
}

TEST(SimulatorTest, Validation) {
  EXPECT_FALSE(GenerateWorld(LeakyPreset(), 0, 1).ok());
  SimulatorConfig bad;
  bad.overfit_level = 1.5;
  EXPECT_FALSE(ValidateSimulatorConfig(bad).ok());
  bad = {};
  bad.jitter_in = -1;
  EXPECT_FALSE(ValidateSimulatorConfig(bad).ok());
  bad = {};
  bad.score_in = {0.0, 1.0};
  EXPECT_FALSE(ValidateSimulatorConfig(bad).ok());
  bad = {};
  bad.objects_per_image = {3, 1};
  EXPECT_FALSE(ValidateSimulatorConfig(bad).ok());
}

}  // namespace
}  // namespace odmia
