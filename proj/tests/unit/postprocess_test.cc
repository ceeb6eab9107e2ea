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

#include "odmia/postprocess.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "odmia/rng.h"

namespace odmia {
namespace {

ScoredBox Box(double x0, double y0, double x1, double y1, double s) {
  return {.box = {x0, y0, x1, y1}, .score = s};
}

TEST(IouTest, HandComputedValues) {
  EXPECT_DOUBLE_EQ(Iou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(Iou({0, 0, 2, 2}, {1, 1, 3, 3}), 1.0 / 7.0);
  EXPECT_DOUBLE_EQ(Iou({0, 0, 1, 1}, {5, 5, 6, 6}), 0.0);
  EXPECT_DOUBLE_EQ(Iou({0, 0, 0, 3}, {0, 0, 0, 3}), 0.0);
}

TEST(IouTest, SymmetricAndBounded) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    BBox a{rng.Uniform(), rng.Uniform(), 0, 0};
    a.x1 = a.x0 + rng.Uniform();
    a.y1 = a.y0 + rng.Uniform();
    BBox b{rng.Uniform(), rng.Uniform(), 0, 0};
    b.x1 = b.x0 + rng.Uniform();
    b.y1 = b.y0 + rng.Uniform();
    const double v = Iou(a, b);
    EXPECT_EQ(v, Iou(b, a));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(NmsTest, CoincidentBoxesKeepHigherScore) {
  const std::vector<ScoredBox> in = {Box(0, 0, 2, 2, 0.9),
                                     Box(0, 0, 2, 2, 0.8)};
  const std::vector<ScoredBox> out = Nms(in, 0.5);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].score, 0.9);
}

TEST(NmsTest, DisjointBoxesNeverSuppress) {
  const std::vector<ScoredBox> in = {Box(0, 0, 1, 1, 0.3),
                                     Box(5, 5, 6, 6, 0.9)};
  const std::vector<ScoredBox> out = Nms(in, 0.1);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].score, 0.9);
  EXPECT_EQ(out[1].score, 0.3);
}

TEST(NmsTest, SuppressionIsStrict) {
  // IoU exactly 1/7: kept at threshold 1/7, suppressed just below.
  const std::vector<ScoredBox> in = {Box(0, 0, 2, 2, 0.9),
                                     Box(1, 1, 3, 3, 0.8)};
  EXPECT_EQ(Nms(in, 1.0 / 7.0).size(), 2u);
  EXPECT_EQ(Nms(in, 0.14).size(), 1u);
}

TEST(NmsTest, ThresholdOneKeepsEverythingSortedByScore) {
  Rng rng(8);
  std::vector<ScoredBox> in;
  for (int i = 0; i < 40; ++i) {
    in.push_back(Box(0, 0, 10, 10, rng.Uniform()));
  }
  const std::vector<ScoredBox> out = Nms(in, 1.0);
  ASSERT_EQ(out.size(), in.size());
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end(),
                             [](const ScoredBox& a, const ScoredBox& b) {
                               return a.score > b.score;
                             }));
}

TEST(NmsTest, OutputIsSubsetWithNoPairAboveThreshold) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredBox> in;
    for (int i = 0; i < 20; ++i) {
      const double x = 50 * rng.Uniform(), y = 50 * rng.Uniform();
      in.push_back(Box(x, y, x + 5 + 20 * rng.Uniform(),
                       y + 5 + 20 * rng.Uniform(), rng.Uniform()));
    }
    const double theta = rng.Uniform();
    const std::vector<ScoredBox> out = Nms(in, theta);
    for (size_t i = 0; i < out.size(); ++i) {
      EXPECT_NE(std::find(in.begin(), in.end(), out[i]), in.end());
      for (size_t j = i + 1; j < out.size(); ++j) {
        EXPECT_LE(Iou(out[i].box, out[j].box), theta);
      }
    }
  }
}

TEST(ScoreFilterTest, BoundaryIsKept) {
  const std::vector<ScoredBox> in = {Box(0, 0, 1, 1, 0.005),
                                     Box(0, 0, 1, 1, 0.01),
                                     Box(0, 0, 1, 1, 0.5)};
  const std::vector<ScoredBox> out = ScoreFilter(in, 0.01);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].score, 0.01);
  EXPECT_EQ(out[1].score, 0.5);
  EXPECT_EQ(ScoreFilter(in, 0.0), in);
  EXPECT_TRUE(ScoreFilter(in, 1.0).empty());
}

TEST(HarvestTest, ClampsToImage) {
  DetectionSet raw{.image_id = "a", .width = 100, .height = 80,
                   .boxes = {Box(-3, 10, 105, 90, 0.7)}};
  const DetectionSet out = Harvest(raw, {});
  ASSERT_EQ(out.boxes.size(), 1u);
  EXPECT_EQ(out.boxes[0].box, (BBox{0, 10, 100, 80}));
  ASSERT_TRUE(out.harvested_with.has_value());
  EXPECT_EQ(*out.harvested_with, PostprocessConfig{});
}

TEST(HarvestTest, DefaultSettingsDropOnlyLowScores) {
  DetectionSet raw{.image_id = "a", .width = 10, .height = 10,
                   .boxes = {Box(0, 0, 5, 5, 0.2), Box(0, 0, 5, 5, 0.001),
                             Box(0, 0, 5, 5, 0.9)}};
  const DetectionSet out = Harvest(raw, {.score_threshold = 0.01,
                                         .nms_threshold = 1.0});
  ASSERT_EQ(out.boxes.size(), 2u);
  EXPECT_EQ(out.boxes[0].score, 0.9);
  EXPECT_EQ(out.boxes[1].score, 0.2);
  EXPECT_TRUE(Harvest(DetectionSet{.width = 5, .height = 5}, {}).boxes.empty());
}

TEST(HarvestTest, ThresholdOnePreservesMultisetOnRandomSets) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    DetectionSet raw{.image_id = "x", .width = 300, .height = 300};
    const int n = static_cast<int>(rng.UniformInt(30));
    for (int i = 0; i < n; ++i) {
      const double x = 250 * rng.Uniform(), y = 250 * rng.Uniform();
      raw.boxes.push_back(Box(x, y, x + 50 * rng.Uniform(),
                              y + 50 * rng.Uniform(), rng.Uniform()));
    }
    const DetectionSet out =
        Harvest(raw, {.score_threshold = 0.0, .nms_threshold = 1.0});
    auto key = [](const ScoredBox& b) {
      return std::tuple(b.score, b.box.x0, b.box.y0, b.box.x1, b.box.y1);
    };
    std::vector<ScoredBox> a = raw.boxes, b = out.boxes;
    auto less = [&](const ScoredBox& l, const ScoredBox& r) {
      return key(l) < key(r);
    };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    ASSERT_EQ(a, b);
  }
}

}  // namespace
}  // namespace odmia
