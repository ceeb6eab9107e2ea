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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "odmia/rng.h"

namespace odmia {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<LabeledCanvas> Canvases(int n) {
  Rng rng(1);
  std::vector<LabeledCanvas> out;
  for (int i = 0; i < n; ++i) {
    LabeledCanvas c{Canvas(8), i % 2 ? MembershipLabel::kIn
                                     : MembershipLabel::kOut};
    for (double& p : c.canvas.mutable_pixels()) {
      p = rng.Uniform() < 0.2 ? rng.Uniform() : 0.0;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<LabeledVector> Vectors(int n, int dim) {
  Rng rng(2);
  std::vector<LabeledVector> out;
  for (int i = 0; i < n; ++i) {
    LabeledVector v{{}, i % 2 ? MembershipLabel::kIn : MembershipLabel::kOut};
    for (int j = 0; j < dim; ++j) v.features.values.push_back(rng.Gaussian());
    out.push_back(std::move(v));
  }
  return out;
}

const CnnSpec kSpec{.conv_channels = {2}, .fc_units = {4, 2},
                    .dropout_rate = 0.25, .input_size = 8};

TEST(DpTrainTest, ZeroNoiseReducesToCnnTraining) {
  const std::vector<LabeledCanvas> data = Canvases(24);
  const TrainConfig cfg{.batch_size = 4, .epochs = 5, .seed = 3};
  absl::StatusOr<DpTrainResult> dp =
      DpTrain(kSpec, std::span<const LabeledCanvas>(data), cfg,
              {.noise_scale = 0.0, .clip_bound = kInf});
  ASSERT_TRUE(dp.ok()) << dp.status();
  absl::StatusOr<Classifier> plain = TrainCnn(kSpec, data, cfg);
  EXPECT_EQ(std::get<CnnModel>(dp->model.model),
            std::get<CnnModel>(plain->model));
  EXPECT_EQ(dp->epsilon, kInfiniteEpsilon);
  EXPECT_EQ(dp->model.provenance.loss_history, plain->provenance.loss_history);
}

TEST(DpTrainTest, ZeroNoiseReducesToLogisticTraining) {
  const std::vector<LabeledVector> data = Vectors(30, 5);
  const LogisticSpec spec{.input_dim = 5, .dropout_rate = 0.1};
  const TrainConfig cfg{.batch_size = 7, .epochs = 4, .seed = 8};
  absl::StatusOr<DpTrainResult> dp =
      DpTrain(spec, std::span<const LabeledVector>(data), cfg,
              {.noise_scale = 0.0, .clip_bound = kInf});
  ASSERT_TRUE(dp.ok());
  EXPECT_EQ(std::get<LogisticModel>(dp->model.model),
            std::get<LogisticModel>(TrainLogistic(spec, data, cfg)->model));
}

TEST(DpTrainTest, EpsilonIsClosedFormAtRealizedEpochs) {
  const std::vector<LabeledVector> data = Vectors(20, 3);
  for (double sigma : {0.5, 1.0, 4.0}) {
    const PrivacyParams privacy{.noise_scale = sigma, .clip_bound = 1.0,
                                .delta = 1e-5, .epochs = 999};
    absl::StatusOr<DpTrainResult> dp =
        DpTrain(LogisticSpec{.input_dim = 3},
                std::span<const LabeledVector>(data), {.epochs = 7}, privacy);
    ASSERT_TRUE(dp.ok());
    EXPECT_EQ(dp->epochs, 7.0);
    PrivacyParams realized = privacy;
    realized.epochs = 7.0;
    EXPECT_EQ(dp->epsilon, PrivacyLoss(realized));
    ASSERT_TRUE(dp->model.provenance.epsilon.has_value());
    EXPECT_EQ(*dp->model.provenance.epsilon, dp->epsilon);
  }
}

TEST(DpTrainTest, NoiseIsSeededAndChangesParameters) {
  const std::vector<LabeledVector> data = Vectors(20, 3);
  const PrivacyParams privacy{.noise_scale = 1.0, .clip_bound = 1.0};
  const TrainConfig cfg{.epochs = 3, .seed = 5};
  auto run = [&](const PrivacyParams& p) {
    return std::get<LogisticModel>(
               DpTrain(LogisticSpec{.input_dim = 3},
                       std::span<const LabeledVector>(data), cfg, p)
                   ->model.model)
        .params;
  };
  EXPECT_EQ(run(privacy), run(privacy));
  EXPECT_NE(run(privacy), run({.noise_scale = 0.0, .clip_bound = 1.0}));
}

TEST(DpTrainTest, HigherSigmaLowersEpsilon) {
  const std::vector<LabeledVector> data = Vectors(10, 2);
  double prev = kInf;
  for (double sigma : {1e-4, 1e-3, 0.1, 1.0, 10.0}) {
    const double eps =
        DpTrain(LogisticSpec{.input_dim = 2},
                std::span<const LabeledVector>(data), {.epochs = 2},
                {.noise_scale = sigma})
            ->epsilon;
    EXPECT_LT(eps, prev);
    prev = eps;
  }
}

TEST(DpTrainTest, RejectsGbtAndMismatchedData) {
  const std::vector<LabeledVector> data = Vectors(10, 2);
  absl::StatusOr<DpTrainResult> gbt = DpTrain(
      GbtSpec{}, std::span<const LabeledVector>(data), {}, {});
  EXPECT_EQ(gbt.status().code(), absl::StatusCode::kUnimplemented);
  EXPECT_FALSE(DpTrain(kSpec, std::span<const LabeledVector>(data), {}, {})
                   .ok());
  EXPECT_FALSE(DpTrain(LogisticSpec{.input_dim = 2},
                       std::span<const LabeledVector>(data), {},
                       {.noise_scale = -1.0})
                   .ok());
}

TEST(DpSgdNoiseTest, EmpiricalStdMatchesTheory) {
  const double lr = 0.1, sigma = 2.0, clip = 0.5;
  const int batch = 4;
  const std::vector<std::vector<double>> zero_grads(batch,
                                                    std::vector<double>(1));
  Rng rng(77);
  const int steps = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double step =
        (*DpSgdStep(std::vector<double>{0.0}, zero_grads, clip, sigma, lr,
                    rng))[0];
    sum += step;
    sq += step * step;
  }
  const double mean = sum / steps;
  const double sd = std::sqrt(sq / steps - mean * mean);
  EXPECT_NEAR(sd / (lr * sigma * clip / batch), 1.0, 0.02);
}

}  // namespace
}  // namespace odmia
