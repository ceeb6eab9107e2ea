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

#include <gtest/gtest.h>

#include <cmath>

#include "odmia/learners/classifier.h"
#include "odmia/learners/cnn.h"
#include "odmia/learners/gbt.h"
#include "odmia/learners/gradient_check.h"
#include "odmia/learners/logistic.h"
#include "odmia/learners/sgd.h"
#include "odmia/rng.h"

namespace odmia {
namespace {

CnnSpec SmallSpec() {
  return {.conv_channels = {3, 4}, .fc_units = {6, 2}, .input_size = 8};
}

Canvas RandomCanvas(int size, Rng& rng) {
  Canvas c(size);
  for (double& p : c.mutable_pixels()) p = rng.Uniform();
  return c;
}

CnnModel RandomModel(const CnnSpec& spec, uint64_t seed) {
  CnnModel model;
  model.spec = spec;
  Rng rng(seed);
  model.params.resize(CnnNetwork::Create(spec)->parameter_count());
  for (double& p : model.params) p = 0.4 * rng.Gaussian();
  return model;
}

// Class is given by which of two fixed pixels is lit.
std::vector<LabeledCanvas> BrightPixelSet(int n, int size) {
  std::vector<LabeledCanvas> out;
  for (int i = 0; i < n; ++i) {
    LabeledCanvas c{Canvas(size), i % 2 ? MembershipLabel::kIn
                                        : MembershipLabel::kOut};
    if (c.label == MembershipLabel::kIn) {
      c.canvas.at(1, 1) = 1.0 + 0.1 * (i % 5);
    } else {
      c.canvas.at(size - 2, size - 2) = 1.0 + 0.1 * (i % 5);
    }
    out.push_back(std::move(c));
  }
  return out;
}

double TrainingAccuracy(const Classifier& model,
                        const std::vector<LabeledCanvas>& data) {
  int correct = 0;
  for (const LabeledCanvas& c : data) {
    correct += Decide(*Predict(model, c.canvas)) == c.label;
  }
  return static_cast<double>(correct) / data.size();
}

TEST(DecideTest, TiesGoToOut) {
  EXPECT_EQ(Decide({0.5, 0.5}), MembershipLabel::kOut);
  EXPECT_EQ(Decide({0.6, 0.4}), MembershipLabel::kIn);
}

TEST(CnnTest, FreshModelIsUniformAndNormalised) {
  absl::StatusOr<CnnNetwork> net = CnnNetwork::Create(SmallSpec());
  ASSERT_TRUE(net.ok());
  Rng rng(1);
  const std::vector<double> params = net->Initialize(rng);
  for (int i = 0; i < 5; ++i) {
    const Canvas c = RandomCanvas(8, rng);
    const Probabilities p = net->Predict(params, c.pixels());
    EXPECT_EQ(p.in, 0.5);
    EXPECT_EQ(p.out, 0.5);
  }
  const CnnModel random = RandomModel(SmallSpec(), 3);
  for (int i = 0; i < 5; ++i) {
    const Canvas c = RandomCanvas(8, rng);
    const Probabilities p = net->Predict(random.params, c.pixels());
    EXPECT_NEAR(p.in + p.out, 1.0, 1e-15);
    EXPECT_EQ(net->Predict(random.params, c.pixels()).in, p.in);
  }
}

TEST(CnnTest, InitializationIsSeeded) {
  absl::StatusOr<CnnNetwork> net = CnnNetwork::Create(SmallSpec());
  Rng a(4), b(4), c(5);
  EXPECT_EQ(net->Initialize(a), net->Initialize(b));
  EXPECT_NE(net->Initialize(a), net->Initialize(c));
}

TEST(CnnTest, SpecValidation) {
  EXPECT_TRUE(ValidateCnnSpec(SmallSpec()).ok());
  CnnSpec bad = SmallSpec();
  bad.fc_units = {3};
  EXPECT_FALSE(ValidateCnnSpec(bad).ok());
  bad = SmallSpec();
  bad.kernel_size = 2;
  EXPECT_FALSE(ValidateCnnSpec(bad).ok());
  bad = SmallSpec();
  bad.input_size = 2;
  EXPECT_FALSE(ValidateCnnSpec(bad).ok());
  bad = SmallSpec();
  bad.dropout_rate = 1.0;
  EXPECT_FALSE(ValidateCnnSpec(bad).ok());
}

TEST(GradientCheckTest, RandomReluModels) {
  Rng rng(10);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    CnnModel model = RandomModel(SmallSpec(), 100 + seed);
    const LabeledCanvas sample{RandomCanvas(8, rng), seed % 2
                                                         ? MembershipLabel::kIn
                                                         : MembershipLabel::kOut};
    absl::StatusOr<GradientCheckResult> r =
        GradientCheck(model, sample, 1e-5, seed, 300);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_LT(r->max_relative_error, 1e-4) << "seed " << seed;
    EXPECT_GT(r->checked, 0);
  }
}

TEST(GradientCheckTest, LinearModelIsNearMachinePrecision) {
  CnnSpec spec{.conv_channels = {2}, .fc_units = {3, 2}, .kernel_size = 3,
               .pool = Pooling::kNone, .activation = Activation::kIdentity,
               .input_size = 5};
  Rng rng(2);
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const LabeledCanvas sample{RandomCanvas(5, rng), MembershipLabel::kIn};
    absl::StatusOr<GradientCheckResult> r =
        GradientCheck(RandomModel(spec, seed), sample, 1e-5, seed, 500);
    ASSERT_TRUE(r.ok());
    EXPECT_LT(r->max_relative_error, 1e-7);
    EXPECT_EQ(r->skipped, 0);
  }
}

TEST(GradientCheckTest, WithDropout) {
  CnnSpec spec = SmallSpec();
  spec.dropout_rate = 0.3;
  Rng rng(3);
  const LabeledCanvas sample{RandomCanvas(8, rng), MembershipLabel::kOut};
  absl::StatusOr<GradientCheckResult> r =
      GradientCheck(RandomModel(spec, 7), sample, 1e-5, 1, 300);
  ASSERT_TRUE(r.ok());
  EXPECT_LT(r->max_relative_error, 1e-4);
}

TEST(GradientCheckTest, RejectsBadEpsilon) {
  Rng rng(3);
  const LabeledCanvas sample{RandomCanvas(8, rng), MembershipLabel::kOut};
  EXPECT_FALSE(GradientCheck(RandomModel(SmallSpec(), 1), sample, 1e-2, 1)
                   .ok());
}

TEST(TrainCnnTest, OverfitsTinySeparableSet) {
  const std::vector<LabeledCanvas> data = BrightPixelSet(20, 8);
  absl::StatusOr<Classifier> model =
      TrainCnn(SmallSpec(), data,
               {.learning_rate = 0.05, .batch_size = 4, .epochs = 200,
                .seed = 1});
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_EQ(TrainingAccuracy(*model, data), 1.0);
  EXPECT_EQ(model->provenance.epochs, 200.0);
  EXPECT_EQ(model->provenance.loss_history.size(), 200u);
  EXPECT_LT(model->provenance.loss_history.back(),
            model->provenance.loss_history.front());
}

TEST(TrainCnnTest, ZeroLearningRateKeepsInitialParameters) {
  const std::vector<LabeledCanvas> data = BrightPixelSet(10, 8);
  const TrainConfig cfg{.learning_rate = 0.0, .epochs = 3, .seed = 6};
  absl::StatusOr<Classifier> model = TrainCnn(SmallSpec(), data, cfg);
  ASSERT_TRUE(model.ok());
  Rng init = Rng(cfg.seed).Fork("init");
  EXPECT_EQ(std::get<CnnModel>(model->model).params,
            CnnNetwork::Create(SmallSpec())->Initialize(init));
}

TEST(TrainCnnTest, DeterministicForSeed) {
  const std::vector<LabeledCanvas> data = BrightPixelSet(12, 8);
  CnnSpec spec = SmallSpec();
  spec.dropout_rate = 0.2;
  const TrainConfig cfg{.epochs = 5, .seed = 9};
  EXPECT_EQ(*TrainCnn(spec, data, cfg), *TrainCnn(spec, data, cfg));
  TrainConfig other = cfg;
  other.seed = 10;
  EXPECT_NE(*TrainCnn(spec, data, cfg), *TrainCnn(spec, data, other));
}

TEST(TrainCnnTest, RejectsBadData) {
  std::vector<LabeledCanvas> data = BrightPixelSet(6, 8);
  for (LabeledCanvas& c : data) c.label = MembershipLabel::kIn;
  EXPECT_FALSE(TrainCnn(SmallSpec(), data, {}).ok());
  EXPECT_FALSE(TrainCnn(SmallSpec(), BrightPixelSet(6, 10), {}).ok());
  EXPECT_FALSE(TrainCnn(SmallSpec(), BrightPixelSet(6, 8),
                        {.batch_size = 0})
                   .ok());
}

TEST(InputScaleTest, NinetyNinthPercentileOfNonZeroPixels) {
  std::vector<LabeledCanvas> data(1, {Canvas(10), MembershipLabel::kIn});
  for (int i = 0; i < 100; ++i) data[0].canvas.at(i % 10, i / 10) = i + 1;
  EXPECT_EQ(CanvasInputScale(data), 99.0);
  std::vector<LabeledCanvas> blank(1, {Canvas(4), MembershipLabel::kIn});
  EXPECT_EQ(CanvasInputScale(blank), 1.0);
}

TEST(PredictTest, TypeAndShapeMismatches) {
  const std::vector<LabeledCanvas> data = BrightPixelSet(6, 8);
  Classifier cnn = *TrainCnn(SmallSpec(), data, {.epochs = 1});
  EXPECT_FALSE(Predict(cnn, FeatureVector{{0.0}}).ok());
  EXPECT_FALSE(Predict(cnn, Canvas(9)).ok());
  EXPECT_EQ(FamilyName(cnn), "cnn");
}

std::vector<LabeledVector> ThresholdSet(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledVector> out;
  for (int i = 0; i < n; ++i) {
    const double x = rng.Uniform();
    out.push_back({FeatureVector{{x, rng.Uniform()}},
                   x > 0.5 ? MembershipLabel::kIn : MembershipLabel::kOut});
  }
  return out;
}

TEST(GbtTest, SingleSplitSeparableData) {
  const std::vector<LabeledVector> data = ThresholdSet(200, 1);
  absl::StatusOr<Classifier> model = TrainGbtClassifier(
      {.max_depth = 1, .n_estimators = 10}, data);
  ASSERT_TRUE(model.ok()) << model.status();
  int correct = 0;
  for (const LabeledVector& v : data) {
    const Probabilities p = *Predict(*model, v.features);
    correct += Decide(p) == v.label;
    EXPECT_NEAR(p.in + p.out, 1.0, 1e-15);
  }
  EXPECT_EQ(correct, 200);
  const auto& gbt = std::get<GbtModel>(model->model);
  EXPECT_EQ(gbt.trees.size(), 10u);
  EXPECT_EQ(gbt.trees[0].nodes[0].feature, 0);
  EXPECT_NEAR(gbt.trees[0].nodes[0].threshold, 0.5, 0.02);
}

TEST(GbtTest, ConfidentOnOwnTrainingPoints) {
  const std::vector<LabeledVector> data = ThresholdSet(200, 1);
  absl::StatusOr<Classifier> model = TrainGbtClassifier(
      {.max_depth = 1, .n_estimators = 10, .learning_rate = 0.3}, data);
  ASSERT_TRUE(model.ok());
  for (const LabeledVector& v : data) {
    if (v.label == MembershipLabel::kIn) {
      EXPECT_GT(Predict(*model, v.features)->in, 0.9);
    }
  }
}

TEST(GbtTest, ConstantFeaturesPredictPrior) {
  std::vector<LabeledVector> data;
  for (int i = 0; i < 40; ++i) {
    data.push_back({FeatureVector{{1.0, 2.0}},
                    i < 10 ? MembershipLabel::kIn : MembershipLabel::kOut});
  }
  absl::StatusOr<Classifier> model =
      TrainGbtClassifier({.n_estimators = 1}, data);
  ASSERT_TRUE(model.ok());
  EXPECT_NEAR(Predict(*model, data[0].features)->in, 0.25, 1e-12);
}

TEST(GbtTest, LossHistoryDecreases) {
  absl::StatusOr<GbtTrainResult> r =
      TrainGbt({.n_estimators = 20}, ThresholdSet(100, 5));
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->loss_history.size(), 21u);
  for (size_t i = 1; i < r->loss_history.size(); ++i) {
    EXPECT_LE(r->loss_history[i], r->loss_history[i - 1] + 1e-12);
  }
}

TEST(GbtTest, RejectsDegenerateInput) {
  std::vector<LabeledVector> data = ThresholdSet(20, 2);
  for (LabeledVector& v : data) v.label = MembershipLabel::kIn;
  EXPECT_FALSE(TrainGbt({}, data).ok());
  EXPECT_FALSE(TrainGbt({.n_estimators = 0}, ThresholdSet(20, 2)).ok());
  EXPECT_FALSE(TrainGbt({.max_depth = 0}, ThresholdSet(20, 2)).ok());
  std::vector<LabeledVector> ragged = ThresholdSet(20, 2);
  ragged[3].features.values.push_back(1.0);
  EXPECT_FALSE(TrainGbt({}, ragged).ok());
}

TEST(GbtTest, Deterministic) {
  const std::vector<LabeledVector> data = ThresholdSet(80, 9);
  EXPECT_EQ(TrainGbt({}, data)->model, TrainGbt({}, data)->model);
}

TEST(LogisticTest, FitsLinearlySeparableData) {
  const std::vector<LabeledVector> data = ThresholdSet(200, 3);
  absl::StatusOr<Classifier> model =
      TrainLogistic({.input_dim = 2}, data,
                    {.learning_rate = 0.5, .epochs = 200, .seed = 2});
  ASSERT_TRUE(model.ok());
  int correct = 0;
  for (const LabeledVector& v : data) {
    correct += Decide(*Predict(*model, v.features)) == v.label;
  }
  EXPECT_GE(correct, 190);
}

TEST(LogisticTest, ZeroParametersGiveHalf) {
  const std::vector<double> params(3, 0.0);
  const std::vector<double> x = {1.0, -2.0};
  const Probabilities p = LogisticPredict(params, x);
  EXPECT_EQ(p.in, 0.5);
  EXPECT_EQ(p.out, 0.5);
}

TEST(LogisticTest, GradientMatchesFiniteDifference) {
  const LogisticSpec spec{.input_dim = 4};
  Rng rng(12);
  std::vector<double> params(5), x(4);
  for (double& p : params) p = rng.Gaussian();
  for (double& v : x) v = rng.Gaussian();
  std::vector<double> grad(5, 0.0);
  LogisticLossAndGradient(spec, params, x, MembershipLabel::kIn, nullptr,
                          grad);
  for (size_t j = 0; j < params.size(); ++j) {
    std::vector<double> plus = params, minus = params;
    plus[j] += 1e-6;
    minus[j] -= 1e-6;
    std::vector<double> unused(5, 0.0);
    const double numeric =
        (LogisticLossAndGradient(spec, plus, x, MembershipLabel::kIn, nullptr,
                                 {}) -
         LogisticLossAndGradient(spec, minus, x, MembershipLabel::kIn,
                                 nullptr, {})) /
        2e-6;
    EXPECT_NEAR(grad[j], numeric, 1e-8);
  }
}

TEST(SgdTest, MatchesHandComputedMomentumSteps) {
  // Loss 0.5 * (theta - target_i)^2 per example; one batch of two.
  const std::vector<double> targets = {1.0, 3.0};
  ExampleGradientFn fn = [&](std::span<const double> p, size_t i, Rng*,
                             std::span<double> g) {
    g[0] += p[0] - targets[i];
    return 0.5 * (p[0] - targets[i]) * (p[0] - targets[i]);
  };
  const TrainConfig cfg{.learning_rate = 0.1, .momentum = 0.5,
                        .weight_decay = 0.0, .batch_size = 2, .epochs = 2};
  const SgdResult r = RunSgd({0.0}, 2, fn, cfg, std::nullopt);
  // Step 1: g = -2, v = -2, theta = 0.2. Step 2: g = -1.8,
  // v = -1.8 - 1 = -2.8, theta = 0.48.
  EXPECT_NEAR(r.params[0], 0.48, 1e-15);
  EXPECT_EQ(r.epochs_completed, 2);
  ASSERT_EQ(r.epoch_loss.size(), 2u);
  EXPECT_DOUBLE_EQ(r.epoch_loss[0], 0.5 * (1.0 + 9.0) / 2.0);
}

TEST(SgdTest, ZeroNoiseInfiniteClipIsBitIdentical) {
  Rng rng(3);
  std::vector<std::vector<double>> targets(30, std::vector<double>(4));
  for (auto& t : targets) {
    for (double& v : t) v = rng.Gaussian();
  }
  ExampleGradientFn fn = [&](std::span<const double> p, size_t i, Rng*,
                             std::span<double> g) {
    double loss = 0.0;
    for (size_t j = 0; j < p.size(); ++j) {
      const double d = p[j] - targets[i][j];
      g[j] += d * std::abs(d);
      loss += std::abs(d) * d * d / 3.0;
    }
    return loss;
  };
  // 30 examples in batches of 3 for 10 epochs: 100 steps.
  const TrainConfig cfg{.learning_rate = 0.05, .batch_size = 3, .epochs = 10,
                        .seed = 4};
  const SgdResult plain = RunSgd(std::vector<double>(4, 0.0), 30, fn, cfg,
                                 std::nullopt);
  const SgdResult priv = RunSgd(
      std::vector<double>(4, 0.0), 30, fn, cfg,
      PrivateAggregation{0.0, std::numeric_limits<double>::infinity()});
  EXPECT_EQ(plain.params, priv.params);
  EXPECT_EQ(plain.epoch_loss, priv.epoch_loss);
}

}  // namespace
}  // namespace odmia
