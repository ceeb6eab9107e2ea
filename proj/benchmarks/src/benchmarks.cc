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

#include <benchmark/benchmark.h>

#include <vector>

#include "odmia/canvas.h"
#include "odmia/learners/cnn.h"
#include "odmia/learners/gbt.h"
#include "odmia/postprocess.h"
#include "odmia/privacy.h"
#include "odmia/rng.h"
#include "odmia/simulator.h"

namespace odmia {
namespace {

std::vector<ScoredBox> RandomBoxes(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<ScoredBox> boxes;
  for (int i = 0; i < n; ++i) {
    const double x = 250 * rng.Uniform(), y = 250 * rng.Uniform();
    boxes.push_back({{x, y, x + 10 + 40 * rng.Uniform(),
                      y + 10 + 40 * rng.Uniform()},
                     rng.Uniform()});
  }
  return boxes;
}

void BM_Nms(benchmark::State& state) {
  const std::vector<ScoredBox> boxes =
      RandomBoxes(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(Nms(boxes, 0.45));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Nms)->Arg(10)->Arg(100)->Arg(1000);

void BM_Render(benchmark::State& state) {
  Rng rng(2);
  const DetectionSet set = SampleDetections(LeakyPreset(),
                                            MembershipLabel::kIn, "x", rng);
  DetectionSet dense = set;
  dense.boxes = RandomBoxes(50, 3);
  const CanvasConfig config{.size = static_cast<int>(state.range(0)),
                            .box_mode = state.range(1) ? BoxMode::kOriginal
                                                       : BoxMode::kUniform};
  for (auto _ : state) benchmark::DoNotOptimize(Render(dense, config));
}
BENCHMARK(BM_Render)->Args({32, 0})->Args({32, 1})->Args({300, 0})->Args(
    {300, 1});

void BM_CnnForwardBackward(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const CnnSpec spec{.conv_channels = {8, 16}, .fc_units = {32, 2},
                     .input_size = size};
  const CnnNetwork network = *CnnNetwork::Create(spec);
  Rng rng(4);
  const std::vector<double> params = network.Initialize(rng);
  std::vector<double> input(network.input_length());
  for (double& v : input) v = rng.Uniform() < 0.2 ? rng.Uniform() : 0.0;
  std::vector<double> grad(params.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(network.LossAndGradient(
        params, input, MembershipLabel::kIn, nullptr, grad));
  }
}
BENCHMARK(BM_CnnForwardBackward)->Arg(32)->Arg(64);

void BM_CnnPredict(benchmark::State& state) {
  const CnnSpec spec{.conv_channels = {8, 16}, .fc_units = {32, 2},
                     .input_size = 32};
  const CnnNetwork network = *CnnNetwork::Create(spec);
  Rng rng(5);
  const std::vector<double> params = network.Initialize(rng);
  std::vector<double> input(network.input_length(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(network.Predict(params, input));
}
BENCHMARK(BM_CnnPredict);

void BM_GbtTrain(benchmark::State& state) {
  Rng rng(6);
  std::vector<LabeledVector> data;
  for (int i = 0; i < state.range(0); ++i) {
    LabeledVector v{{}, i % 2 ? MembershipLabel::kIn : MembershipLabel::kOut};
    for (int j = 0; j < 100; ++j) {
      v.features.values.push_back(rng.Gaussian() + 0.3 * (i % 2));
    }
    data.push_back(std::move(v));
  }
  const GbtSpec spec{.max_depth = 5, .n_estimators = 20};
  for (auto _ : state) benchmark::DoNotOptimize(TrainGbt(spec, data));
}
BENCHMARK(BM_GbtTrain)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_PrivacyLoss(benchmark::State& state) {
  PrivacyParams params{.noise_scale = 1.0, .epochs = 1.0};
  for (auto _ : state) {
    params.epochs += 1e-9;
    benchmark::DoNotOptimize(PrivacyLoss(params));
  }
}
BENCHMARK(BM_PrivacyLoss);

}  // namespace
}  // namespace odmia

BENCHMARK_MAIN();
