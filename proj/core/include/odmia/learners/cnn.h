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

// Shallow convolutional attack classifier over single-channel canvases.
//
// Architecture: for each entry of conv_channels, a kernel_size x kernel_size
// convolution with zero "same" padding and stride 1, the activation, then
// 2x2 stride-2 max pooling (floor on odd sizes). The feature map is
// flattened into the fully connected stack; every FC layer sees inverted
// dropout on its input while training and applies the activation to its
// output, except the last, whose two logits go through a softmax to give
// (p_in, p_out).
//
// Parameters live in one flat vector: per conv layer the weights
// [out][in][ky][kx] then biases, per FC layer the weights [out][in] then
// biases. Initialisation is He-uniform, U(-sqrt(6/fan_in), sqrt(6/fan_in)),
// with zero biases and an all-zero final layer, so an untrained network
// outputs exactly (0.5, 0.5).

#ifndef ODMIA_LEARNERS_CNN_H_
#define ODMIA_LEARNERS_CNN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/canvas.h"
#include "odmia/learners/common.h"
#include "odmia/rng.h"

namespace odmia {

enum class Activation { kReLU, kIdentity };
enum class Pooling { kMax2, kNone };

struct CnnSpec {
  std::vector<int> conv_channels = {64, 128};
  std::vector<int> fc_units = {128, 2};
  int kernel_size = 3;
  Pooling pool = Pooling::kMax2;
  Activation activation = Activation::kReLU;
  double dropout_rate = 0.0;
  int input_size = 300;

  friend bool operator==(const CnnSpec&, const CnnSpec&) = default;
};

absl::Status ValidateCnnSpec(const CnnSpec& spec);

// Shape bookkeeping and the forward/backward passes for one CnnSpec. Holds
// no parameters; callers pass the flat parameter vector explicitly.
class CnnNetwork {
 public:
  static absl::StatusOr<CnnNetwork> Create(const CnnSpec& spec);

  const CnnSpec& spec() const { return spec_; }
  size_t parameter_count() const { return parameter_count_; }
  size_t input_length() const;

  std::vector<double> Initialize(Rng& rng) const;

  // Inference: no dropout.
  Probabilities Predict(std::span<const double> params,
                        std::span<const double> input) const;

  // Cross-entropy loss of one example. Accumulates dLoss/dparams into
  // `grad` when it is non-empty. Dropout is applied when `dropout` is
  // non-null. When `pattern` is non-null it receives a hash of every
  // piecewise-linear decision taken (ReLU signs, pooling winners, dropout
  // masks); two evaluations with equal patterns lie on the same linear
  // piece of the network.
  double LossAndGradient(std::span<const double> params,
                         std::span<const double> input, MembershipLabel label,
                         Rng* dropout, std::span<double> grad,
                         uint64_t* pattern = nullptr) const;

 private:
  struct ConvLayer {
    int in_channels, out_channels, size, pooled_size;
    size_t weight_offset, bias_offset;
  };
  struct FcLayer {
    int in_units, out_units;
    size_t weight_offset, bias_offset;
  };

  explicit CnnNetwork(const CnnSpec& spec);

  CnnSpec spec_;
  std::vector<ConvLayer> conv_;
  std::vector<FcLayer> fc_;
  size_t parameter_count_ = 0;
};

}  // namespace odmia

#endif  // ODMIA_LEARNERS_CNN_H_
