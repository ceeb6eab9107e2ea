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

#include "odmia/learners/cnn.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace odmia {
namespace {

// Per-example activations kept for the backward pass.
struct ConvCache {
  std::vector<double> input;   // in_channels x size x size
  std::vector<double> pre;     // out_channels x size x size
  std::vector<double> pooled;  // out_channels x pooled x pooled
  std::vector<uint32_t> argmax;
};

struct FcCache {
  std::vector<double> input;  // after dropout
  std::vector<double> mask;   // dropout multipliers, empty when disabled
  std::vector<double> pre;
};

void HashInto(uint64_t& h, uint64_t v) {
  h ^= Mix64(v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

double Activate(Activation a, double v) {
  return a == Activation::kReLU ? (v > 0.0 ? v : 0.0) : v;
}

double ActivationSlope(Activation a, double v) {
  return a == Activation::kReLU ? (v > 0.0 ? 1.0 : 0.0) : 1.0;
}

void ConvForward(std::span<const double> w, std::span<const double> b,
                 const std::vector<double>& in, int in_ch, int out_ch, int s,
                 int k, std::vector<double>& out) {
  const int pad = k / 2;
  const size_t plane = static_cast<size_t>(s) * s;
  out.assign(static_cast<size_t>(out_ch) * plane, 0.0);
  for (int oc = 0; oc < out_ch; ++oc) {
    double* o = out.data() + oc * plane;
    std::fill(o, o + plane, b[oc]);
    for (int ic = 0; ic < in_ch; ++ic) {
      const double* src = in.data() + ic * plane;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy), y1 = std::min(s, s - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx), x1 = std::min(s, s - dx);
          const double wv = w[((oc * in_ch + ic) * k + ky) * k + kx];
          if (wv == 0.0) continue;
          for (int y = y0; y < y1; ++y) {
            double* orow = o + y * s;
            const double* irow = src + (y + dy) * s + dx;
            for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
          }
        }
      }
    }
  }
}

// Accumulates weight/bias gradients and, when `din` is non-null, the input
// gradient of a same-padded convolution.
void ConvBackward(std::span<const double> w, const std::vector<double>& in,
                  const std::vector<double>& dout, int in_ch, int out_ch,
                  int s, int k, std::span<double> dw, std::span<double> db,
                  std::vector<double>* din) {
  const int pad = k / 2;
  const size_t plane = static_cast<size_t>(s) * s;
  if (din != nullptr) din->assign(static_cast<size_t>(in_ch) * plane, 0.0);
  for (int oc = 0; oc < out_ch; ++oc) {
    const double* g = dout.data() + oc * plane;
    double bias_grad = 0.0;
    for (size_t i = 0; i < plane; ++i) bias_grad += g[i];
    db[oc] += bias_grad;
    for (int ic = 0; ic < in_ch; ++ic) {
      const double* src = in.data() + ic * plane;
      double* dsrc = din != nullptr ? din->data() + ic * plane : nullptr;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy), y1 = std::min(s, s - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx), x1 = std::min(s, s - dx);
          const size_t widx = ((oc * in_ch + ic) * k + ky) * k + kx;
          const double wv = w[widx];
          double acc = 0.0;
          for (int y = y0; y < y1; ++y) {
            const double* grow = g + y * s;
            const double* irow = src + (y + dy) * s + dx;
            for (int x = x0; x < x1; ++x) acc += grow[x] * irow[x];
            if (dsrc != nullptr) {
              double* drow = dsrc + (y + dy) * s + dx;
              for (int x = x0; x < x1; ++x) drow[x] += wv * grow[x];
            }
          }
          dw[widx] += acc;
        }
      }
    }
  }
}

}  // namespace

absl::Status ValidateCnnSpec(const CnnSpec& spec) {
  if (spec.input_size <= 0) {
    return absl::InvalidArgumentError("input_size must be positive");
  }
  if (spec.kernel_size <= 0 || spec.kernel_size % 2 == 0) {
    return absl::InvalidArgumentError("kernel_size must be a positive odd int");
  }
  if (spec.fc_units.empty() || spec.fc_units.back() != 2) {
    return absl::InvalidArgumentError("final FC layer must have 2 units");
  }
  for (int c : spec.conv_channels) {
    if (c <= 0) return absl::InvalidArgumentError("conv channels must be > 0");
  }
  for (int u : spec.fc_units) {
    if (u <= 0) return absl::InvalidArgumentError("FC units must be > 0");
  }
  if (!(spec.dropout_rate >= 0.0 && spec.dropout_rate < 1.0)) {
    return absl::InvalidArgumentError("dropout_rate must be in [0, 1)");
  }
  int s = spec.input_size;
  for (size_t i = 0; i < spec.conv_channels.size(); ++i) {
    if (spec.pool == Pooling::kMax2) s /= 2;
    if (s <= 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input_size ", spec.input_size, " too small for ",
          spec.conv_channels.size(), " pooled conv layers"));
    }
  }
  return absl::OkStatus();
}

CnnNetwork::CnnNetwork(const CnnSpec& spec) : spec_(spec) {
  size_t offset = 0;
  int channels = 1;
  int size = spec.input_size;
  const int k = spec.kernel_size;
  for (int out : spec.conv_channels) {
    ConvLayer layer;
    layer.in_channels = channels;
    layer.out_channels = out;
    layer.size = size;
    layer.pooled_size = spec.pool == Pooling::kMax2 ? size / 2 : size;
    layer.weight_offset = offset;
    offset += static_cast<size_t>(out) * channels * k * k;
    layer.bias_offset = offset;
    offset += out;
    conv_.push_back(layer);
    channels = out;
    size = layer.pooled_size;
  }
  int units = channels * size * size;
  for (int out : spec.fc_units) {
    FcLayer layer;
    layer.in_units = units;
    layer.out_units = out;
    layer.weight_offset = offset;
    offset += static_cast<size_t>(out) * units;
    layer.bias_offset = offset;
    offset += out;
    fc_.push_back(layer);
    units = out;
  }
  parameter_count_ = offset;
}

absl::StatusOr<CnnNetwork> CnnNetwork::Create(const CnnSpec& spec) {
  if (absl::Status s = ValidateCnnSpec(spec); !s.ok()) return s;
  return CnnNetwork(spec);
}

size_t CnnNetwork::input_length() const {
  return static_cast<size_t>(spec_.input_size) * spec_.input_size;
}

std::vector<double> CnnNetwork::Initialize(Rng& rng) const {
  std::vector<double> params(parameter_count_, 0.0);
  const int k = spec_.kernel_size;
  for (const ConvLayer& layer : conv_) {
    const double limit = std::sqrt(6.0 / (layer.in_channels * k * k));
    const size_t n = static_cast<size_t>(layer.out_channels) *
                     layer.in_channels * k * k;
    for (size_t i = 0; i < n; ++i) {
      params[layer.weight_offset + i] = limit * (2.0 * rng.Uniform() - 1.0);
    }
  }
  for (size_t l = 0; l + 1 < fc_.size(); ++l) {
    const FcLayer& layer = fc_[l];
    const double limit = std::sqrt(6.0 / layer.in_units);
    const size_t n = static_cast<size_t>(layer.out_units) * layer.in_units;
    for (size_t i = 0; i < n; ++i) {
      params[layer.weight_offset + i] = limit * (2.0 * rng.Uniform() - 1.0);
    }
  }
  return params;
}

Probabilities CnnNetwork::Predict(std::span<const double> params,
                                  std::span<const double> input) const {
  const int k = spec_.kernel_size;
  std::vector<double> act(input.begin(), input.end());
  std::vector<double> pre;
  for (const ConvLayer& layer : conv_) {
    ConvForward(params.subspan(layer.weight_offset),
                params.subspan(layer.bias_offset), act, layer.in_channels,
                layer.out_channels, layer.size, k, pre);
    for (double& v : pre) v = Activate(spec_.activation, v);
    if (spec_.pool == Pooling::kMax2) {
      const int s = layer.size, ps = layer.pooled_size;
      act.assign(static_cast<size_t>(layer.out_channels) * ps * ps, 0.0);
      for (int c = 0; c < layer.out_channels; ++c) {
        const double* src = pre.data() + static_cast<size_t>(c) * s * s;
        double* dst = act.data() + static_cast<size_t>(c) * ps * ps;
        for (int py = 0; py < ps; ++py) {
          for (int px = 0; px < ps; ++px) {
            const double* p = src + (2 * py) * s + 2 * px;
            dst[py * ps + px] =
                std::max(std::max(p[0], p[1]), std::max(p[s], p[s + 1]));
          }
        }
      }
    } else {
      act.swap(pre);
    }
  }
  for (size_t l = 0; l < fc_.size(); ++l) {
    const FcLayer& layer = fc_[l];
    std::vector<double> z(layer.out_units);
    for (int o = 0; o < layer.out_units; ++o) {
      const double* wrow = params.data() + layer.weight_offset +
                           static_cast<size_t>(o) * layer.in_units;
      double acc = params[layer.bias_offset + o];
      for (int i = 0; i < layer.in_units; ++i) acc += wrow[i] * act[i];
      z[o] = l + 1 < fc_.size() ? Activate(spec_.activation, acc) : acc;
    }
    act.swap(z);
  }
  Probabilities out;
  SoftmaxCrossEntropy(act.data(), 0, &out, nullptr);
  return out;
}

double CnnNetwork::LossAndGradient(std::span<const double> params,
                                   std::span<const double> input,
                                   MembershipLabel label, Rng* dropout,
                                   std::span<double> grad,
                                   uint64_t* pattern) const {
  const int k = spec_.kernel_size;
  const bool want_grad = !grad.empty();
  uint64_t hash = 0x12345678ULL;

  // Forward.
  std::vector<ConvCache> conv_cache(conv_.size());
  std::vector<double> act(input.begin(), input.end());
  for (size_t l = 0; l < conv_.size(); ++l) {
    const ConvLayer& layer = conv_[l];
    ConvCache& cache = conv_cache[l];
    cache.input = std::move(act);
    ConvForward(params.subspan(layer.weight_offset),
                params.subspan(layer.bias_offset), cache.input,
                layer.in_channels, layer.out_channels, layer.size, k,
                cache.pre);
    std::vector<double> activated(cache.pre.size());
    for (size_t i = 0; i < cache.pre.size(); ++i) {
      activated[i] = Activate(spec_.activation, cache.pre[i]);
      if (pattern != nullptr && spec_.activation == Activation::kReLU) {
        HashInto(hash, cache.pre[i] > 0.0);
      }
    }
    if (spec_.pool == Pooling::kMax2) {
      const int s = layer.size, ps = layer.pooled_size;
      const size_t n = static_cast<size_t>(layer.out_channels) * ps * ps;
      cache.pooled.assign(n, 0.0);
      cache.argmax.assign(n, 0);
      for (int c = 0; c < layer.out_channels; ++c) {
        const size_t base = static_cast<size_t>(c) * s * s;
        for (int py = 0; py < ps; ++py) {
          for (int px = 0; px < ps; ++px) {
            const uint32_t cand[4] = {
                static_cast<uint32_t>(base + (2 * py) * s + 2 * px),
                static_cast<uint32_t>(base + (2 * py) * s + 2 * px + 1),
                static_cast<uint32_t>(base + (2 * py + 1) * s + 2 * px),
                static_cast<uint32_t>(base + (2 * py + 1) * s + 2 * px + 1)};
            uint32_t best = cand[0];
            for (int q = 1; q < 4; ++q) {
              if (activated[cand[q]] > activated[best]) best = cand[q];
            }
            const size_t out_idx = static_cast<size_t>(c) * ps * ps + py * ps + px;
            cache.pooled[out_idx] = activated[best];
            cache.argmax[out_idx] = best;
            if (pattern != nullptr) HashInto(hash, best);
          }
        }
      }
      act = cache.pooled;
    } else {
      act = std::move(activated);
    }
  }

  std::vector<FcCache> fc_cache(fc_.size());
  for (size_t l = 0; l < fc_.size(); ++l) {
    const FcLayer& layer = fc_[l];
    FcCache& cache = fc_cache[l];
    if (dropout != nullptr && spec_.dropout_rate > 0.0) {
      const double keep_scale = 1.0 / (1.0 - spec_.dropout_rate);
      cache.mask.resize(act.size());
      for (size_t i = 0; i < act.size(); ++i) {
        const bool keep = dropout->Uniform() >= spec_.dropout_rate;
        cache.mask[i] = keep ? keep_scale : 0.0;
        act[i] *= cache.mask[i];
        if (pattern != nullptr) HashInto(hash, keep);
      }
    }
    cache.input = std::move(act);
    cache.pre.resize(layer.out_units);
    act.assign(layer.out_units, 0.0);
    for (int o = 0; o < layer.out_units; ++o) {
      const double* wrow = params.data() + layer.weight_offset +
                           static_cast<size_t>(o) * layer.in_units;
      double acc = params[layer.bias_offset + o];
      for (int i = 0; i < layer.in_units; ++i) acc += wrow[i] * cache.input[i];
      cache.pre[o] = acc;
      const bool last = l + 1 == fc_.size();
      act[o] = last ? acc : Activate(spec_.activation, acc);
      if (!last && pattern != nullptr &&
          spec_.activation == Activation::kReLU) {
        HashInto(hash, acc > 0.0);
      }
    }
  }

  double dlogits[2];
  const double loss = SoftmaxCrossEntropy(act.data(), ClassIndex(label),
                                          nullptr, dlogits);
  if (pattern != nullptr) *pattern = hash;
  if (!want_grad) return loss;

  // Backward through the FC stack.
  std::vector<double> delta(dlogits, dlogits + 2);  // dLoss/dpre of layer l
  std::vector<double> dinput;
  for (size_t l = fc_.size(); l-- > 0;) {
    const FcLayer& layer = fc_[l];
    const FcCache& cache = fc_cache[l];
    dinput.assign(layer.in_units, 0.0);
    for (int o = 0; o < layer.out_units; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const size_t row = layer.weight_offset +
                         static_cast<size_t>(o) * layer.in_units;
      const double* wrow = params.data() + row;
      double* gw = grad.data() + row;
      for (int i = 0; i < layer.in_units; ++i) {
        gw[i] += d * cache.input[i];
        dinput[i] += d * wrow[i];
      }
      grad[layer.bias_offset + o] += d;
    }
    if (!cache.mask.empty()) {
      for (size_t i = 0; i < dinput.size(); ++i) dinput[i] *= cache.mask[i];
    }
    if (l > 0) {
      const FcCache& prev = fc_cache[l - 1];
      delta.assign(dinput.size(), 0.0);
      for (size_t i = 0; i < dinput.size(); ++i) {
        delta[i] = dinput[i] * ActivationSlope(spec_.activation, prev.pre[i]);
      }
    }
  }

  // dinput now holds dLoss/d(flattened conv output). Walk the convs back.
  std::vector<double> dpooled = std::move(dinput);
  for (size_t l = conv_.size(); l-- > 0;) {
    const ConvLayer& layer = conv_[l];
    const ConvCache& cache = conv_cache[l];
    std::vector<double> dpre(cache.pre.size(), 0.0);
    if (spec_.pool == Pooling::kMax2) {
      for (size_t i = 0; i < dpooled.size(); ++i) {
        dpre[cache.argmax[i]] += dpooled[i];
      }
    } else {
      dpre = std::move(dpooled);
    }
    for (size_t i = 0; i < dpre.size(); ++i) {
      dpre[i] *= ActivationSlope(spec_.activation, cache.pre[i]);
    }
    std::vector<double> dprev;
    ConvBackward(params.subspan(layer.weight_offset), cache.input, dpre,
                 layer.in_channels, layer.out_channels, layer.size, k,
                 grad.subspan(layer.weight_offset),
                 grad.subspan(layer.bias_offset), l > 0 ? &dprev : nullptr);
    dpooled = std::move(dprev);
  }
  return loss;
}

}  // namespace odmia
