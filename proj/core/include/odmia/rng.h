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

// The only source of randomness in odmia.
//
// Stream algorithm: xoshiro256** (Blackman & Vigna), state initialised by
// four successive SplitMix64 outputs of the seed. Derived distributions are
// implemented here rather than taken from <random> because the standard
// distributions are implementation-defined and would break golden files
// across toolchains:
//
//   Uniform()      (next() >> 11) * 2^-53, in [0, 1).
//   UniformInt(n)  rejection sampling on the top bits, unbiased.
//   Gaussian()     Box-Muller, u1 = 1 - Uniform() in (0, 1]; both outputs
//                  of a pair are used, cos-branch first.
//   Gamma(a)       Marsaglia-Tsang; a < 1 via the Gamma(a + 1) * U^(1/a)
//                  boost.
//   Beta(a, b)     X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
//
// Child streams are derived from (seed, label) only, never from the
// parent's position, so forks are stable no matter how much of the parent
// stream has been consumed.

#ifndef ODMIA_RNG_H_
#define ODMIA_RNG_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace odmia {

// SplitMix64 finaliser applied to `x`.
uint64_t Mix64(uint64_t x);

// 64-bit FNV-1a.
uint64_t HashLabel(std::string_view label);

class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t seed() const { return seed_; }

  uint64_t NextU64();
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  double Gaussian();
  double Gamma(double shape);
  double Beta(double alpha, double beta);

  // Independent child stream keyed by `label`.
  Rng Fork(std::string_view label) const;
  Rng Fork(uint64_t index) const;
  uint64_t ForkSeed(std::string_view label) const;

  // Fisher-Yates using UniformInt.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t seed_;
  std::array<uint64_t, 4> state_;
  std::optional<double> cached_gaussian_;
};

}  // namespace odmia

#endif  // ODMIA_RNG_H_
