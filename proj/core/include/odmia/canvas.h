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

// The canvas method: a detection set is drawn onto an empty square
// intensity grid, one filled rectangle per predicted box, and the grid is
// what the attack classifier sees.
//
// Coordinates. Pixel (x, y) has column x and row y, row 0 at the top, and
// covers [x, x+1) x [y, y+1) in canvas units. A pixel belongs to a
// rectangle when its centre (x + 0.5, y + 0.5) lies in the half-open
// rectangle [left, right) x [top, bottom).
//
// Box placement. Image coordinates are scaled by S / width horizontally
// and S / height vertically. In kOriginal mode the scaled box is drawn
// as-is; in kUniform mode a square of side uniform_fraction * S is drawn
// around the scaled box centre, so every box covers the same area before
// clipping.
//
// Intensity is the box score, or RescaleScore(score) when rescaling is on.
// Overlaps combine by max (default) or sum.

#ifndef ODMIA_CANVAS_H_
#define ODMIA_CANVAS_H_

#include <cstddef>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/types.h"

namespace odmia {

// -log(1 - s) at s = 1 would be infinite; scores of exactly 1 map to
// -log(2^-53) = 53 ln 2, the value for the largest double below 1.
inline constexpr double kRescaleCap = 53.0 * std::numbers::ln2;  // 36.7368

class Canvas {
 public:
  Canvas() = default;
  explicit Canvas(int size) : size_(size), pixels_(Area(size), 0.0) {}
  Canvas(int size, std::vector<double> pixels);

  int size() const { return size_; }
  double at(int x, int y) const { return pixels_[Index(x, y)]; }
  double& at(int x, int y) { return pixels_[Index(x, y)]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> mutable_pixels() { return pixels_; }

  double Total() const;
  double Max() const;

  friend bool operator==(const Canvas&, const Canvas&) = default;

 private:
  static size_t Area(int size) {
    return static_cast<size_t>(size) * static_cast<size_t>(size);
  }
  size_t Index(int x, int y) const {
    return static_cast<size_t>(y) * static_cast<size_t>(size_) +
           static_cast<size_t>(x);
  }

  int size_ = 0;
  std::vector<double> pixels_;
};

enum class BoxMode { kOriginal, kUniform };
enum class Accumulation { kMax, kSum };

struct CanvasConfig {
  int size = 300;
  BoxMode box_mode = BoxMode::kUniform;
  double uniform_fraction = 0.1;
  bool rescale_scores = true;
  Accumulation accumulation = Accumulation::kMax;

  friend bool operator==(const CanvasConfig&, const CanvasConfig&) = default;
};

absl::Status ValidateCanvasConfig(const CanvasConfig& config);

// s -> -log(1 - s), natural log. Scores outside [0, 1] (or NaN) are a
// domain error; s == 1 returns kRescaleCap.
absl::StatusOr<double> RescaleScore(double s);

// Renders a harvested detection set. Scores must already be validated.
Canvas Render(const DetectionSet& detections, const CanvasConfig& config);

// Exact pixel permutations. Rotations are counter-clockwise as displayed
// (row 0 at the top):
//   kHFlip   out(x, y) = in(S-1-x, y)
//   kVFlip   out(x, y) = in(x, S-1-y)
//   kRot90   out(y, S-1-x) = in(x, y)
//   kRot180  out(S-1-x, S-1-y) = in(x, y)
//   kRot270  out(S-1-y, x) = in(x, y)
enum class Transform { kHFlip, kVFlip, kRot90, kRot180, kRot270 };

Canvas Augment(const Canvas& canvas, Transform transform);
Transform Inverse(Transform transform);

std::string_view TransformName(Transform transform);
absl::StatusOr<Transform> ParseTransform(std::string_view name);

}  // namespace odmia

#endif  // ODMIA_CANVAS_H_
