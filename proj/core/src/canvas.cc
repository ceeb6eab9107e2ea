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

#include "odmia/canvas.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace odmia {
namespace {

// First pixel index whose centre is >= edge.
int FirstCovered(double edge) {
  return static_cast<int>(std::ceil(edge - 0.5));
}

void FillRect(Canvas& canvas, double left, double top, double right,
              double bottom, double value, Accumulation accumulation) {
  const int s = canvas.size();
  const int x_begin = std::clamp(FirstCovered(left), 0, s);
  const int x_end = std::clamp(FirstCovered(right), 0, s);
  const int y_begin = std::clamp(FirstCovered(top), 0, s);
  const int y_end = std::clamp(FirstCovered(bottom), 0, s);
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) {
      double& p = canvas.at(x, y);
      p = accumulation == Accumulation::kMax ? std::max(p, value) : p + value;
    }
  }
}

}  // namespace

Canvas::Canvas(int size, std::vector<double> pixels)
    : size_(size), pixels_(std::move(pixels)) {
  assert(pixels_.size() == Area(size));
}

double Canvas::Total() const {
  double total = 0.0;
  for (double p : pixels_) total += p;
  return total;
}

double Canvas::Max() const {
  double m = 0.0;
  for (double p : pixels_) m = std::max(m, p);
  return m;
}

absl::Status ValidateCanvasConfig(const CanvasConfig& config) {
  if (config.size <= 0) {
    return absl::InvalidArgumentError("canvas size must be positive");
  }
  if (!(config.uniform_fraction > 0.0 && config.uniform_fraction <= 1.0)) {
    return absl::InvalidArgumentError("uniform_fraction must be in (0, 1]");
  }
  if (config.uniform_fraction * config.size < 1.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "uniform box side ", config.uniform_fraction * config.size,
        " px is below one pixel"));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> RescaleScore(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("score ", s, " outside the rescaling domain [0, 1]"));
  }
  if (s == 1.0) return kRescaleCap;
  return -std::log1p(-s);
}

Canvas Render(const DetectionSet& detections, const CanvasConfig& config) {
  Canvas canvas(config.size);
  const double size = config.size;
  const double sx = size / detections.width;
  const double sy = size / detections.height;
  const double half_side = 0.5 * config.uniform_fraction * size;

  for (const ScoredBox& b : detections.boxes) {
    double value = b.score;
    if (config.rescale_scores) {
      value = b.score >= 1.0 ? kRescaleCap : -std::log1p(-b.score);
    }
    if (config.box_mode == BoxMode::kOriginal) {
      FillRect(canvas, b.box.x0 * sx, b.box.y0 * sy, b.box.x1 * sx,
               b.box.y1 * sy, value, config.accumulation);
    } else {
      const double cx = b.box.CenterX() * sx;
      const double cy = b.box.CenterY() * sy;
      FillRect(canvas, cx - half_side, cy - half_side, cx + half_side,
               cy + half_side, value, config.accumulation);
    }
  }
  return canvas;
}

Canvas Augment(const Canvas& canvas, Transform transform) {
  const int s = canvas.size();
  Canvas out(s);
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      const double v = canvas.at(x, y);
      switch (transform) {
        case Transform::kHFlip:
          out.at(s - 1 - x, y) = v;
          break;
        case Transform::kVFlip:
          out.at(x, s - 1 - y) = v;
          break;
        case Transform::kRot90:
          out.at(y, s - 1 - x) = v;
          break;
        case Transform::kRot180:
          out.at(s - 1 - x, s - 1 - y) = v;
          break;
        case Transform::kRot270:
          out.at(s - 1 - y, x) = v;
          break;
      }
    }
  }
  return out;
}

Transform Inverse(Transform transform) {
  switch (transform) {
    case Transform::kRot90:
      return Transform::kRot270;
    case Transform::kRot270:
      return Transform::kRot90;
    default:
      return transform;
  }
}

std::string_view TransformName(Transform transform) {
  switch (transform) {
    case Transform::kHFlip:
      return "hflip";
    case Transform::kVFlip:
      return "vflip";
    case Transform::kRot90:
      return "rot90";
    case Transform::kRot180:
      return "rot180";
    case Transform::kRot270:
      return "rot270";
  }
  return "";
}

absl::StatusOr<Transform> ParseTransform(std::string_view name) {
  for (Transform t : {Transform::kHFlip, Transform::kVFlip, Transform::kRot90,
                      Transform::kRot180, Transform::kRot270}) {
    if (TransformName(t) == name) return t;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown transform '", std::string(name), "'"));
}

}  // namespace odmia
