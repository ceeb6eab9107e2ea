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

#include "odmia/types.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace odmia {
namespace {

bool InUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

absl::Status ValidateBox(const BBox& box) {
  if (!std::isfinite(box.x0) || !std::isfinite(box.y0) ||
      !std::isfinite(box.x1) || !std::isfinite(box.y1)) {
    return absl::InvalidArgumentError("box coordinates must be finite");
  }
  if (box.x0 > box.x1 || box.y0 > box.y1) {
    return absl::InvalidArgumentError(
        absl::StrCat("box corners out of order: (", box.x0, ", ", box.y0,
                     ") - (", box.x1, ", ", box.y1, ")"));
  }
  return absl::OkStatus();
}

absl::Status ValidateScoredBox(const ScoredBox& box) {
  if (absl::Status s = ValidateBox(box.box); !s.ok()) return s;
  if (!InUnitInterval(box.score)) {
    return absl::InvalidArgumentError(
        absl::StrCat("score ", box.score, " outside [0, 1]"));
  }
  return absl::OkStatus();
}

absl::Status ValidatePostprocessConfig(const PostprocessConfig& config) {
  if (!InUnitInterval(config.score_threshold)) {
    return absl::InvalidArgumentError("score_threshold must be in [0, 1]");
  }
  if (!InUnitInterval(config.nms_threshold)) {
    return absl::InvalidArgumentError("nms_threshold must be in [0, 1]");
  }
  if (config.rpn_nms_threshold && !InUnitInterval(*config.rpn_nms_threshold)) {
    return absl::InvalidArgumentError("rpn_nms_threshold must be in [0, 1]");
  }
  if (config.head_nms_threshold &&
      !InUnitInterval(*config.head_nms_threshold)) {
    return absl::InvalidArgumentError("head_nms_threshold must be in [0, 1]");
  }
  return absl::OkStatus();
}

absl::Status ValidateDetectionSet(const DetectionSet& set) {
  if (set.width <= 0 || set.height <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("image ", set.image_id, ": dimensions must be positive"));
  }
  for (size_t i = 0; i < set.boxes.size(); ++i) {
    if (absl::Status s = ValidateScoredBox(set.boxes[i]); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "image ", set.image_id, " box ", i, ": ", s.message()));
    }
  }
  return absl::OkStatus();
}

std::string_view LabelName(MembershipLabel label) {
  return label == MembershipLabel::kIn ? "in" : "out";
}

std::string_view SourceName(RecordSource source) {
  return source == RecordSource::kTarget ? "target" : "shadow";
}

}  // namespace odmia
