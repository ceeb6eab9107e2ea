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

// Domain types shared by every odmia module. Everything here is a plain
// value type: copyable, comparable, and safe to share across threads.

#ifndef ODMIA_TYPES_H_
#define ODMIA_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace odmia {

// Axis-aligned box in image pixel coordinates. (x0, y0) is the top-left
// corner and (x1, y1) the bottom-right corner; y grows downwards.
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double Width() const { return x1 - x0; }
  double Height() const { return y1 - y0; }
  double Area() const { return Width() * Height(); }
  double CenterX() const { return 0.5 * (x0 + x1); }
  double CenterY() const { return 0.5 * (y0 + y1); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Checks finiteness and corner ordering.
absl::Status ValidateBox(const BBox& box);

struct ScoredBox {
  BBox box;
  double score = 0.0;  // In [0, 1].
  std::optional<int> class_id;

  friend bool operator==(const ScoredBox&, const ScoredBox&) = default;
};

absl::Status ValidateScoredBox(const ScoredBox& box);

// Attacker-side harvesting thresholds. The two-stage thresholds are carried
// as metadata only; nothing in odmia simulates a region proposal network.
struct PostprocessConfig {
  double score_threshold = 0.01;
  double nms_threshold = 1.0;
  std::optional<double> rpn_nms_threshold;
  std::optional<double> head_nms_threshold;

  friend bool operator==(const PostprocessConfig&,
                         const PostprocessConfig&) = default;
};

absl::Status ValidatePostprocessConfig(const PostprocessConfig& config);

// All predictions a detector produced for one image.
struct DetectionSet {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<ScoredBox> boxes;
  // Set by Harvest(); records which thresholds produced this set.
  std::optional<PostprocessConfig> harvested_with;

  friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

// Validates dimensions and every box. Boxes are not required to lie inside
// the image: raw detector dumps routinely contain out-of-frame corners and
// clamping is Harvest()'s job.
absl::Status ValidateDetectionSet(const DetectionSet& set);

enum class MembershipLabel { kIn, kOut };
enum class RecordSource { kTarget, kShadow };

std::string_view LabelName(MembershipLabel label);   // "in" / "out"
std::string_view SourceName(RecordSource source);    // "target" / "shadow"

struct MembershipRecord {
  DetectionSet detections;
  MembershipLabel label = MembershipLabel::kOut;
  RecordSource source = RecordSource::kShadow;

  friend bool operator==(const MembershipRecord&,
                         const MembershipRecord&) = default;
};

}  // namespace odmia

#endif  // ODMIA_TYPES_H_
