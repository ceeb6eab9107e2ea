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

// Attacker-side harvesting of raw detector output.

#ifndef ODMIA_POSTPROCESS_H_
#define ODMIA_POSTPROCESS_H_

#include <span>
#include <vector>

#include "odmia/types.h"

namespace odmia {

// Intersection over union. Zero-area boxes always give 0.
double Iou(const BBox& a, const BBox& b);

// Greedy class-agnostic NMS. A candidate is suppressed when its IoU with
// an already selected box is strictly greater than `threshold`, so a
// threshold of 1.0 keeps every box. Output is in selection order
// (descending score, ties by input position).
std::vector<ScoredBox> Nms(std::span<const ScoredBox> boxes, double threshold);

// Keeps boxes with score >= threshold, order preserved.
std::vector<ScoredBox> ScoreFilter(std::span<const ScoredBox> boxes,
                                   double threshold);

// Clamps every box to [0, width] x [0, height], then applies ScoreFilter
// and Nms. The returned set records `config` in harvested_with.
DetectionSet Harvest(const DetectionSet& raw, const PostprocessConfig& config);

}  // namespace odmia

#endif  // ODMIA_POSTPROCESS_H_
