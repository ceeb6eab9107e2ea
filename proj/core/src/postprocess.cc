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

#include "odmia/postprocess.h"

#include <algorithm>
#include <numeric>

namespace odmia {

double Iou(const BBox& a, const BBox& b) {
  const double area_a = a.Area();
  const double area_b = b.Area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double iou = inter / (area_a + area_b - inter);
  return std::clamp(iou, 0.0, 1.0);
}

std::vector<ScoredBox> Nms(std::span<const ScoredBox> boxes,
                           double threshold) {
  std::vector<size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return boxes[a].score > boxes[b].score;
  });

  std::vector<ScoredBox> kept;
  std::vector<bool> suppressed(boxes.size(), false);
  for (size_t i = 0; i < order.size(); ++i) {
    if (suppressed[i]) continue;
    const ScoredBox& selected = boxes[order[i]];
    kept.push_back(selected);
    if (threshold >= 1.0) continue;
    for (size_t j = i + 1; j < order.size(); ++j) {
      if (!suppressed[j] && Iou(selected.box, boxes[order[j]].box) > threshold) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

std::vector<ScoredBox> ScoreFilter(std::span<const ScoredBox> boxes,
                                   double threshold) {
  std::vector<ScoredBox> kept;
  kept.reserve(boxes.size());
  std::copy_if(boxes.begin(), boxes.end(), std::back_inserter(kept),
               [threshold](const ScoredBox& b) { return b.score >= threshold; });
  return kept;
}

DetectionSet Harvest(const DetectionSet& raw, const PostprocessConfig& config) {
  DetectionSet out;
  out.image_id = raw.image_id;
  out.width = raw.width;
  out.height = raw.height;
  out.harvested_with = config;

  const double w = raw.width;
  const double h = raw.height;
  std::vector<ScoredBox> clamped = raw.boxes;
  for (ScoredBox& b : clamped) {
    b.box.x0 = std::clamp(b.box.x0, 0.0, w);
    b.box.x1 = std::clamp(b.box.x1, 0.0, w);
    b.box.y0 = std::clamp(b.box.y0, 0.0, h);
    b.box.y1 = std::clamp(b.box.y1, 0.0, h);
  }
  out.boxes = Nms(ScoreFilter(clamped, config.score_threshold),
                  config.nms_threshold);
  return out;
}

}  // namespace odmia
