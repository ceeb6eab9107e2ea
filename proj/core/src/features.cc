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

#include "odmia/features.h"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace odmia {

FeatureVector Vectorize(const DetectionSet& detections, int n_max) {
  assert(n_max >= 1);
  const auto& boxes = detections.boxes;
  std::vector<size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return boxes[a].score > boxes[b].score;
  });

  FeatureVector out;
  out.values.assign(static_cast<size_t>(n_max) * 5, 0.0);
  const double w = detections.width;
  const double h = detections.height;
  const size_t n = std::min(order.size(), static_cast<size_t>(n_max));
  for (size_t i = 0; i < n; ++i) {
    const ScoredBox& b = boxes[order[i]];
    double* slot = out.values.data() + 5 * i;
    slot[0] = b.box.x0 / w;
    slot[1] = b.box.y0 / h;
    slot[2] = b.box.x1 / w;
    slot[3] = b.box.y1 / h;
    slot[4] = b.score;
  }
  return out;
}

}  // namespace odmia
