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

#ifndef ODMIA_FEATURES_H_
#define ODMIA_FEATURES_H_

#include <vector>

#include "odmia/types.h"

namespace odmia {

inline constexpr int kDefaultMaxBoxes = 100;

// Flat (x0, y0, x1, y1, score) quintuples, zero padded to 5 * n_max.
struct FeatureVector {
  std::vector<double> values;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Boxes are ordered by descending score (stable), truncated to n_max and
// their coordinates divided by the image width/height. n_max must be >= 1.
FeatureVector Vectorize(const DetectionSet& detections,
                        int n_max = kDefaultMaxBoxes);

}  // namespace odmia

#endif  // ODMIA_FEATURES_H_
