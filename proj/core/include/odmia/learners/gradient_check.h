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

#ifndef ODMIA_LEARNERS_GRADIENT_CHECK_H_
#define ODMIA_LEARNERS_GRADIENT_CHECK_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "odmia/learners/classifier.h"

namespace odmia {

struct GradientCheckResult {
  double max_relative_error = 0.0;
  int checked = 0;
  // Parameters whose +/- epsilon evaluations landed on different linear
  // pieces (a ReLU sign or pooling winner flipped) and were replaced.
  int skipped = 0;
};

// Compares the analytic cross-entropy gradient of `model` at `sample`
// against central differences (L(p + eps) - L(p - eps)) / (2 eps) on
// `num_params` distinct parameters drawn with `seed` (all parameters when
// the model has fewer). Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
// Dropout masks, when the spec has dropout, are frozen across the
// evaluations of one check. epsilon must lie in [1e-7, 1e-3].
absl::StatusOr<GradientCheckResult> GradientCheck(const CnnModel& model,
                                                  const LabeledCanvas& sample,
                                                  double epsilon,
                                                  uint64_t seed,
                                                  int num_params = 200);

}  // namespace odmia

#endif  // ODMIA_LEARNERS_GRADIENT_CHECK_H_
