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

#ifndef ODMIA_SPLIT_H_
#define ODMIA_SPLIT_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace odmia {

// Fractions are in the fixed order (target_in, target_out, shadow_in,
// shadow_out).
struct SplitSpec {
  uint64_t seed = 0;
  std::array<double, 4> fractions = {0.25, 0.25, 0.25, 0.25};
};

struct DatasetSplit {
  std::vector<std::string> target_in;
  std::vector<std::string> target_out;
  std::vector<std::string> shadow_in;
  std::vector<std::string> shadow_out;
};

// Partitions `ids` into four disjoint sets. Ids are sorted before the
// seeded shuffle so the result depends only on the id set and the seed.
// Counts use largest-remainder rounding; equal remainders go to the earlier
// split in the fixed order.
absl::StatusOr<DatasetSplit> SplitDataset(std::vector<std::string> ids,
                                          const SplitSpec& spec);

}  // namespace odmia

#endif  // ODMIA_SPLIT_H_
