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

#include "odmia/split.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "odmia/rng.h"

namespace odmia {

absl::StatusOr<DatasetSplit> SplitDataset(std::vector<std::string> ids,
                                          const SplitSpec& spec) {
  double total = 0.0;
  for (double f : spec.fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      return absl::InvalidArgumentError("split fractions must be >= 0");
    }
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("split fractions sum to ", total, ", expected 1"));
  }

  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end());
      dup != ids.end()) {
    return absl::InvalidArgumentError(absl::StrCat("duplicate id: ", *dup));
  }

  Rng rng(spec.seed);
  rng.Shuffle(std::span<std::string>(ids));

  const size_t n = ids.size();
  std::array<size_t, 4> counts{};
  std::array<double, 4> remainders{};
  size_t assigned = 0;
  for (size_t i = 0; i < 4; ++i) {
    const double quota = spec.fractions[i] * static_cast<double>(n);
    counts[i] = static_cast<size_t>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += counts[i];
  }
  std::array<size_t, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return remainders[a] > remainders[b];
  });
  for (size_t k = 0; assigned < n; k = (k + 1) % 4) {
    // Only splits with a non-zero fraction may absorb leftovers.
    if (spec.fractions[order[k]] > 0.0) {
      ++counts[order[k]];
      ++assigned;
    }
  }

  DatasetSplit out;
  std::array<std::vector<std::string>*, 4> dest = {
      &out.target_in, &out.target_out, &out.shadow_in, &out.shadow_out};
  size_t pos = 0;
  for (size_t i = 0; i < 4; ++i) {
    dest[i]->assign(std::make_move_iterator(ids.begin() + pos),
                    std::make_move_iterator(ids.begin() + pos + counts[i]));
    pos += counts[i];
  }
  return out;
}

}  // namespace odmia
