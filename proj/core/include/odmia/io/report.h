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

// Experiment reports. Every JSON report has the shape
//
//   {"version": "1.0", "kind": "attack" | "transfer" | "sweep" | "defense",
//    "config": "<resolved YAML config>",
//    "seeds": {"experiment": 1, "validation": ..., "balance": ...,
//              "train": ...},
//    ...kind-specific results}
//
// so a report alone is enough to rerun the experiment. Infinite epsilon is
// written as the string "inf". Output is compact and byte-deterministic.

#ifndef ODMIA_IO_REPORT_H_
#define ODMIA_IO_REPORT_H_

#include <span>
#include <string>
#include <string_view>

#include "odmia/io/config.h"
#include "odmia/pipeline.h"

namespace odmia {

inline constexpr std::string_view kReportVersion = "1.0";

std::string AttackReport(const ExperimentConfig& config,
                         const AttackResult& result);
std::string TransferReport(const ExperimentConfig& config,
                           std::span<const TransferCell> cells);
std::string SweepReport(const ExperimentConfig& config,
                        std::span<const SweepRow> rows);
std::string DefenseReport(const ExperimentConfig& config,
                          std::span<const DefenseRow> rows);

// Target accuracy matrix: header "shadow/target,<B1>,<B2>,..." and one
// row per shadow config, in first-appearance order of the names.
std::string TransferCsv(std::span<const TransferCell> cells);

// One row per example: image_id, source, label, then the feature values.
// Rows of different lengths are padded with empty cells.
std::string FeatureCsv(const AttackDataset& data);

}  // namespace odmia

#endif  // ODMIA_IO_REPORT_H_
