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

// Detection dumps: versioned JSON documents of detector output.
//
//   {
//     "version": "1.0",
//     "images": [
//       {"image_id": "...", "width": 300, "height": 300,
//        "detections": [{"bbox": [x0, y0, x1, y1], "score": 0.9,
//                        "class_id": 3}],
//        "postprocess": {"score_threshold": 0.01, "nms_threshold": 1.0}}
//     ],
//     "provenance": {"source": "simulator", "membership": "in",
//                    "split": "target"}
//   }
//
// class_id, postprocess (the thresholds an image was harvested with),
// membership and split are optional. Unknown keys are ignored with a
// warning; every other schema violation is an error naming the JSON path
// of the offending field, e.g. images[0].detections[2].bbox.

#ifndef ODMIA_IO_DUMP_H_
#define ODMIA_IO_DUMP_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/simulator.h"
#include "odmia/types.h"

namespace odmia {

inline constexpr std::string_view kDumpVersion = "1.0";

struct DumpProvenance {
  std::string source;
  std::optional<MembershipLabel> membership;
  std::optional<RecordSource> split;

  friend bool operator==(const DumpProvenance&,
                         const DumpProvenance&) = default;
};

struct DetectionDump {
  std::vector<DetectionSet> images;
  DumpProvenance provenance;

  friend bool operator==(const DetectionDump&, const DetectionDump&) = default;
};

struct ParsedDump {
  DetectionDump dump;
  std::vector<std::string> warnings;
};

absl::StatusOr<ParsedDump> ParseDump(std::string_view json_text);
absl::StatusOr<ParsedDump> LoadDump(const std::string& path);

// Compact JSON with a trailing newline; doubles use the shortest
// representation that reads back to the same value.
std::string SerializeDump(const DetectionDump& dump);
absl::Status SaveDump(const DetectionDump& dump, const std::string& path);

// Records need a membership label. `default_split` is used when the dump
// does not name its split; a dump whose split disagrees with a given
// default is rejected.
absl::StatusOr<std::vector<MembershipRecord>> ToRecords(
    const DetectionDump& dump,
    std::optional<RecordSource> default_split = std::nullopt);

// All records must share label and source.
absl::StatusOr<DetectionDump> FromRecords(
    std::span<const MembershipRecord> records, std::string source);

// The four dumps of a world, named target_in.json, target_out.json,
// shadow_in.json and shadow_out.json inside `directory`.
absl::Status SaveWorld(const World& world, const std::string& directory,
                       const std::string& source);
absl::StatusOr<World> LoadWorld(const std::string& directory);

// Every *.json dump under `path` (a file, or a directory scanned in name
// order) whose split matches `split` when the dump names one. Dumps without
// a split are taken as `split`. Warnings are appended to `warnings`.
absl::StatusOr<std::vector<MembershipRecord>> LoadRecords(
    const std::string& path, RecordSource split,
    std::vector<std::string>* warnings);

}  // namespace odmia

#endif  // ODMIA_IO_DUMP_H_
