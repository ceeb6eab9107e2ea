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

#include "odmia/io/dump.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "absl/strings/str_cat.h"
#include "io/file_util.h"

namespace odmia {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

absl::Status SchemaError(std::string_view path, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("schema error at ", std::string(path), ": ", what));
}

void WarnUnknownKeys(const Json& object, std::string_view path,
                     std::initializer_list<std::string_view> known,
                     std::vector<std::string>& warnings) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      warnings.push_back(absl::StrCat("ignoring unknown key ",
                                      std::string(path), ".", it.key()));
    }
  }
}

absl::StatusOr<const Json*> Field(const Json& object, std::string_view path,
                                  const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    return SchemaError(absl::StrCat(std::string(path), ".", key),
                       "missing required field");
  }
  return &*it;
}

absl::StatusOr<double> Number(const Json& value, std::string_view path) {
  if (!value.is_number()) return SchemaError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) return SchemaError(path, "expected a finite number");
  return v;
}

absl::StatusOr<int> Integer(const Json& value, std::string_view path) {
  if (!value.is_number_integer()) {
    return SchemaError(path, "expected an integer");
  }
  const int64_t v = value.get<int64_t>();
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    return SchemaError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

absl::StatusOr<ScoredBox> ParseDetection(const Json& d, const std::string& path,
                                         std::vector<std::string>& warnings) {
  if (!d.is_object()) return SchemaError(path, "expected an object");
  WarnUnknownKeys(d, path, {"bbox", "score", "class_id"}, warnings);
  ScoredBox box;
  absl::StatusOr<const Json*> bbox = Field(d, path, "bbox");
  if (!bbox.ok()) return bbox.status();
  const std::string bbox_path = path + ".bbox";
  if (!(*bbox)->is_array() || (*bbox)->size() != 4) {
    return SchemaError(bbox_path, "expected an array of 4 numbers");
  }
  double c[4];
  for (size_t i = 0; i < 4; ++i) {
    absl::StatusOr<double> v =
        Number((**bbox)[i], absl::StrCat(bbox_path, "[", i, "]"));
    if (!v.ok()) return v.status();
    c[i] = *v;
  }
  box.box = {c[0], c[1], c[2], c[3]};
  if (absl::Status s = ValidateBox(box.box); !s.ok()) {
    return SchemaError(bbox_path, s.message());
  }
  absl::StatusOr<const Json*> score = Field(d, path, "score");
  if (!score.ok()) return score.status();
  absl::StatusOr<double> s = Number(**score, path + ".score");
  if (!s.ok()) return s.status();
  if (*s < 0.0 || *s > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("validation error at ", path, ".score: ", *s,
                     " outside [0, 1]"));
  }
  box.score = *s;
  if (auto it = d.find("class_id"); it != d.end()) {
    absl::StatusOr<int> id = Integer(*it, path + ".class_id");
    if (!id.ok()) return id.status();
    box.class_id = *id;
  }
  return box;
}

absl::StatusOr<PostprocessConfig> ParsePostprocess(
    const Json& p, const std::string& path,
    std::vector<std::string>& warnings) {
  if (!p.is_object()) return SchemaError(path, "expected an object");
  WarnUnknownKeys(p, path,
                  {"score_threshold", "nms_threshold", "rpn_nms_threshold",
                   "head_nms_threshold"},
                  warnings);
  PostprocessConfig config;
  for (auto [key, target] :
       {std::pair{"score_threshold", &config.score_threshold},
        std::pair{"nms_threshold", &config.nms_threshold}}) {
    absl::StatusOr<const Json*> f = Field(p, path, key);
    if (!f.ok()) return f.status();
    absl::StatusOr<double> v = Number(**f, absl::StrCat(path, ".", key));
    if (!v.ok()) return v.status();
    *target = *v;
  }
  for (auto [key, target] :
       {std::pair{"rpn_nms_threshold", &config.rpn_nms_threshold},
        std::pair{"head_nms_threshold", &config.head_nms_threshold}}) {
    if (auto it = p.find(key); it != p.end()) {
      absl::StatusOr<double> v = Number(*it, absl::StrCat(path, ".", key));
      if (!v.ok()) return v.status();
      *target = *v;
    }
  }
  if (absl::Status s = ValidatePostprocessConfig(config); !s.ok()) {
    return SchemaError(path, s.message());
  }
  return config;
}

absl::StatusOr<DetectionSet> ParseImage(const Json& image,
                                        const std::string& path,
                                        std::vector<std::string>& warnings) {
  if (!image.is_object()) return SchemaError(path, "expected an object");
  WarnUnknownKeys(image, path,
                  {"image_id", "width", "height", "detections", "postprocess"},
                  warnings);
  DetectionSet set;
  absl::StatusOr<const Json*> id = Field(image, path, "image_id");
  if (!id.ok()) return id.status();
  if (!(*id)->is_string()) {
    return SchemaError(path + ".image_id", "expected a string");
  }
  set.image_id = (*id)->get<std::string>();
  for (auto [key, target] :
       {std::pair{"width", &set.width}, std::pair{"height", &set.height}}) {
    absl::StatusOr<const Json*> f = Field(image, path, key);
    if (!f.ok()) return f.status();
    absl::StatusOr<int> v = Integer(**f, absl::StrCat(path, ".", key));
    if (!v.ok()) return v.status();
    if (*v <= 0) {
      return SchemaError(absl::StrCat(path, ".", key), "must be positive");
    }
    *target = *v;
  }
  absl::StatusOr<const Json*> detections = Field(image, path, "detections");
  if (!detections.ok()) return detections.status();
  if (!(*detections)->is_array()) {
    return SchemaError(path + ".detections", "expected an array");
  }
  for (size_t i = 0; i < (*detections)->size(); ++i) {
    absl::StatusOr<ScoredBox> box =
        ParseDetection((**detections)[i],
                       absl::StrCat(path, ".detections[", i, "]"), warnings);
    if (!box.ok()) return box.status();
    set.boxes.push_back(*box);
  }
  if (auto it = image.find("postprocess"); it != image.end()) {
    absl::StatusOr<PostprocessConfig> p =
        ParsePostprocess(*it, path + ".postprocess", warnings);
    if (!p.ok()) return p.status();
    set.harvested_with = *p;
  }
  return set;
}

absl::StatusOr<DumpProvenance> ParseProvenance(
    const Json& p, std::vector<std::string>& warnings) {
  const std::string path = "provenance";
  if (!p.is_object()) return SchemaError(path, "expected an object");
  WarnUnknownKeys(p, path, {"source", "membership", "split"}, warnings);
  DumpProvenance provenance;
  absl::StatusOr<const Json*> source = Field(p, path, "source");
  if (!source.ok()) return source.status();
  if (!(*source)->is_string()) {
    return SchemaError("provenance.source", "expected a string");
  }
  provenance.source = (*source)->get<std::string>();
  if (auto it = p.find("membership"); it != p.end()) {
    if (*it == "in") {
      provenance.membership = MembershipLabel::kIn;
    } else if (*it == "out") {
      provenance.membership = MembershipLabel::kOut;
    } else {
      return SchemaError("provenance.membership", "expected \"in\" or \"out\"");
    }
  }
  if (auto it = p.find("split"); it != p.end()) {
    if (*it == "target") {
      provenance.split = RecordSource::kTarget;
    } else if (*it == "shadow") {
      provenance.split = RecordSource::kShadow;
    } else {
      return SchemaError("provenance.split",
                         "expected \"target\" or \"shadow\"");
    }
  }
  return provenance;
}

Json PostprocessJson(const PostprocessConfig& config) {
  Json p = Json::object();
  p["score_threshold"] = config.score_threshold;
  p["nms_threshold"] = config.nms_threshold;
  if (config.rpn_nms_threshold) {
    p["rpn_nms_threshold"] = *config.rpn_nms_threshold;
  }
  if (config.head_nms_threshold) {
    p["head_nms_threshold"] = *config.head_nms_threshold;
  }
  return p;
}

constexpr std::pair<const char*, RecordSource> kWorldFiles[] = {
    {"target_in.json", RecordSource::kTarget},
    {"target_out.json", RecordSource::kTarget},
    {"shadow_in.json", RecordSource::kShadow},
    {"shadow_out.json", RecordSource::kShadow}};

}  // namespace

absl::StatusOr<ParsedDump> ParseDump(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed JSON: ", e.what()));
  }
  ParsedDump out;
  if (!root.is_object()) return SchemaError("$", "expected an object");
  WarnUnknownKeys(root, "$", {"version", "images", "provenance"},
                  out.warnings);
  absl::StatusOr<const Json*> version = Field(root, "$", "version");
  if (!version.ok()) return version.status();
  if (!(*version)->is_string()) {
    return SchemaError("$.version", "expected a string");
  }
  if ((*version)->get<std::string>() != kDumpVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unsupported dump version '", (*version)->get<std::string>(),
        "' (expected '", std::string(kDumpVersion), "')"));
  }
  absl::StatusOr<const Json*> images = Field(root, "$", "images");
  if (!images.ok()) return images.status();
  if (!(*images)->is_array()) return SchemaError("images", "expected an array");
  for (size_t i = 0; i < (*images)->size(); ++i) {
    absl::StatusOr<DetectionSet> set = ParseImage(
        (**images)[i], absl::StrCat("images[", i, "]"), out.warnings);
    if (!set.ok()) return set.status();
    out.dump.images.push_back(*std::move(set));
  }
  absl::StatusOr<const Json*> provenance = Field(root, "$", "provenance");
  if (!provenance.ok()) return provenance.status();
  absl::StatusOr<DumpProvenance> p = ParseProvenance(**provenance, out.warnings);
  if (!p.ok()) return p.status();
  out.dump.provenance = *std::move(p);
  return out;
}

absl::StatusOr<ParsedDump> LoadDump(const std::string& path) {
  absl::StatusOr<std::string> text = io_internal::ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<ParsedDump> dump = ParseDump(*text);
  if (!dump.ok()) {
    return absl::Status(dump.status().code(),
                        absl::StrCat(path, ": ", dump.status().message()));
  }
  return dump;
}

std::string SerializeDump(const DetectionDump& dump) {
  Json root = Json::object();
  root["version"] = kDumpVersion;
  Json images = Json::array();
  for (const DetectionSet& set : dump.images) {
    Json image = Json::object();
    image["image_id"] = set.image_id;
    image["width"] = set.width;
    image["height"] = set.height;
    Json detections = Json::array();
    for (const ScoredBox& box : set.boxes) {
      Json d = Json::object();
      d["bbox"] = {box.box.x0, box.box.y0, box.box.x1, box.box.y1};
      d["score"] = box.score;
      if (box.class_id) d["class_id"] = *box.class_id;
      detections.push_back(std::move(d));
    }
    image["detections"] = std::move(detections);
    if (set.harvested_with) {
      image["postprocess"] = PostprocessJson(*set.harvested_with);
    }
    images.push_back(std::move(image));
  }
  root["images"] = std::move(images);
  Json provenance = Json::object();
  provenance["source"] = dump.provenance.source;
  if (dump.provenance.membership) {
    provenance["membership"] = LabelName(*dump.provenance.membership);
  }
  if (dump.provenance.split) {
    provenance["split"] = SourceName(*dump.provenance.split);
  }
  root["provenance"] = std::move(provenance);
  return root.dump() + "\n";
}

absl::Status SaveDump(const DetectionDump& dump, const std::string& path) {
  return io_internal::WriteFile(path, SerializeDump(dump));
}

absl::StatusOr<std::vector<MembershipRecord>> ToRecords(
    const DetectionDump& dump, std::optional<RecordSource> default_split) {
  if (!dump.provenance.membership) {
    return absl::InvalidArgumentError(
        "dump has no provenance.membership; records need a label");
  }
  if (dump.provenance.split && default_split &&
      *dump.provenance.split != *default_split) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dump is tagged split '",
        std::string(SourceName(*dump.provenance.split)), "' but was given as ",
        std::string(SourceName(*default_split))));
  }
  const std::optional<RecordSource> split =
      dump.provenance.split ? dump.provenance.split : default_split;
  if (!split) {
    return absl::InvalidArgumentError(
        "dump has no provenance.split and no split was given");
  }
  std::vector<MembershipRecord> records;
  records.reserve(dump.images.size());
  for (const DetectionSet& set : dump.images) {
    records.push_back({set, *dump.provenance.membership, *split});
  }
  return records;
}

absl::StatusOr<DetectionDump> FromRecords(
    std::span<const MembershipRecord> records, std::string source) {
  DetectionDump dump;
  dump.provenance.source = std::move(source);
  for (const MembershipRecord& r : records) {
    if (dump.provenance.membership &&
        (*dump.provenance.membership != r.label ||
         *dump.provenance.split != r.source)) {
      return absl::InvalidArgumentError(
          "records in one dump must share label and source");
    }
    dump.provenance.membership = r.label;
    dump.provenance.split = r.source;
    dump.images.push_back(r.detections);
  }
  return dump;
}

absl::Status SaveWorld(const World& world, const std::string& directory,
                       const std::string& source) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat(
        "I/O error: cannot create '", directory, "': ", ec.message()));
  }
  const std::vector<MembershipRecord>* parts[] = {
      &world.target_in, &world.target_out, &world.shadow_in,
      &world.shadow_out};
  for (size_t i = 0; i < 4; ++i) {
    absl::StatusOr<DetectionDump> dump = FromRecords(*parts[i], source);
    if (!dump.ok()) return dump.status();
    if (parts[i]->empty()) {
      dump->provenance.split = kWorldFiles[i].second;
      dump->provenance.membership =
          i % 2 == 0 ? MembershipLabel::kIn : MembershipLabel::kOut;
    }
    if (absl::Status s =
            SaveDump(*dump, (fs::path(directory) / kWorldFiles[i].first));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<World> LoadWorld(const std::string& directory) {
  World world;
  std::vector<MembershipRecord>* parts[] = {
      &world.target_in, &world.target_out, &world.shadow_in,
      &world.shadow_out};
  for (size_t i = 0; i < 4; ++i) {
    absl::StatusOr<ParsedDump> dump =
        LoadDump(fs::path(directory) / kWorldFiles[i].first);
    if (!dump.ok()) return dump.status();
    absl::StatusOr<std::vector<MembershipRecord>> records =
        ToRecords(dump->dump, kWorldFiles[i].second);
    if (!records.ok()) return records.status();
    *parts[i] = *std::move(records);
  }
  return world;
}

absl::StatusOr<std::vector<MembershipRecord>> LoadRecords(
    const std::string& path, RecordSource split,
    std::vector<std::string>* warnings) {
  std::vector<std::string> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const fs::directory_entry& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      return absl::NotFoundError(
          absl::StrCat("no .json dumps in '", path, "'"));
    }
  } else {
    files.push_back(path);
  }
  std::vector<MembershipRecord> records;
  for (const std::string& file : files) {
    absl::StatusOr<ParsedDump> dump = LoadDump(file);
    if (!dump.ok()) return dump.status();
    if (warnings != nullptr) {
      for (const std::string& w : dump->warnings) {
        warnings->push_back(absl::StrCat(file, ": ", w));
      }
    }
    if (files.size() > 1 && dump->dump.provenance.split &&
        *dump->dump.provenance.split != split) {
      continue;
    }
    absl::StatusOr<std::vector<MembershipRecord>> part =
        ToRecords(dump->dump, split);
    if (!part.ok()) {
      return absl::Status(part.status().code(),
                          absl::StrCat(file, ": ", part.status().message()));
    }
    records.insert(records.end(), part->begin(), part->end());
  }
  return records;
}

}  // namespace odmia
