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

#include "odmia/io/report.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "absl/strings/str_cat.h"
#include "io/file_util.h"
#include "odmia/rng.h"

namespace odmia {
namespace {

using Json = nlohmann::ordered_json;

Json Real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json MetricsJson(const AttackMetrics& m) {
  return Json{{"accuracy", Real(m.accuracy)},
              {"recall_in", Real(m.recall_in)},
              {"recall_out", Real(m.recall_out)},
              {"average_recall", Real(m.average_recall)},
              {"counts",
               {{"in_as_in", m.counts.in_as_in},
                {"in_as_out", m.counts.in_as_out},
                {"out_as_in", m.counts.out_as_in},
                {"out_as_out", m.counts.out_as_out}}}};
}

Json ModelSummary(const AttackResult& result) {
  const TrainingProvenance& p = result.model.provenance;
  Json summary{{"family", FamilyName(result.model)},
               {"training_examples", result.training_examples},
               {"train_seed", p.seed},
               {"config_hash", p.config_hash},
               {"epochs", Real(p.epochs)}};
  if (!p.loss_history.empty()) {
    summary["final_loss"] = Real(p.loss_history.back());
  }
  return summary;
}

Json AttackResultJson(const AttackResult& result) {
  return Json{{"target", MetricsJson(result.target)},
              {"validation", MetricsJson(result.validation)},
              {"model", ModelSummary(result)}};
}

Json Envelope(std::string_view kind, const ExperimentConfig& config) {
  const Rng root(config.seed);
  Json seeds{{"experiment", config.seed}};
  if (kind == "defense") {
    seeds["train"] = root.ForkSeed("train");
  } else {
    seeds["validation"] = root.ForkSeed("validation");
    seeds["balance"] = root.ForkSeed("balance");
    seeds["train"] = root.ForkSeed("train");
  }
  return Json{{"version", kReportVersion},
              {"kind", kind},
              {"config", SerializeConfig(config)},
              {"seeds", std::move(seeds)}};
}

std::string Finish(const Json& doc) { return doc.dump() + "\n"; }

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string AttackReport(const ExperimentConfig& config,
                         const AttackResult& result) {
  Json doc = Envelope("attack", config);
  doc["result"] = AttackResultJson(result);
  return Finish(doc);
}

std::string TransferReport(const ExperimentConfig& config,
                           std::span<const TransferCell> cells) {
  Json doc = Envelope("transfer", config);
  Json list = Json::array();
  for (const TransferCell& cell : cells) {
    Json entry{{"shadow_config", cell.shadow_name},
               {"target_config", cell.target_name}};
    entry.update(AttackResultJson(cell.result));
    list.push_back(std::move(entry));
  }
  doc["cells"] = std::move(list);
  return Finish(doc);
}

std::string SweepReport(const ExperimentConfig& config,
                        std::span<const SweepRow> rows) {
  Json doc = Envelope("sweep", config);
  Json list = Json::array();
  for (const SweepRow& row : rows) {
    list.push_back(Json{{"overfit_level", Real(row.level)},
                        {"separability", Real(row.separability)},
                        {"target", MetricsJson(row.target)},
                        {"validation", MetricsJson(row.validation)}});
  }
  doc["rows"] = std::move(list);
  return Finish(doc);
}

std::string DefenseReport(const ExperimentConfig& config,
                          std::span<const DefenseRow> rows) {
  Json doc = Envelope("defense", config);
  Json list = Json::array();
  for (const DefenseRow& row : rows) {
    list.push_back(Json{{"defense", DefenseName(row.defense)},
                        {"utility", Real(row.utility)},
                        {"threshold", Real(row.threshold)},
                        {"attack", MetricsJson(row.attack)},
                        {"epsilon", Real(row.epsilon)},
                        {"epochs", Real(row.epochs)}});
  }
  doc["rows"] = std::move(list);
  return Finish(doc);
}

std::string TransferCsv(std::span<const TransferCell> cells) {
  std::vector<std::string> shadows, targets;
  for (const TransferCell& cell : cells) {
    if (std::find(shadows.begin(), shadows.end(), cell.shadow_name) ==
        shadows.end()) {
      shadows.push_back(cell.shadow_name);
    }
    if (std::find(targets.begin(), targets.end(), cell.target_name) ==
        targets.end()) {
      targets.push_back(cell.target_name);
    }
  }
  std::string out = "shadow/target";
  for (const std::string& t : targets) absl::StrAppend(&out, ",", CsvField(t));
  out += "\n";
  for (const std::string& s : shadows) {
    out += CsvField(s);
    for (const std::string& t : targets) {
      out += ",";
      for (const TransferCell& cell : cells) {
        if (cell.shadow_name == s && cell.target_name == t) {
          out += io_internal::FormatDouble(cell.result.target.accuracy);
          break;
        }
      }
    }
    out += "\n";
  }
  return out;
}

std::string FeatureCsv(const AttackDataset& data) {
  size_t width = 0;
  for (const LabeledVector& v : data.vectors) {
    width = std::max(width, v.features.values.size());
  }
  std::string out = "image_id,source,label";
  for (size_t j = 0; j < width; ++j) absl::StrAppend(&out, ",f", j);
  out += "\n";
  for (size_t i = 0; i < data.vectors.size(); ++i) {
    const LabeledVector& v = data.vectors[i];
    absl::StrAppend(&out, CsvField(data.image_ids[i]), ",",
                    std::string(SourceName(data.sources[i])), ",",
                    std::string(LabelName(v.label)));
    for (size_t j = 0; j < width; ++j) {
      out += ",";
      if (j < v.features.values.size()) {
        out += io_internal::FormatDouble(v.features.values[j]);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace odmia
