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

#include "odmia/io/config.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "absl/strings/str_cat.h"
#include "io/file_util.h"

namespace odmia {
namespace {

absl::Status ConfigError(std::string_view path, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(
      "config error at ", std::string(path), ": ", std::string(what)));
}

template <typename T>
absl::Status Convert(const YAML::Node& node, std::string_view path, T& out);

template <>
absl::Status Convert(const YAML::Node& node, std::string_view path,
                     double& out) {
  if (!node.IsScalar()) return ConfigError(path, "expected a number");
  try {
    out = node.as<double>();
  } catch (const YAML::Exception&) {
    return ConfigError(path, absl::StrCat("expected a number, got '",
                                          node.Scalar(), "'"));
  }
  if (std::isnan(out)) return ConfigError(path, "NaN is not allowed");
  return absl::OkStatus();
}

template <>
absl::Status Convert(const YAML::Node& node, std::string_view path, int& out) {
  if (!node.IsScalar()) return ConfigError(path, "expected an integer");
  try {
    out = node.as<int>();
  } catch (const YAML::Exception&) {
    return ConfigError(path, absl::StrCat("expected an integer, got '",
                                          node.Scalar(), "'"));
  }
  return absl::OkStatus();
}

template <>
absl::Status Convert(const YAML::Node& node, std::string_view path,
                     uint64_t& out) {
  if (!node.IsScalar() || node.Scalar().starts_with("-")) {
    return ConfigError(path, "expected a non-negative integer");
  }
  try {
    out = node.as<uint64_t>();
  } catch (const YAML::Exception&) {
    return ConfigError(path, absl::StrCat("expected a non-negative integer, "
                                          "got '", node.Scalar(), "'"));
  }
  return absl::OkStatus();
}

template <>
absl::Status Convert(const YAML::Node& node, std::string_view path,
                     bool& out) {
  if (!node.IsScalar()) return ConfigError(path, "expected true or false");
  try {
    out = node.as<bool>();
  } catch (const YAML::Exception&) {
    return ConfigError(path, absl::StrCat("expected true or false, got '",
                                          node.Scalar(), "'"));
  }
  return absl::OkStatus();
}

template <>
absl::Status Convert(const YAML::Node& node, std::string_view path,
                     std::string& out) {
  if (!node.IsScalar()) return ConfigError(path, "expected a string");
  out = node.Scalar();
  return absl::OkStatus();
}

template <typename T>
absl::Status ConvertList(const YAML::Node& node, std::string_view path,
                         std::vector<T>& out) {
  if (!node.IsSequence()) return ConfigError(path, "expected a list");
  std::vector<T> values(node.size());
  for (size_t i = 0; i < node.size(); ++i) {
    if (absl::Status s = Convert(node[i], absl::StrCat(std::string(path), "[",
                                                       i, "]"),
                                 values[i]);
        !s.ok()) {
      return s;
    }
  }
  out = std::move(values);
  return absl::OkStatus();
}

template <typename T>
absl::Status ConvertPair(const YAML::Node& node, std::string_view path,
                         T& first, T& second) {
  std::vector<T> values;
  if (absl::Status s = ConvertList(node, path, values); !s.ok()) return s;
  if (values.size() != 2) return ConfigError(path, "expected [lo, hi]");
  first = values[0];
  second = values[1];
  return absl::OkStatus();
}

// A mapping node with its dotted path. Keys must be declared with Allow()
// or read through one of the getters before Finish() reports the rest as
// unknown.
class Section {
 public:
  Section(YAML::Node node, std::string path)
      : node_(std::move(node)), path_(std::move(path)) {}

  absl::Status Open() const {
    if (node_.IsNull() || !node_.IsDefined()) return absl::OkStatus();
    if (!node_.IsMap()) return ConfigError(path_, "expected a mapping");
    return absl::OkStatus();
  }

  std::string Path(std::string_view key) const {
    return path_.empty() ? std::string(key)
                         : absl::StrCat(path_, ".", std::string(key));
  }

  std::optional<YAML::Node> Child(std::string_view key) {
    seen_.emplace_back(key);
    if (!node_.IsMap()) return std::nullopt;
    YAML::Node child = node_[std::string(key)];
    if (!child.IsDefined()) return std::nullopt;
    return child;
  }

  template <typename T>
  absl::Status Get(std::string_view key, T& out) {
    std::optional<YAML::Node> child = Child(key);
    if (!child) return absl::OkStatus();
    return Convert(*child, Path(key), out);
  }

  template <typename T>
  absl::Status GetList(std::string_view key, std::vector<T>& out) {
    std::optional<YAML::Node> child = Child(key);
    if (!child) return absl::OkStatus();
    return ConvertList(*child, Path(key), out);
  }

  template <typename T>
  absl::Status GetPair(std::string_view key, T& first, T& second) {
    std::optional<YAML::Node> child = Child(key);
    if (!child) return absl::OkStatus();
    return ConvertPair(*child, Path(key), first, second);
  }

  absl::Status Finish() const {
    if (!node_.IsMap()) return absl::OkStatus();
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      const std::string key = it->first.Scalar();
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        return ConfigError(Path(key), "unknown key");
      }
    }
    return absl::OkStatus();
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::vector<std::string> seen_;
};

#define ODMIA_RETURN_IF_ERROR(expr)          \
  do {                                       \
    if (absl::Status _s = (expr); !_s.ok()) { \
      return _s;                             \
    }                                        \
  } while (false)

template <typename Enum>
absl::Status GetEnum(Section& section, std::string_view key, Enum& out,
                     std::initializer_list<std::pair<const char*, Enum>> names) {
  std::string text;
  std::optional<YAML::Node> child = section.Child(key);
  if (!child) return absl::OkStatus();
  ODMIA_RETURN_IF_ERROR(Convert(*child, section.Path(key), text));
  for (const auto& [name, value] : names) {
    if (text == name) {
      out = value;
      return absl::OkStatus();
    }
  }
  return ConfigError(section.Path(key),
                     absl::StrCat("unknown value '", text, "'"));
}

template <typename Fn>
absl::Status WithSection(Section& parent, std::string_view key, Fn&& fn) {
  std::optional<YAML::Node> child = parent.Child(key);
  if (!child) return absl::OkStatus();
  Section section(*child, parent.Path(key));
  ODMIA_RETURN_IF_ERROR(section.Open());
  ODMIA_RETURN_IF_ERROR(fn(section));
  return section.Finish();
}

absl::Status ReadSimulator(Section& s, SimulatorConfig& c) {
  ODMIA_RETURN_IF_ERROR(s.Get("image_width", c.image_width));
  ODMIA_RETURN_IF_ERROR(s.Get("image_height", c.image_height));
  ODMIA_RETURN_IF_ERROR(s.GetPair("objects_per_image", c.objects_per_image.lo,
                                  c.objects_per_image.hi));
  ODMIA_RETURN_IF_ERROR(s.GetPair("proposals_per_object",
                                  c.proposals_per_object.lo,
                                  c.proposals_per_object.hi));
  ODMIA_RETURN_IF_ERROR(s.GetPair("object_size_fraction",
                                  c.object_size_fraction.lo,
                                  c.object_size_fraction.hi));
  ODMIA_RETURN_IF_ERROR(s.Get("jitter_in", c.jitter_in));
  ODMIA_RETURN_IF_ERROR(s.Get("jitter_out", c.jitter_out));
  ODMIA_RETURN_IF_ERROR(
      s.GetPair("score_in", c.score_in.alpha, c.score_in.beta));
  ODMIA_RETURN_IF_ERROR(
      s.GetPair("score_out", c.score_out.alpha, c.score_out.beta));
  return s.Get("overfit_level", c.overfit_level);
}

absl::Status ReadTrain(Section& s, TrainConfig& c) {
  ODMIA_RETURN_IF_ERROR(s.Get("learning_rate", c.learning_rate));
  ODMIA_RETURN_IF_ERROR(s.Get("momentum", c.momentum));
  ODMIA_RETURN_IF_ERROR(s.Get("weight_decay", c.weight_decay));
  ODMIA_RETURN_IF_ERROR(s.Get("batch_size", c.batch_size));
  return s.Get("epochs", c.epochs);
}

absl::Status ReadCnn(Section& s, CnnSpec& c) {
  ODMIA_RETURN_IF_ERROR(s.GetList("conv_channels", c.conv_channels));
  ODMIA_RETURN_IF_ERROR(s.GetList("fc_units", c.fc_units));
  ODMIA_RETURN_IF_ERROR(s.Get("kernel_size", c.kernel_size));
  ODMIA_RETURN_IF_ERROR(GetEnum(
      s, "pool", c.pool, {{"max2", Pooling::kMax2}, {"none", Pooling::kNone}}));
  ODMIA_RETURN_IF_ERROR(GetEnum(
      s, "activation", c.activation,
      {{"relu", Activation::kReLU}, {"identity", Activation::kIdentity}}));
  return s.Get("dropout_rate", c.dropout_rate);
}

absl::Status ReadGbt(Section& s, GbtSpec& c) {
  ODMIA_RETURN_IF_ERROR(s.Get("max_depth", c.max_depth));
  ODMIA_RETURN_IF_ERROR(s.Get("n_estimators", c.n_estimators));
  ODMIA_RETURN_IF_ERROR(s.Get("learning_rate", c.learning_rate));
  ODMIA_RETURN_IF_ERROR(s.Get("lambda", c.lambda));
  return s.Get("min_child_weight", c.min_child_weight);
}

absl::Status ReadAttack(Section& s, AttackExperiment& e) {
  ODMIA_RETURN_IF_ERROR(GetEnum(s, "kind", e.kind,
                                {{"canvas_cnn", AttackKind::kCanvasCnn},
                                 {"gbt_vector", AttackKind::kGbtVector}}));
  ODMIA_RETURN_IF_ERROR(WithSection(s, "canvas", [&](Section& c) {
    ODMIA_RETURN_IF_ERROR(c.Get("size", e.canvas.size));
    ODMIA_RETURN_IF_ERROR(
        GetEnum(c, "box_mode", e.canvas.box_mode,
                {{"uniform", BoxMode::kUniform},
                 {"original", BoxMode::kOriginal}}));
    ODMIA_RETURN_IF_ERROR(c.Get("uniform_fraction", e.canvas.uniform_fraction));
    ODMIA_RETURN_IF_ERROR(c.Get("rescale_scores", e.canvas.rescale_scores));
    return GetEnum(
        c, "accumulation", e.canvas.accumulation,
        {{"max", Accumulation::kMax}, {"sum", Accumulation::kSum}});
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(s, "postprocess", [&](Section& p) {
    ODMIA_RETURN_IF_ERROR(
        p.Get("score_threshold", e.postprocess.score_threshold));
    ODMIA_RETURN_IF_ERROR(p.Get("nms_threshold", e.postprocess.nms_threshold));
    for (auto [key, field] :
         {std::pair{"rpn_nms_threshold", &e.postprocess.rpn_nms_threshold},
          std::pair{"head_nms_threshold", &e.postprocess.head_nms_threshold}}) {
      std::optional<YAML::Node> child = p.Child(key);
      if (!child) continue;
      double v = 0.0;
      ODMIA_RETURN_IF_ERROR(Convert(*child, p.Path(key), v));
      *field = v;
    }
    return absl::OkStatus();
  }));
  if (std::optional<YAML::Node> aug = s.Child("augmentation")) {
    std::vector<std::string> names;
    ODMIA_RETURN_IF_ERROR(ConvertList(*aug, s.Path("augmentation"), names));
    e.augmentation.clear();
    for (size_t i = 0; i < names.size(); ++i) {
      absl::StatusOr<Transform> t = ParseTransform(names[i]);
      if (!t.ok()) {
        return ConfigError(absl::StrCat(s.Path("augmentation"), "[", i, "]"),
                           t.status().message());
      }
      e.augmentation.push_back(*t);
    }
  }
  ODMIA_RETURN_IF_ERROR(
      WithSection(s, "cnn", [&](Section& c) { return ReadCnn(c, e.cnn); }));
  ODMIA_RETURN_IF_ERROR(
      WithSection(s, "gbt", [&](Section& g) { return ReadGbt(g, e.gbt); }));
  ODMIA_RETURN_IF_ERROR(s.Get("n_max", e.n_max));
  ODMIA_RETURN_IF_ERROR(s.Get("balance", e.balance));
  ODMIA_RETURN_IF_ERROR(s.Get("validation_fraction", e.validation_fraction));
  return WithSection(s, "train",
                     [&](Section& t) { return ReadTrain(t, e.train); });
}

absl::Status ReadDefense(Section& s, DefenseExperiment& d) {
  ODMIA_RETURN_IF_ERROR(WithSection(s, "task", [&](Section& t) {
    ODMIA_RETURN_IF_ERROR(t.Get("dim", d.task.dim));
    ODMIA_RETURN_IF_ERROR(t.Get("members", d.task.members));
    ODMIA_RETURN_IF_ERROR(t.Get("signal", d.task.signal));
    ODMIA_RETURN_IF_ERROR(t.Get("label_noise", d.task.label_noise));
    return t.Get("test_size", d.task.test_size);
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(s, "surrogate", [&](Section& g) {
    std::string kind = "logistic";
    ODMIA_RETURN_IF_ERROR(g.Get("kind", kind));
    if (kind == "logistic") {
      LogisticSpec spec;
      ODMIA_RETURN_IF_ERROR(g.Get("dropout_rate", spec.dropout_rate));
      d.surrogate = spec;
    } else if (kind == "gbt") {
      GbtSpec spec;
      ODMIA_RETURN_IF_ERROR(ReadGbt(g, spec));
      d.surrogate = spec;
    } else if (kind == "cnn") {
      CnnSpec spec;
      ODMIA_RETURN_IF_ERROR(ReadCnn(g, spec));
      d.surrogate = spec;
    } else {
      return ConfigError(g.Path("kind"),
                         absl::StrCat("unknown surrogate kind '", kind, "'"));
    }
    return absl::OkStatus();
  }));
  ODMIA_RETURN_IF_ERROR(
      WithSection(s, "train", [&](Section& t) { return ReadTrain(t, d.train); }));
  ODMIA_RETURN_IF_ERROR(s.Get("delta", d.delta));
  if (std::optional<YAML::Node> list = s.Child("defenses")) {
    const std::string path = s.Path("defenses");
    if (!list->IsSequence()) return ConfigError(path, "expected a list");
    d.defenses.clear();
    for (size_t i = 0; i < list->size(); ++i) {
      Section item((*list)[i], absl::StrCat(path, "[", i, "]"));
      ODMIA_RETURN_IF_ERROR(item.Open());
      Defense defense;
      ODMIA_RETURN_IF_ERROR(GetEnum(item, "kind", defense.kind,
                                    {{"none", Defense::Kind::kNone},
                                     {"dropout", Defense::Kind::kDropout},
                                     {"dp", Defense::Kind::kDp}}));
      if (defense.kind == Defense::Kind::kDropout) {
        ODMIA_RETURN_IF_ERROR(item.Get("rate", defense.dropout_rate));
      }
      if (defense.kind == Defense::Kind::kDp) {
        ODMIA_RETURN_IF_ERROR(item.Get("sigma", defense.noise_scale));
        ODMIA_RETURN_IF_ERROR(item.Get("clip", defense.clip_bound));
      }
      ODMIA_RETURN_IF_ERROR(item.Finish());
      d.defenses.push_back(defense);
    }
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// Serialisation.

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  return io_internal::FormatDouble(v);
}

template <typename T>
void EmitFlow(YAML::Emitter& out, const std::vector<T>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const T& v : values) {
    if constexpr (std::is_floating_point_v<T>) {
      out << Num(v);
    } else {
      out << v;
    }
  }
  out << YAML::EndSeq;
}

void EmitSimulator(YAML::Emitter& out, const SimulatorConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "image_width" << YAML::Value << c.image_width;
  out << YAML::Key << "image_height" << YAML::Value << c.image_height;
  out << YAML::Key << "objects_per_image" << YAML::Value;
  EmitFlow(out, std::vector<int>{c.objects_per_image.lo,
                                 c.objects_per_image.hi});
  out << YAML::Key << "proposals_per_object" << YAML::Value;
  EmitFlow(out, std::vector<int>{c.proposals_per_object.lo,
                                 c.proposals_per_object.hi});
  out << YAML::Key << "object_size_fraction" << YAML::Value;
  EmitFlow(out, std::vector<double>{c.object_size_fraction.lo,
                                    c.object_size_fraction.hi});
  out << YAML::Key << "jitter_in" << YAML::Value << Num(c.jitter_in);
  out << YAML::Key << "jitter_out" << YAML::Value << Num(c.jitter_out);
  out << YAML::Key << "score_in" << YAML::Value;
  EmitFlow(out, std::vector<double>{c.score_in.alpha, c.score_in.beta});
  out << YAML::Key << "score_out" << YAML::Value;
  EmitFlow(out, std::vector<double>{c.score_out.alpha, c.score_out.beta});
  out << YAML::Key << "overfit_level" << YAML::Value << Num(c.overfit_level);
  out << YAML::EndMap;
}

void EmitTrain(YAML::Emitter& out, const TrainConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "learning_rate" << YAML::Value << Num(c.learning_rate);
  out << YAML::Key << "momentum" << YAML::Value << Num(c.momentum);
  out << YAML::Key << "weight_decay" << YAML::Value << Num(c.weight_decay);
  out << YAML::Key << "batch_size" << YAML::Value << c.batch_size;
  out << YAML::Key << "epochs" << YAML::Value << c.epochs;
  out << YAML::EndMap;
}

void EmitCnnFields(YAML::Emitter& out, const CnnSpec& c) {
  out << YAML::Key << "conv_channels" << YAML::Value;
  EmitFlow(out, c.conv_channels);
  out << YAML::Key << "fc_units" << YAML::Value;
  EmitFlow(out, c.fc_units);
  out << YAML::Key << "kernel_size" << YAML::Value << c.kernel_size;
  out << YAML::Key << "pool" << YAML::Value
      << (c.pool == Pooling::kMax2 ? "max2" : "none");
  out << YAML::Key << "activation" << YAML::Value
      << (c.activation == Activation::kReLU ? "relu" : "identity");
  out << YAML::Key << "dropout_rate" << YAML::Value << Num(c.dropout_rate);
}

void EmitGbtFields(YAML::Emitter& out, const GbtSpec& c) {
  out << YAML::Key << "max_depth" << YAML::Value << c.max_depth;
  out << YAML::Key << "n_estimators" << YAML::Value << c.n_estimators;
  out << YAML::Key << "learning_rate" << YAML::Value << Num(c.learning_rate);
  out << YAML::Key << "lambda" << YAML::Value << Num(c.lambda);
  out << YAML::Key << "min_child_weight" << YAML::Value
      << Num(c.min_child_weight);
}

void EmitAttack(YAML::Emitter& out, const AttackExperiment& e) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(AttackKindName(e.kind));
  out << YAML::Key << "canvas" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "size" << YAML::Value << e.canvas.size;
  out << YAML::Key << "box_mode" << YAML::Value
      << (e.canvas.box_mode == BoxMode::kUniform ? "uniform" : "original");
  out << YAML::Key << "uniform_fraction" << YAML::Value
      << Num(e.canvas.uniform_fraction);
  out << YAML::Key << "rescale_scores" << YAML::Value
      << e.canvas.rescale_scores;
  out << YAML::Key << "accumulation" << YAML::Value
      << (e.canvas.accumulation == Accumulation::kMax ? "max" : "sum");
  out << YAML::EndMap;
  out << YAML::Key << "postprocess" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "score_threshold" << YAML::Value
      << Num(e.postprocess.score_threshold);
  out << YAML::Key << "nms_threshold" << YAML::Value
      << Num(e.postprocess.nms_threshold);
  if (e.postprocess.rpn_nms_threshold) {
    out << YAML::Key << "rpn_nms_threshold" << YAML::Value
        << Num(*e.postprocess.rpn_nms_threshold);
  }
  if (e.postprocess.head_nms_threshold) {
    out << YAML::Key << "head_nms_threshold" << YAML::Value
        << Num(*e.postprocess.head_nms_threshold);
  }
  out << YAML::EndMap;
  out << YAML::Key << "augmentation" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
  for (Transform t : e.augmentation) out << std::string(TransformName(t));
  out << YAML::EndSeq;
  out << YAML::Key << "cnn" << YAML::Value << YAML::BeginMap;
  EmitCnnFields(out, e.cnn);
  out << YAML::EndMap;
  out << YAML::Key << "gbt" << YAML::Value << YAML::BeginMap;
  EmitGbtFields(out, e.gbt);
  out << YAML::EndMap;
  out << YAML::Key << "n_max" << YAML::Value << e.n_max;
  out << YAML::Key << "balance" << YAML::Value << e.balance;
  out << YAML::Key << "validation_fraction" << YAML::Value
      << Num(e.validation_fraction);
  out << YAML::Key << "train" << YAML::Value;
  EmitTrain(out, e.train);
  out << YAML::EndMap;
}

void EmitDefense(YAML::Emitter& out, const DefenseExperiment& d) {
  out << YAML::BeginMap;
  out << YAML::Key << "task" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dim" << YAML::Value << d.task.dim;
  out << YAML::Key << "members" << YAML::Value << d.task.members;
  out << YAML::Key << "signal" << YAML::Value << Num(d.task.signal);
  out << YAML::Key << "label_noise" << YAML::Value << Num(d.task.label_noise);
  out << YAML::Key << "test_size" << YAML::Value << d.task.test_size;
  out << YAML::EndMap;
  out << YAML::Key << "surrogate" << YAML::Value << YAML::BeginMap;
  if (const auto* lr = std::get_if<LogisticSpec>(&d.surrogate)) {
    out << YAML::Key << "kind" << YAML::Value << "logistic";
    out << YAML::Key << "dropout_rate" << YAML::Value << Num(lr->dropout_rate);
  } else if (const auto* gbt = std::get_if<GbtSpec>(&d.surrogate)) {
    out << YAML::Key << "kind" << YAML::Value << "gbt";
    EmitGbtFields(out, *gbt);
  } else {
    out << YAML::Key << "kind" << YAML::Value << "cnn";
    EmitCnnFields(out, std::get<CnnSpec>(d.surrogate));
  }
  out << YAML::EndMap;
  out << YAML::Key << "train" << YAML::Value;
  EmitTrain(out, d.train);
  out << YAML::Key << "delta" << YAML::Value << Num(d.delta);
  out << YAML::Key << "defenses" << YAML::Value << YAML::BeginSeq;
  for (const Defense& defense : d.defenses) {
    out << YAML::Flow << YAML::BeginMap;
    switch (defense.kind) {
      case Defense::Kind::kNone:
        out << YAML::Key << "kind" << YAML::Value << "none";
        break;
      case Defense::Kind::kDropout:
        out << YAML::Key << "kind" << YAML::Value << "dropout";
        out << YAML::Key << "rate" << YAML::Value << Num(defense.dropout_rate);
        break;
      case Defense::Kind::kDp:
        out << YAML::Key << "kind" << YAML::Value << "dp";
        out << YAML::Key << "sigma" << YAML::Value << Num(defense.noise_scale);
        out << YAML::Key << "clip" << YAML::Value << Num(defense.clip_bound);
        break;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

// Fields that are not serialised because they are derived.
void Normalise(ExperimentConfig& config) {
  config.attack.cnn.input_size = config.attack.canvas.size;
  config.attack.seed = config.seed;
  config.defense.seed = config.seed;
  config.attack.train.seed = 0;
  config.defense.train.seed = 0;
  for (Defense& d : config.defense.defenses) {
    if (d.kind != Defense::Kind::kDropout) d.dropout_rate = 0.0;
    if (d.kind != Defense::Kind::kDp) {
      d.noise_scale = 0.0;
      d.clip_bound = 1.0;
    }
  }
  if (auto* lr = std::get_if<LogisticSpec>(&config.defense.surrogate)) {
    lr->input_dim = LogisticSpec{}.input_dim;
  }
  if (auto* cnn = std::get_if<CnnSpec>(&config.defense.surrogate)) {
    cnn->input_size = CnnSpec{}.input_size;
  }
}

}  // namespace

void SetSeed(ExperimentConfig& config, uint64_t seed) {
  config.seed = seed;
  config.attack.seed = seed;
  config.defense.seed = seed;
}

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed config: ", e.what()));
  }
  ExperimentConfig config;
  Section top(root, "");
  ODMIA_RETURN_IF_ERROR(top.Open());
  ODMIA_RETURN_IF_ERROR(top.Get("seed", config.seed));
  ODMIA_RETURN_IF_ERROR(top.Get("n_per_split", config.n_per_split));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "simulator", [&](Section& s) {
    return ReadSimulator(s, config.simulator);
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "shadow_simulator", [&](Section& s) {
    config.shadow_simulator = SimulatorConfig{};
    return ReadSimulator(s, *config.shadow_simulator);
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(
      top, "attack", [&](Section& s) { return ReadAttack(s, config.attack); }));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "privacy", [&](Section& s) {
    ODMIA_RETURN_IF_ERROR(s.Get("noise_scale", config.privacy.noise_scale));
    ODMIA_RETURN_IF_ERROR(s.Get("clip_bound", config.privacy.clip_bound));
    ODMIA_RETURN_IF_ERROR(s.Get("delta", config.privacy.delta));
    return s.Get("epochs", config.privacy.epochs);
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "sweep", [&](Section& s) {
    return s.GetList("levels", config.sweep_levels);
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "transfer", [&](Section& s) {
    std::optional<YAML::Node> list = s.Child("configs");
    if (!list) return absl::OkStatus();
    const std::string path = s.Path("configs");
    if (!list->IsSequence()) return ConfigError(path, "expected a list");
    for (size_t i = 0; i < list->size(); ++i) {
      Section item((*list)[i], absl::StrCat(path, "[", i, "]"));
      ODMIA_RETURN_IF_ERROR(item.Open());
      NamedSimulatorConfig named;
      ODMIA_RETURN_IF_ERROR(item.Get("name", named.name));
      ODMIA_RETURN_IF_ERROR(WithSection(item, "simulator", [&](Section& sim) {
        return ReadSimulator(sim, named.config);
      }));
      ODMIA_RETURN_IF_ERROR(item.Finish());
      config.transfer_configs.push_back(std::move(named));
    }
    return absl::OkStatus();
  }));
  ODMIA_RETURN_IF_ERROR(WithSection(top, "defense", [&](Section& s) {
    return ReadDefense(s, config.defense);
  }));
  ODMIA_RETURN_IF_ERROR(top.Finish());
  Normalise(config);
  return config;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  absl::StatusOr<std::string> text = io_internal::ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<ExperimentConfig> config = ParseConfig(*text);
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

std::string SerializeConfig(const ExperimentConfig& config) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << config.seed;
  out << YAML::Key << "n_per_split" << YAML::Value << config.n_per_split;
  out << YAML::Key << "simulator" << YAML::Value;
  EmitSimulator(out, config.simulator);
  if (config.shadow_simulator) {
    out << YAML::Key << "shadow_simulator" << YAML::Value;
    EmitSimulator(out, *config.shadow_simulator);
  }
  out << YAML::Key << "attack" << YAML::Value;
  EmitAttack(out, config.attack);
  out << YAML::Key << "privacy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "noise_scale" << YAML::Value
      << Num(config.privacy.noise_scale);
  out << YAML::Key << "clip_bound" << YAML::Value
      << Num(config.privacy.clip_bound);
  out << YAML::Key << "delta" << YAML::Value << Num(config.privacy.delta);
  out << YAML::Key << "epochs" << YAML::Value << Num(config.privacy.epochs);
  out << YAML::EndMap;
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "levels" << YAML::Value;
  EmitFlow(out, config.sweep_levels);
  out << YAML::EndMap;
  out << YAML::Key << "transfer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "configs" << YAML::Value << YAML::BeginSeq;
  for (const NamedSimulatorConfig& named : config.transfer_configs) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << named.name;
    out << YAML::Key << "simulator" << YAML::Value;
    EmitSimulator(out, named.config);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  out << YAML::Key << "defense" << YAML::Value;
  EmitDefense(out, config.defense);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

absl::Status SaveConfig(const ExperimentConfig& config,
                        const std::string& path) {
  return io_internal::WriteFile(path, SerializeConfig(config));
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& config) {
  if (config.n_per_split < 1) {
    return absl::InvalidArgumentError("n_per_split must be >= 1");
  }
  ODMIA_RETURN_IF_ERROR(ValidateSimulatorConfig(config.simulator));
  if (config.shadow_simulator) {
    ODMIA_RETURN_IF_ERROR(ValidateSimulatorConfig(*config.shadow_simulator));
  }
  for (const NamedSimulatorConfig& named : config.transfer_configs) {
    if (absl::Status s = ValidateSimulatorConfig(named.config); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("transfer config '", named.name, "': ", s.message()));
    }
  }
  ODMIA_RETURN_IF_ERROR(ValidateAttackExperiment(config.attack));
  return ValidatePrivacyParams(config.privacy);
}

}  // namespace odmia
