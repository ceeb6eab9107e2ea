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

#include "odmia/io/model.h"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "absl/strings/str_cat.h"
#include "io/file_util.h"
#include "odmia/privacy.h"

namespace odmia {
namespace {

using Json = nlohmann::ordered_json;

absl::Status ModelError(std::string_view path, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(
      "model error at ", std::string(path), ": ", std::string(what)));
}

bool AllFinite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Json CnnSpecJson(const CnnSpec& spec) {
  return Json{{"conv_channels", spec.conv_channels},
              {"fc_units", spec.fc_units},
              {"kernel_size", spec.kernel_size},
              {"pool", spec.pool == Pooling::kMax2 ? "max2" : "none"},
              {"activation",
               spec.activation == Activation::kReLU ? "relu" : "identity"},
              {"dropout_rate", spec.dropout_rate},
              {"input_size", spec.input_size}};
}

Json GbtSpecJson(const GbtSpec& spec) {
  return Json{{"max_depth", spec.max_depth},
              {"n_estimators", spec.n_estimators},
              {"learning_rate", spec.learning_rate},
              {"lambda", spec.lambda},
              {"min_child_weight", spec.min_child_weight}};
}

// Typed reads with path-qualified errors.
class Reader {
 public:
  Reader(const Json& node, std::string path)
      : node_(node), path_(std::move(path)) {}

  std::string Path(std::string_view key) const {
    return path_.empty() ? std::string(key)
                         : absl::StrCat(path_, ".", std::string(key));
  }

  absl::StatusOr<const Json*> Field(std::string_view key) const {
    if (!node_.is_object()) return ModelError(path_, "expected an object");
    auto it = node_.find(std::string(key));
    if (it == node_.end()) return ModelError(Path(key), "missing field");
    return &*it;
  }

  absl::Status Get(std::string_view key, double& out) const {
    absl::StatusOr<const Json*> f = Field(key);
    if (!f.ok()) return f.status();
    if (!(*f)->is_number()) return ModelError(Path(key), "expected a number");
    out = (*f)->get<double>();
    return absl::OkStatus();
  }

  absl::Status Get(std::string_view key, int& out) const {
    absl::StatusOr<const Json*> f = Field(key);
    if (!f.ok()) return f.status();
    if (!(*f)->is_number_integer()) {
      return ModelError(Path(key), "expected an integer");
    }
    const int64_t v = (*f)->get<int64_t>();
    if (v < std::numeric_limits<int>::min() ||
        v > std::numeric_limits<int>::max()) {
      return ModelError(Path(key), "integer out of range");
    }
    out = static_cast<int>(v);
    return absl::OkStatus();
  }

  absl::Status Get(std::string_view key, uint64_t& out) const {
    absl::StatusOr<const Json*> f = Field(key);
    if (!f.ok()) return f.status();
    if (!(*f)->is_number_unsigned()) {
      return ModelError(Path(key), "expected a non-negative integer");
    }
    out = (*f)->get<uint64_t>();
    return absl::OkStatus();
  }

  absl::Status Get(std::string_view key, std::string& out) const {
    absl::StatusOr<const Json*> f = Field(key);
    if (!f.ok()) return f.status();
    if (!(*f)->is_string()) return ModelError(Path(key), "expected a string");
    out = (*f)->get<std::string>();
    return absl::OkStatus();
  }

  template <typename T>
  absl::Status Get(std::string_view key, std::vector<T>& out) const {
    absl::StatusOr<const Json*> f = Field(key);
    if (!f.ok()) return f.status();
    if (!(*f)->is_array()) return ModelError(Path(key), "expected an array");
    out.clear();
    out.reserve((*f)->size());
    for (size_t i = 0; i < (*f)->size(); ++i) {
      const Json& item = (**f)[i];
      const std::string where = absl::StrCat(Path(key), "[", i, "]");
      if constexpr (std::is_same_v<T, int>) {
        if (!item.is_number_integer()) {
          return ModelError(where, "expected an integer");
        }
        out.push_back(item.get<int>());
      } else {
        if (!item.is_number()) return ModelError(where, "expected a number");
        out.push_back(item.get<double>());
      }
    }
    return absl::OkStatus();
  }

 private:
  const Json& node_;
  std::string path_;
};

#define ODMIA_RETURN_IF_ERROR(expr)            \
  do {                                         \
    if (absl::Status _s = (expr); !_s.ok()) {  \
      return _s;                               \
    }                                          \
  } while (false)

absl::Status ReadCnnSpec(const Reader& r, CnnSpec& spec) {
  std::string pool, activation;
  ODMIA_RETURN_IF_ERROR(r.Get("conv_channels", spec.conv_channels));
  ODMIA_RETURN_IF_ERROR(r.Get("fc_units", spec.fc_units));
  ODMIA_RETURN_IF_ERROR(r.Get("kernel_size", spec.kernel_size));
  ODMIA_RETURN_IF_ERROR(r.Get("pool", pool));
  ODMIA_RETURN_IF_ERROR(r.Get("activation", activation));
  ODMIA_RETURN_IF_ERROR(r.Get("dropout_rate", spec.dropout_rate));
  ODMIA_RETURN_IF_ERROR(r.Get("input_size", spec.input_size));
  if (pool == "max2") {
    spec.pool = Pooling::kMax2;
  } else if (pool == "none") {
    spec.pool = Pooling::kNone;
  } else {
    return ModelError(r.Path("pool"), absl::StrCat("unknown value '", pool,
                                                   "'"));
  }
  if (activation == "relu") {
    spec.activation = Activation::kReLU;
  } else if (activation == "identity") {
    spec.activation = Activation::kIdentity;
  } else {
    return ModelError(r.Path("activation"),
                      absl::StrCat("unknown value '", activation, "'"));
  }
  return ValidateCnnSpec(spec);
}

absl::Status ReadGbtSpec(const Reader& r, GbtSpec& spec) {
  ODMIA_RETURN_IF_ERROR(r.Get("max_depth", spec.max_depth));
  ODMIA_RETURN_IF_ERROR(r.Get("n_estimators", spec.n_estimators));
  ODMIA_RETURN_IF_ERROR(r.Get("learning_rate", spec.learning_rate));
  ODMIA_RETURN_IF_ERROR(r.Get("lambda", spec.lambda));
  ODMIA_RETURN_IF_ERROR(r.Get("min_child_weight", spec.min_child_weight));
  return ValidateGbtSpec(spec);
}

absl::Status ReadTree(const Json& node, const std::string& path,
                      int num_features, RegressionTree& tree) {
  Reader r(node, path);
  absl::StatusOr<const Json*> nodes = r.Field("nodes");
  if (!nodes.ok()) return nodes.status();
  if (!(*nodes)->is_array() || (*nodes)->empty()) {
    return ModelError(r.Path("nodes"), "expected a non-empty array");
  }
  const int count = static_cast<int>((*nodes)->size());
  for (int i = 0; i < count; ++i) {
    Reader n((**nodes)[i], absl::StrCat(r.Path("nodes"), "[", i, "]"));
    TreeNode t;
    ODMIA_RETURN_IF_ERROR(n.Get("feature", t.feature));
    ODMIA_RETURN_IF_ERROR(n.Get("threshold", t.threshold));
    ODMIA_RETURN_IF_ERROR(n.Get("left", t.left));
    ODMIA_RETURN_IF_ERROR(n.Get("right", t.right));
    ODMIA_RETURN_IF_ERROR(n.Get("value", t.value));
    if (t.feature >= num_features) {
      return ModelError(n.Path("feature"), "feature index out of range");
    }
    if (t.feature >= 0) {
      for (int child : {t.left, t.right}) {
        if (child <= i || child >= count) {
          return ModelError(n.Path("left"), "child index out of range");
        }
      }
    }
    tree.nodes.push_back(t);
  }
  return absl::OkStatus();
}

absl::Status ReadProvenance(const Reader& r, TrainingProvenance& p) {
  ODMIA_RETURN_IF_ERROR(r.Get("seed", p.seed));
  ODMIA_RETURN_IF_ERROR(r.Get("config_hash", p.config_hash));
  ODMIA_RETURN_IF_ERROR(r.Get("epochs", p.epochs));
  absl::StatusOr<const Json*> eps = r.Field("epsilon");
  if (!eps.ok()) return absl::OkStatus();
  if ((*eps)->is_string() && (*eps)->get<std::string>() == "inf") {
    p.epsilon = kInfiniteEpsilon;
  } else if ((*eps)->is_number()) {
    p.epsilon = (*eps)->get<double>();
  } else {
    return ModelError(r.Path("epsilon"), "expected a number or \"inf\"");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::string> SerializeModel(const Classifier& model) {
  Json doc;
  doc["version"] = kModelVersion;
  doc["family"] = FamilyName(model);
  if (const auto* cnn = std::get_if<CnnModel>(&model.model)) {
    if (!AllFinite(cnn->params) || !std::isfinite(cnn->input_scale)) {
      return absl::InvalidArgumentError("model has non-finite parameters");
    }
    doc["spec"] = CnnSpecJson(cnn->spec);
    doc["input_scale"] = cnn->input_scale;
    doc["params"] = cnn->params;
  } else if (const auto* gbt = std::get_if<GbtModel>(&model.model)) {
    doc["spec"] = GbtSpecJson(gbt->spec);
    doc["num_features"] = gbt->num_features;
    doc["base_margin"] = gbt->base_margin;
    Json trees = Json::array();
    for (const RegressionTree& tree : gbt->trees) {
      Json nodes = Json::array();
      for (const TreeNode& n : tree.nodes) {
        if (!std::isfinite(n.threshold) || !std::isfinite(n.value)) {
          return absl::InvalidArgumentError("model has non-finite parameters");
        }
        nodes.push_back(Json{{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value}});
      }
      trees.push_back(Json{{"nodes", std::move(nodes)}});
    }
    doc["trees"] = std::move(trees);
  } else {
    const auto& lr = std::get<LogisticModel>(model.model);
    if (!AllFinite(lr.params)) {
      return absl::InvalidArgumentError("model has non-finite parameters");
    }
    doc["spec"] = Json{{"input_dim", lr.spec.input_dim},
                       {"dropout_rate", lr.spec.dropout_rate}};
    doc["params"] = lr.params;
  }
  const TrainingProvenance& p = model.provenance;
  Json provenance{{"seed", p.seed},
                  {"config_hash", p.config_hash},
                  {"loss_history", Json::array()},
                  {"epochs", p.epochs}};
  for (double loss : p.loss_history) {
    provenance["loss_history"].push_back(std::isfinite(loss) ? Json(loss)
                                                             : Json("nan"));
  }
  if (p.epsilon) {
    provenance["epsilon"] =
        std::isinf(*p.epsilon) ? Json("inf") : Json(*p.epsilon);
  }
  doc["provenance"] = std::move(provenance);
  return doc.dump() + "\n";
}

absl::StatusOr<Classifier> ParseModel(std::string_view json_text) {
  Json doc = Json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) return ModelError("", "malformed JSON");
  Reader root(doc, "");
  std::string version, family;
  ODMIA_RETURN_IF_ERROR(root.Get("version", version));
  if (version != kModelVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported model version '", version, "'"));
  }
  ODMIA_RETURN_IF_ERROR(root.Get("family", family));
  absl::StatusOr<const Json*> spec_node = root.Field("spec");
  if (!spec_node.ok()) return spec_node.status();
  Reader spec(**spec_node, "spec");

  Classifier out;
  if (family == "cnn") {
    CnnModel m;
    ODMIA_RETURN_IF_ERROR(ReadCnnSpec(spec, m.spec));
    ODMIA_RETURN_IF_ERROR(root.Get("input_scale", m.input_scale));
    ODMIA_RETURN_IF_ERROR(root.Get("params", m.params));
    absl::StatusOr<CnnNetwork> network = CnnNetwork::Create(m.spec);
    if (!network.ok()) return network.status();
    if (m.params.size() != network->parameter_count()) {
      return ModelError("params", absl::StrCat("expected ",
                                               network->parameter_count(),
                                               " values, got ",
                                               m.params.size()));
    }
    out.model = std::move(m);
  } else if (family == "gbt") {
    GbtModel m;
    ODMIA_RETURN_IF_ERROR(ReadGbtSpec(spec, m.spec));
    ODMIA_RETURN_IF_ERROR(root.Get("num_features", m.num_features));
    ODMIA_RETURN_IF_ERROR(root.Get("base_margin", m.base_margin));
    absl::StatusOr<const Json*> trees = root.Field("trees");
    if (!trees.ok()) return trees.status();
    if (!(*trees)->is_array()) return ModelError("trees", "expected an array");
    for (size_t i = 0; i < (*trees)->size(); ++i) {
      RegressionTree tree;
      ODMIA_RETURN_IF_ERROR(ReadTree((**trees)[i], absl::StrCat("trees[", i, "]"),
                                     m.num_features, tree));
      m.trees.push_back(std::move(tree));
    }
    out.model = std::move(m);
  } else if (family == "logistic") {
    LogisticModel m;
    ODMIA_RETURN_IF_ERROR(spec.Get("input_dim", m.spec.input_dim));
    ODMIA_RETURN_IF_ERROR(spec.Get("dropout_rate", m.spec.dropout_rate));
    ODMIA_RETURN_IF_ERROR(ValidateLogisticSpec(m.spec));
    ODMIA_RETURN_IF_ERROR(root.Get("params", m.params));
    if (m.params.size() != LogisticParameterCount(m.spec)) {
      return ModelError("params", "parameter count does not match spec");
    }
    out.model = std::move(m);
  } else {
    return ModelError("family", absl::StrCat("unknown family '", family, "'"));
  }

  absl::StatusOr<const Json*> prov = root.Field("provenance");
  if (!prov.ok()) return prov.status();
  Reader provenance(**prov, "provenance");
  absl::StatusOr<const Json*> losses = provenance.Field("loss_history");
  if (!losses.ok()) return losses.status();
  if (!(*losses)->is_array()) {
    return ModelError("provenance.loss_history", "expected an array");
  }
  {
    for (const Json& loss : **losses) {
      if (loss.is_string() && loss.get<std::string>() == "nan") {
        out.provenance.loss_history.push_back(
            std::numeric_limits<double>::quiet_NaN());
      } else if (loss.is_number()) {
        out.provenance.loss_history.push_back(loss.get<double>());
      } else {
        return ModelError("provenance.loss_history", "expected a number");
      }
    }
  }
  ODMIA_RETURN_IF_ERROR(ReadProvenance(provenance, out.provenance));
  return out;
}

absl::Status SaveModel(const Classifier& model, const std::string& path) {
  absl::StatusOr<std::string> text = SerializeModel(model);
  if (!text.ok()) return text.status();
  return io_internal::WriteFile(path, *text);
}

absl::StatusOr<Classifier> LoadModel(const std::string& path) {
  absl::StatusOr<std::string> text = io_internal::ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Classifier> model = ParseModel(*text);
  if (!model.ok()) {
    return absl::Status(model.status().code(),
                        absl::StrCat(path, ": ", model.status().message()));
  }
  return model;
}

}  // namespace odmia
