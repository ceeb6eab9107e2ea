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

#include "odmia/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "odmia/dp_train.h"
#include "odmia/postprocess.h"
#include "odmia/rng.h"

namespace odmia {
namespace {

Rng ExperimentRng(const AttackExperiment& experiment, std::string_view label) {
  return Rng(experiment.seed).Fork(label);
}

void AppendExample(const MembershipRecord& record,
                   const AttackExperiment& experiment, AttackDataset& out) {
  const DetectionSet harvested =
      Harvest(record.detections, experiment.postprocess);
  if (experiment.kind == AttackKind::kCanvasCnn) {
    out.canvases.push_back({Render(harvested, experiment.canvas),
                            record.label});
  } else {
    out.vectors.push_back({Vectorize(harvested, experiment.n_max),
                           record.label});
  }
  out.image_ids.push_back(record.detections.image_id);
  out.sources.push_back(record.source);
}

// Indices of `records` with each label, in input order.
void PartitionByLabel(std::span<const MembershipRecord> records,
                      std::vector<size_t>& in, std::vector<size_t>& out) {
  for (size_t i = 0; i < records.size(); ++i) {
    (records[i].label == MembershipLabel::kIn ? in : out).push_back(i);
  }
}

// Keeps `keep` of `indices`, chosen by a seeded shuffle, in input order.
std::vector<size_t> Subsample(std::vector<size_t> indices, size_t keep,
                              Rng& rng) {
  rng.Shuffle(std::span<size_t>(indices));
  indices.resize(keep);
  std::sort(indices.begin(), indices.end());
  return indices;
}

absl::Status CheckDisjoint(std::span<const MembershipRecord> shadow,
                           std::span<const MembershipRecord> target) {
  std::unordered_set<std::string> shadow_ids;
  for (const MembershipRecord& r : shadow) {
    shadow_ids.insert(r.detections.image_id);
  }
  for (const MembershipRecord& r : target) {
    if (shadow_ids.contains(r.detections.image_id)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "shadow and target records must be disjoint; image id '",
          r.detections.image_id, "' appears in both"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckSources(std::span<const MembershipRecord> records,
                          RecordSource expected, std::string_view role) {
  for (const MembershipRecord& r : records) {
    if (r.source != expected) {
      return absl::InvalidArgumentError(absl::StrCat(
          std::string(role), " record '", r.detections.image_id,
          "' is tagged as ", std::string(SourceName(r.source))));
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  return kind == AttackKind::kCanvasCnn ? "canvas_cnn" : "gbt_vector";
}

absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name) {
  if (name == "canvas_cnn") return AttackKind::kCanvasCnn;
  if (name == "gbt_vector") return AttackKind::kGbtVector;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attack kind '", std::string(name), "'"));
}

absl::Status ValidateAttackExperiment(const AttackExperiment& experiment) {
  if (absl::Status s = ValidatePostprocessConfig(experiment.postprocess);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = ValidateTrainConfig(experiment.train); !s.ok()) {
    return s;
  }
  if (!(experiment.validation_fraction >= 0.0 &&
        experiment.validation_fraction < 1.0)) {
    return absl::InvalidArgumentError("validation_fraction must be in [0, 1)");
  }
  std::vector<Transform> seen;
  for (Transform t : experiment.augmentation) {
    if (std::find(seen.begin(), seen.end(), t) != seen.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "augmentation lists '", std::string(TransformName(t)), "' twice"));
    }
    seen.push_back(t);
  }
  if (experiment.kind == AttackKind::kCanvasCnn) {
    if (absl::Status s = ValidateCanvasConfig(experiment.canvas); !s.ok()) {
      return s;
    }
    if (absl::Status s = ValidateCnnSpec(experiment.cnn); !s.ok()) return s;
    if (experiment.cnn.input_size != experiment.canvas.size) {
      return absl::InvalidArgumentError(
          absl::StrCat("cnn input_size ", experiment.cnn.input_size,
                       " != canvas size ", experiment.canvas.size));
    }
    return absl::OkStatus();
  }
  if (experiment.n_max < 1) {
    return absl::InvalidArgumentError("n_max must be >= 1");
  }
  return ValidateGbtSpec(experiment.gbt);
}

AttackMetrics ComputeMetrics(std::span<const MembershipLabel> truth,
                             std::span<const MembershipLabel> predicted) {
  AttackMetrics m;
  const size_t n = std::min(truth.size(), predicted.size());
  for (size_t i = 0; i < n; ++i) {
    const bool true_in = truth[i] == MembershipLabel::kIn;
    const bool pred_in = predicted[i] == MembershipLabel::kIn;
    if (true_in) {
      ++(pred_in ? m.counts.in_as_in : m.counts.in_as_out);
    } else {
      ++(pred_in ? m.counts.out_as_in : m.counts.out_as_out);
    }
  }
  const ConfusionCounts& c = m.counts;
  const int64_t total = c.total();
  const int64_t in_total = c.in_as_in + c.in_as_out;
  const int64_t out_total = c.out_as_in + c.out_as_out;
  if (total > 0) {
    m.accuracy = static_cast<double>(c.in_as_in + c.out_as_out) /
                 static_cast<double>(total);
  }
  if (in_total > 0) {
    m.recall_in =
        static_cast<double>(c.in_as_in) / static_cast<double>(in_total);
  }
  if (out_total > 0) {
    m.recall_out =
        static_cast<double>(c.out_as_out) / static_cast<double>(out_total);
  }
  m.average_recall = (m.recall_in + m.recall_out) / 2.0;
  return m;
}

absl::StatusOr<AttackDataset> BuildAttackDataset(
    std::span<const MembershipRecord> records,
    const AttackExperiment& experiment) {
  if (absl::Status s = ValidateAttackExperiment(experiment); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckSources(records, RecordSource::kShadow, "shadow");
      !s.ok()) {
    return s;
  }
  std::vector<size_t> in, out;
  PartitionByLabel(records, in, out);
  if (in.empty() || out.empty()) {
    return absl::InvalidArgumentError(
        "attack training records must contain both in and out labels");
  }
  if (experiment.balance && in.size() != out.size()) {
    Rng rng = ExperimentRng(experiment, "balance");
    const size_t keep = std::min(in.size(), out.size());
    (in.size() > keep ? in : out) =
        Subsample(in.size() > keep ? in : out, keep, rng);
  }
  std::vector<size_t> chosen = in;
  chosen.insert(chosen.end(), out.begin(), out.end());
  std::sort(chosen.begin(), chosen.end());

  AttackDataset data;
  for (size_t i : chosen) AppendExample(records[i], experiment, data);
  if (experiment.kind == AttackKind::kCanvasCnn) {
    const size_t base = data.canvases.size();
    for (Transform t : experiment.augmentation) {
      for (size_t i = 0; i < base; ++i) {
        data.canvases.push_back(
            {Augment(data.canvases[i].canvas, t), data.canvases[i].label});
        data.image_ids.push_back(data.image_ids[i]);
        data.sources.push_back(data.sources[i]);
      }
    }
  }
  return data;
}

AttackDataset BuildEvaluationSet(std::span<const MembershipRecord> records,
                                 const AttackExperiment& experiment) {
  AttackDataset data;
  for (const MembershipRecord& r : records) AppendExample(r, experiment, data);
  return data;
}

absl::StatusOr<Classifier> TrainAttackModel(
    const AttackDataset& data, const AttackExperiment& experiment) {
  for (size_t i = 0; i < data.size(); ++i) {
    if (data.sources[i] != RecordSource::kShadow) {
      return absl::FailedPreconditionError(absl::StrCat(
          "attack training example from '", data.image_ids[i],
          "' is not shadow-derived"));
    }
  }
  if (experiment.kind == AttackKind::kCanvasCnn) {
    TrainConfig train = experiment.train;
    train.seed = Rng(experiment.seed).ForkSeed("train");
    return TrainCnn(experiment.cnn, data.canvases, train);
  }
  return TrainGbtClassifier(experiment.gbt, data.vectors);
}

absl::StatusOr<AttackMetrics> EvaluateAttack(const Classifier& model,
                                             const AttackDataset& data) {
  std::vector<MembershipLabel> truth, predicted;
  const bool canvases = !data.canvases.empty();
  for (size_t i = 0; i < data.size(); ++i) {
    absl::StatusOr<Probabilities> p =
        canvases ? Predict(model, data.canvases[i].canvas)
                 : Predict(model, data.vectors[i].features);
    if (!p.ok()) return p.status();
    truth.push_back(canvases ? data.canvases[i].label : data.vectors[i].label);
    predicted.push_back(Decide(*p));
  }
  return ComputeMetrics(truth, predicted);
}

absl::StatusOr<AttackResult> RunAttack(
    std::span<const MembershipRecord> shadow,
    std::span<const MembershipRecord> target,
    const AttackExperiment& experiment) {
  if (absl::Status s = ValidateAttackExperiment(experiment); !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckDisjoint(shadow, target); !s.ok()) return s;
  if (absl::Status s = CheckSources(shadow, RecordSource::kShadow, "shadow");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckSources(target, RecordSource::kTarget, "target");
      !s.ok()) {
    return s;
  }

  std::vector<size_t> in, out;
  PartitionByLabel(shadow, in, out);
  Rng rng = ExperimentRng(experiment, "validation");
  std::vector<bool> held_out(shadow.size(), false);
  for (std::vector<size_t>* group : {&in, &out}) {
    const size_t n_val = static_cast<size_t>(std::llround(
        experiment.validation_fraction * static_cast<double>(group->size())));
    for (size_t i : Subsample(*group, n_val, rng)) held_out[i] = true;
  }
  std::vector<MembershipRecord> train_records, val_records;
  for (size_t i = 0; i < shadow.size(); ++i) {
    (held_out[i] ? val_records : train_records).push_back(shadow[i]);
  }

  absl::StatusOr<AttackDataset> train_data =
      BuildAttackDataset(train_records, experiment);
  if (!train_data.ok()) return train_data.status();
  absl::StatusOr<Classifier> model = TrainAttackModel(*train_data, experiment);
  if (!model.ok()) return model.status();

  AttackResult result;
  result.training_examples = train_data->size();
  absl::StatusOr<AttackMetrics> target_metrics =
      EvaluateAttack(*model, BuildEvaluationSet(target, experiment));
  if (!target_metrics.ok()) return target_metrics.status();
  result.target = *target_metrics;
  if (!val_records.empty()) {
    absl::StatusOr<AttackMetrics> val_metrics =
        EvaluateAttack(*model, BuildEvaluationSet(val_records, experiment));
    if (!val_metrics.ok()) return val_metrics.status();
    result.validation = *val_metrics;
  }
  result.model = *std::move(model);
  return result;
}

absl::StatusOr<TransferCell> TransferAttack(
    std::span<const MembershipRecord> shadow,
    std::span<const MembershipRecord> target,
    const AttackExperiment& experiment, std::string shadow_name,
    std::string target_name) {
  absl::StatusOr<AttackResult> result = RunAttack(shadow, target, experiment);
  if (!result.ok()) return result.status();
  return TransferCell{std::move(shadow_name), std::move(target_name),
                      *std::move(result)};
}

absl::StatusOr<std::vector<TransferCell>> TransferMatrix(
    std::span<const NamedSimulatorConfig> configs, int n_per_split,
    uint64_t world_seed, const AttackExperiment& experiment) {
  if (configs.empty()) {
    return absl::InvalidArgumentError("transfer matrix needs a config");
  }
  std::vector<TransferCell> cells;
  for (const NamedSimulatorConfig& a : configs) {
    for (const NamedSimulatorConfig& b : configs) {
      absl::StatusOr<World> world =
          GenerateWorld(b.config, n_per_split, world_seed, a.config);
      if (!world.ok()) return world.status();
      std::vector<MembershipRecord> shadow = world->shadow_in;
      shadow.insert(shadow.end(), world->shadow_out.begin(),
                    world->shadow_out.end());
      std::vector<MembershipRecord> target = world->target_in;
      target.insert(target.end(), world->target_out.begin(),
                    world->target_out.end());
      absl::StatusOr<TransferCell> cell =
          TransferAttack(shadow, target, experiment, a.name, b.name);
      if (!cell.ok()) return cell.status();
      cells.push_back(*std::move(cell));
    }
  }
  return cells;
}

absl::StatusOr<std::vector<SweepRow>> OverfitSweep(
    std::span<const double> levels, const SimulatorConfig& base,
    int n_per_split, uint64_t world_seed, const AttackExperiment& experiment) {
  if (levels.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one level");
  }
  for (size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0 && levels[i] <= 1.0) ||
        (i > 0 && !(levels[i] > levels[i - 1]))) {
      return absl::InvalidArgumentError(
          "levels must be strictly increasing within [0, 1]");
    }
  }
  std::vector<SweepRow> rows;
  for (double level : levels) {
    SimulatorConfig config = base;
    config.overfit_level = level;
    absl::StatusOr<World> world =
        GenerateWorld(config, n_per_split, world_seed);
    if (!world.ok()) return world.status();
    std::vector<MembershipRecord> shadow = world->shadow_in;
    shadow.insert(shadow.end(), world->shadow_out.begin(),
                  world->shadow_out.end());
    std::vector<MembershipRecord> target = world->target_in;
    target.insert(target.end(), world->target_out.begin(),
                  world->target_out.end());
    absl::StatusOr<AttackResult> result =
        RunAttack(shadow, target, experiment);
    if (!result.ok()) return result.status();
    rows.push_back(
        {level, SeparabilityProxy(config), result->target, result->validation});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Defense evaluation.

namespace {

struct SurrogateData {
  std::vector<LabeledVector> members;
  std::vector<LabeledVector> non_members;
};

std::vector<LabeledVector> DrawTask(const SurrogateTask& task, int n,
                                    bool noisy, Rng rng) {
  const double shift = task.signal / std::sqrt(static_cast<double>(task.dim));
  std::vector<LabeledVector> out(static_cast<size_t>(n));
  for (LabeledVector& example : out) {
    const bool positive = rng.Uniform() < 0.5;
    example.features.values.resize(static_cast<size_t>(task.dim));
    for (double& v : example.features.values) {
      v = (positive ? shift : -shift) + rng.Gaussian();
    }
    bool label = positive;
    if (noisy && rng.Uniform() < task.label_noise) label = !label;
    example.label = label ? MembershipLabel::kIn : MembershipLabel::kOut;
  }
  return out;
}

SurrogateData DrawSurrogateData(const SurrogateTask& task, const Rng& root) {
  return {DrawTask(task, task.members, true, root.Fork("members")),
          DrawTask(task, task.members, true, root.Fork("non_members"))};
}

// CNN surrogates see each task vector as a square grid, row by row.
LabeledCanvas AsCanvas(const LabeledVector& example) {
  const int side = static_cast<int>(
      std::lround(std::sqrt(static_cast<double>(example.features.values.size()))));
  return {Canvas(side, example.features.values), example.label};
}

std::vector<LabeledCanvas> AsCanvases(std::span<const LabeledVector> data) {
  std::vector<LabeledCanvas> out;
  out.reserve(data.size());
  for (const LabeledVector& example : data) out.push_back(AsCanvas(example));
  return out;
}

absl::StatusOr<Probabilities> SurrogatePredict(const Classifier& model,
                                               const LabeledVector& example) {
  if (std::holds_alternative<CnnModel>(model.model)) {
    return Predict(model, AsCanvas(example).canvas);
  }
  return Predict(model, example.features);
}

// Confidence of `model` in each example's own label.
absl::StatusOr<std::vector<double>> OwnLabelConfidence(
    const Classifier& model, std::span<const LabeledVector> data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const LabeledVector& example : data) {
    absl::StatusOr<Probabilities> p = SurrogatePredict(model, example);
    if (!p.ok()) return p.status();
    out.push_back(example.label == MembershipLabel::kIn ? p->in : p->out);
  }
  return out;
}

struct ScoredMembership {
  std::vector<double> confidence;
  std::vector<MembershipLabel> membership;
};

absl::StatusOr<ScoredMembership> ScoreMembership(const Classifier& model,
                                                 const SurrogateData& data) {
  ScoredMembership out;
  for (const auto* group : {&data.members, &data.non_members}) {
    absl::StatusOr<std::vector<double>> c = OwnLabelConfidence(model, *group);
    if (!c.ok()) return c.status();
    out.confidence.insert(out.confidence.end(), c->begin(), c->end());
    out.membership.insert(out.membership.end(), group->size(),
                          group == &data.members ? MembershipLabel::kIn
                                                 : MembershipLabel::kOut);
  }
  return out;
}

std::vector<MembershipLabel> ApplyThreshold(std::span<const double> scores,
                                            double threshold) {
  std::vector<MembershipLabel> out;
  out.reserve(scores.size());
  for (double s : scores) {
    out.push_back(s > threshold ? MembershipLabel::kIn : MembershipLabel::kOut);
  }
  return out;
}

// The threshold t maximising the accuracy of "in iff confidence > t",
// searched over -infinity and every observed confidence; ties keep the
// smallest t.
double FitThreshold(const ScoredMembership& shadow) {
  std::vector<double> candidates = shadow.confidence;
  candidates.push_back(-std::numeric_limits<double>::infinity());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best = candidates.front();
  double best_accuracy = -1.0;
  for (double t : candidates) {
    const double accuracy =
        ComputeMetrics(shadow.membership,
                       ApplyThreshold(shadow.confidence, t))
            .accuracy;
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best = t;
    }
  }
  return best;
}

struct TrainedSurrogate {
  Classifier model;
  double epsilon = kInfiniteEpsilon;
  double epochs = 0.0;
};

absl::StatusOr<TrainedSurrogate> TrainSurrogate(
    const DefenseExperiment& experiment, const Defense& defense,
    std::span<const LabeledVector> members) {
  if (const auto* gbt = std::get_if<GbtSpec>(&experiment.surrogate)) {
    if (defense.kind == Defense::Kind::kDp) {
      PrivacyParams privacy{defense.noise_scale, defense.clip_bound,
                            experiment.delta, 0.0};
      absl::StatusOr<DpTrainResult> dp =
          DpTrain(*gbt, members, experiment.train, privacy);
      if (!dp.ok()) return dp.status();
    }
    if (defense.kind == Defense::Kind::kDropout) {
      return absl::UnimplementedError(
          "unsupported learner: dropout needs a differentiable surrogate");
    }
    absl::StatusOr<Classifier> model = TrainGbtClassifier(*gbt, members);
    if (!model.ok()) return model.status();
    return TrainedSurrogate{*std::move(model), kInfiniteEpsilon,
                            static_cast<double>(gbt->n_estimators)};
  }
  if (const auto* cnn = std::get_if<CnnSpec>(&experiment.surrogate)) {
    CnnSpec spec = *cnn;
    spec.input_size = static_cast<int>(
        std::lround(std::sqrt(static_cast<double>(experiment.task.dim))));
    if (defense.kind == Defense::Kind::kDropout) {
      spec.dropout_rate = defense.dropout_rate;
    }
    const std::vector<LabeledCanvas> canvases = AsCanvases(members);
    if (defense.kind == Defense::Kind::kDp) {
      PrivacyParams privacy{defense.noise_scale, defense.clip_bound,
                            experiment.delta, 0.0};
      absl::StatusOr<DpTrainResult> dp = DpTrain(
          spec, std::span<const LabeledCanvas>(canvases), experiment.train,
          privacy);
      if (!dp.ok()) return dp.status();
      return TrainedSurrogate{std::move(dp->model), dp->epsilon, dp->epochs};
    }
    absl::StatusOr<Classifier> model =
        TrainCnn(spec, canvases, experiment.train);
    if (!model.ok()) return model.status();
    const double epochs = model->provenance.epochs;
    return TrainedSurrogate{*std::move(model), kInfiniteEpsilon, epochs};
  }
  LogisticSpec spec = std::get<LogisticSpec>(experiment.surrogate);
  spec.input_dim = experiment.task.dim;
  if (defense.kind == Defense::Kind::kDropout) {
    spec.dropout_rate = defense.dropout_rate;
  }
  if (defense.kind == Defense::Kind::kDp) {
    PrivacyParams privacy{defense.noise_scale, defense.clip_bound,
                          experiment.delta, 0.0};
    absl::StatusOr<DpTrainResult> dp =
        DpTrain(spec, members, experiment.train, privacy);
    if (!dp.ok()) return dp.status();
    return TrainedSurrogate{std::move(dp->model), dp->epsilon, dp->epochs};
  }
  absl::StatusOr<Classifier> model =
      TrainLogistic(spec, members, experiment.train);
  if (!model.ok()) return model.status();
  const double epochs = model->provenance.epochs;
  return TrainedSurrogate{*std::move(model), kInfiniteEpsilon, epochs};
}

}  // namespace

std::string DefenseName(const Defense& defense) {
  switch (defense.kind) {
    case Defense::Kind::kNone:
      return "none";
    case Defense::Kind::kDropout:
      return absl::StrCat("dropout(", defense.dropout_rate, ")");
    case Defense::Kind::kDp:
      return absl::StrCat("dp(sigma=", defense.noise_scale,
                          ", C=", defense.clip_bound, ")");
  }
  return "unknown";
}

absl::StatusOr<std::vector<DefenseRow>> DefenseEval(
    const DefenseExperiment& experiment) {
  if (experiment.defenses.empty()) {
    return absl::InvalidArgumentError("defense list is empty");
  }
  const SurrogateTask& task = experiment.task;
  if (task.dim < 1 || task.members < 1 || task.test_size < 1 ||
      !(task.signal >= 0.0) ||
      !(task.label_noise >= 0.0 && task.label_noise < 0.5)) {
    return absl::InvalidArgumentError("invalid surrogate task");
  }
  if (std::holds_alternative<CnnSpec>(experiment.surrogate)) {
    const long side =
        std::lround(std::sqrt(static_cast<double>(task.dim)));
    if (side * side != task.dim) {
      return absl::InvalidArgumentError(
          "a CNN surrogate needs a square task dimension");
    }
  }
  for (const Defense& d : experiment.defenses) {
    if (d.kind == Defense::Kind::kDropout &&
        !(d.dropout_rate >= 0.0 && d.dropout_rate < 1.0)) {
      return absl::InvalidArgumentError("dropout rate must be in [0, 1)");
    }
  }

  DefenseExperiment resolved = experiment;
  resolved.train.seed = Rng(experiment.seed).ForkSeed("train");
  const Rng root(experiment.seed);
  const SurrogateData shadow = DrawSurrogateData(task, root.Fork("shadow"));
  const SurrogateData target = DrawSurrogateData(task, root.Fork("target"));
  const std::vector<LabeledVector> test =
      DrawTask(task, task.test_size, false, root.Fork("test"));

  std::vector<DefenseRow> rows;
  for (const Defense& defense : experiment.defenses) {
    absl::StatusOr<TrainedSurrogate> shadow_model =
        TrainSurrogate(resolved, defense, shadow.members);
    if (!shadow_model.ok()) return shadow_model.status();
    absl::StatusOr<TrainedSurrogate> target_model =
        TrainSurrogate(resolved, defense, target.members);
    if (!target_model.ok()) return target_model.status();

    absl::StatusOr<ScoredMembership> shadow_scores =
        ScoreMembership(shadow_model->model, shadow);
    if (!shadow_scores.ok()) return shadow_scores.status();
    absl::StatusOr<ScoredMembership> target_scores =
        ScoreMembership(target_model->model, target);
    if (!target_scores.ok()) return target_scores.status();

    DefenseRow row;
    row.defense = defense;
    row.threshold = FitThreshold(*shadow_scores);
    row.attack = ComputeMetrics(
        target_scores->membership,
        ApplyThreshold(target_scores->confidence, row.threshold));
    size_t correct = 0;
    for (const LabeledVector& example : test) {
      absl::StatusOr<Probabilities> p =
          SurrogatePredict(target_model->model, example);
      if (!p.ok()) return p.status();
      correct += Decide(*p) == example.label;
    }
    row.utility =
        static_cast<double>(correct) / static_cast<double>(test.size());
    row.epsilon = target_model->epsilon;
    row.epochs = target_model->epochs;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace odmia
