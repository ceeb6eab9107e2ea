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

// Shadow-model attack experiments: build labelled attack data from shadow
// records, train the attack model, evaluate it on target records, and the
// sweeps built on top (transfer matrices, overfitting sweeps, defenses).
//
// Seeds. Every random choice derives from AttackExperiment::seed through
// named forks: "validation" (shadow holdout), "balance" (downsampling) and
// "train" (the attack model's TrainConfig seed, which replaces
// AttackExperiment::train.seed).

#ifndef ODMIA_PIPELINE_H_
#define ODMIA_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "odmia/canvas.h"
#include "odmia/features.h"
#include "odmia/learners/classifier.h"
#include "odmia/privacy.h"
#include "odmia/simulator.h"
#include "odmia/types.h"

namespace odmia {

enum class AttackKind { kCanvasCnn, kGbtVector };

std::string_view AttackKindName(AttackKind kind);  // "canvas_cnn" / "gbt_vector"
absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name);

struct AttackExperiment {
  AttackKind kind = AttackKind::kCanvasCnn;
  CanvasConfig canvas;
  PostprocessConfig postprocess;
  // Applied to training canvases only; the original is always kept.
  std::vector<Transform> augmentation;
  // Used for kCanvasCnn; input_size must equal canvas.size.
  CnnSpec cnn;
  // Used for kGbtVector.
  GbtSpec gbt;
  int n_max = kDefaultMaxBoxes;
  TrainConfig train;
  bool balance = true;
  double validation_fraction = 0.2;
  uint64_t seed = 0;

  friend bool operator==(const AttackExperiment&,
                         const AttackExperiment&) = default;
};

absl::Status ValidateAttackExperiment(const AttackExperiment& experiment);

struct ConfusionCounts {
  // Rows are the true label, columns the prediction.
  int64_t in_as_in = 0;
  int64_t in_as_out = 0;
  int64_t out_as_in = 0;
  int64_t out_as_out = 0;

  int64_t total() const { return in_as_in + in_as_out + out_as_in + out_as_out; }
  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

struct AttackMetrics {
  double accuracy = 0.0;
  double recall_in = 0.0;
  double recall_out = 0.0;
  double average_recall = 0.0;
  ConfusionCounts counts;

  friend bool operator==(const AttackMetrics&, const AttackMetrics&) = default;
};

// Recall of a class with no examples is reported as 0. `truth` and
// `predicted` must have equal length.
AttackMetrics ComputeMetrics(std::span<const MembershipLabel> truth,
                             std::span<const MembershipLabel> predicted);

struct AttackDataset {
  // Exactly one of these is filled, according to the attack kind.
  std::vector<LabeledCanvas> canvases;
  std::vector<LabeledVector> vectors;
  // Per example: the image id and source tag of the record it came from.
  std::vector<std::string> image_ids;
  std::vector<RecordSource> sources;

  size_t size() const { return image_ids.size(); }
};

// Harvests each shadow record with the experiment's postprocess config and
// turns it into a canvas or a feature vector. With balance on, the larger
// label class is downsampled to the size of the smaller; canvases are then
// multiplied by the augmentation set (originals first, then one block per
// transform in the configured order). Records whose source is not kShadow
// are rejected, as are record sets missing a label.
absl::StatusOr<AttackDataset> BuildAttackDataset(
    std::span<const MembershipRecord> records,
    const AttackExperiment& experiment);

// As BuildAttackDataset but with no balancing, no augmentation and no
// source restriction; used for evaluation.
AttackDataset BuildEvaluationSet(std::span<const MembershipRecord> records,
                                 const AttackExperiment& experiment);

// Trains the attack model. Fails when any example is not shadow-derived.
absl::StatusOr<Classifier> TrainAttackModel(const AttackDataset& data,
                                            const AttackExperiment& experiment);

absl::StatusOr<AttackMetrics> EvaluateAttack(const Classifier& model,
                                             const AttackDataset& data);

struct AttackResult {
  AttackMetrics target;
  AttackMetrics validation;
  Classifier model;
  size_t training_examples = 0;
};

// Splits the shadow records per label into training and validation parts
// (validation_fraction of each label, rounded to nearest), trains on the
// training part and evaluates the frozen model on the validation part and
// on every target record. Shadow and target image ids must be disjoint;
// shadow records must carry RecordSource::kShadow and target records
// RecordSource::kTarget.
absl::StatusOr<AttackResult> RunAttack(
    std::span<const MembershipRecord> shadow,
    std::span<const MembershipRecord> target,
    const AttackExperiment& experiment);

struct NamedSimulatorConfig {
  std::string name;
  SimulatorConfig config;

  friend bool operator==(const NamedSimulatorConfig&,
                         const NamedSimulatorConfig&) = default;
};

struct TransferCell {
  std::string shadow_name;
  std::string target_name;
  AttackResult result;
};

// RunAttack with records from two possibly different worlds, labelled for
// a transfer table.
absl::StatusOr<TransferCell> TransferAttack(
    std::span<const MembershipRecord> shadow,
    std::span<const MembershipRecord> target,
    const AttackExperiment& experiment, std::string shadow_name,
    std::string target_name);

// Every (shadow config, target config) pair, row-major over `configs`.
// Cell (A, B) draws its world with GenerateWorld(B, n, seed, A), so each
// column shares identical target records.
absl::StatusOr<std::vector<TransferCell>> TransferMatrix(
    std::span<const NamedSimulatorConfig> configs, int n_per_split,
    uint64_t world_seed, const AttackExperiment& experiment);

struct SweepRow {
  double level = 0.0;
  double separability = 0.0;
  AttackMetrics target;
  AttackMetrics validation;
};

// One world and one attack per level, all with the same world seed and the
// same experiment. Levels must be strictly increasing within [0, 1].
absl::StatusOr<std::vector<SweepRow>> OverfitSweep(
    std::span<const double> levels, const SimulatorConfig& base,
    int n_per_split, uint64_t world_seed, const AttackExperiment& experiment);

// Defense experiments use a differentiable surrogate target trained on a
// synthetic two-class Gaussian task: x ~ N(+-signal * 1 / sqrt(dim), I)
// with a fraction of training labels flipped, so an unregularised model
// memorises its training set. The attack thresholds the surrogate's
// confidence in each record's own label; the threshold is fitted on a
// shadow surrogate trained the same way on disjoint data.
struct SurrogateTask {
  int dim = 900;
  int members = 100;  // Training records per surrogate (= non-members).
  double signal = 2.0;
  double label_noise = 0.2;
  int test_size = 1000;

  friend bool operator==(const SurrogateTask&, const SurrogateTask&) = default;
};

struct Defense {
  enum class Kind { kNone, kDropout, kDp };
  Kind kind = Kind::kNone;
  double dropout_rate = 0.0;
  double noise_scale = 0.0;
  double clip_bound = 1.0;

  friend bool operator==(const Defense&, const Defense&) = default;
};

std::string DefenseName(const Defense& defense);

struct DefenseExperiment {
  SurrogateTask task;
  // input_dim (logistic) or input_size (CNN, which reads each task vector
  // as a sqrt(dim) x sqrt(dim) grid) is taken from the task.
  LearnerSpec surrogate = LogisticSpec{};
  TrainConfig train{.learning_rate = 0.05, .batch_size = 10, .epochs = 100};
  double delta = kDefaultDelta;
  std::vector<Defense> defenses = {
      {.kind = Defense::Kind::kNone},
      {.kind = Defense::Kind::kDropout, .dropout_rate = 0.5},
      {.kind = Defense::Kind::kDp, .noise_scale = 1.0, .clip_bound = 1.0},
      {.kind = Defense::Kind::kDp, .noise_scale = 4.0, .clip_bound = 1.0}};
  uint64_t seed = 0;

  friend bool operator==(const DefenseExperiment&,
                         const DefenseExperiment&) = default;
};

struct DefenseRow {
  Defense defense;
  double utility = 0.0;  // Surrogate accuracy on fresh test data.
  double threshold = 0.0;
  AttackMetrics attack;
  double epsilon = kInfiniteEpsilon;
  double epochs = 0.0;
};

// One row per defense. All rows share the data and the training seed,
// which derives from experiment.seed (fork "train") and replaces
// experiment.train.seed. DP rows go through DpTrain; GBT surrogates
// support only the undefended row.
absl::StatusOr<std::vector<DefenseRow>> DefenseEval(
    const DefenseExperiment& experiment);

}  // namespace odmia

#endif  // ODMIA_PIPELINE_H_
