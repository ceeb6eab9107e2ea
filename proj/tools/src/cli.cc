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

#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "odmia/canvas.h"
#include "odmia/io/canvas_image.h"
#include "odmia/io/config.h"
#include "odmia/io/dump.h"
#include "odmia/io/model.h"
#include "odmia/io/report.h"
#include "odmia/pipeline.h"
#include "odmia/postprocess.h"
#include "odmia/privacy.h"
#include "odmia/simulator.h"

namespace odmia::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> n_per_split;
};

absl::StatusOr<ExperimentConfig> ResolveConfig(const CommonOptions& options) {
  ExperimentConfig config;
  if (!options.config_path.empty()) {
    absl::StatusOr<ExperimentConfig> loaded = LoadConfig(options.config_path);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  if (options.seed) SetSeed(config, *options.seed);
  if (options.n_per_split) config.n_per_split = *options.n_per_split;
  if (absl::Status s = ValidateExperimentConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<std::string> ReadBack(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::InternalError(absl::StrCat("cannot read back '", path, "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes `contents` to `path` (or `out` when path is empty) and confirms
// the file reads back unchanged.
absl::Status Emit(const std::string& path, const std::string& contents,
                  std::ostream& out) {
  if (path.empty()) {
    out << contents;
    return out ? absl::OkStatus()
               : absl::InternalError("cannot write to standard output");
  }
  {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << contents;
    if (!file) {
      return absl::InternalError(
          absl::StrCat("I/O error: cannot write '", path, "'"));
    }
  }
  absl::StatusOr<std::string> back = ReadBack(path);
  if (!back.ok()) return back.status();
  if (*back != contents) {
    return absl::InternalError(absl::StrCat("'", path, "' did not read back"));
  }
  return absl::OkStatus();
}

absl::Status EnsureDirectory(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    return absl::InternalError(
        absl::StrCat("I/O error: cannot create directory '", path, "'"));
  }
  return absl::OkStatus();
}

std::string FileStem(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                      c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? std::string("_") : out;
}

void PrintWarnings(const std::vector<std::string>& warnings,
                   std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
  CommonOptions common;
  std::string out_dir;
};

absl::Status Simulate(const SimulateOptions& options, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  absl::StatusOr<World> world =
      GenerateWorld(config->simulator, config->n_per_split, config->seed,
                    config->shadow_simulator);
  if (!world.ok()) return world.status();
  if (absl::Status s = EnsureDirectory(options.out_dir); !s.ok()) return s;
  if (absl::Status s = SaveWorld(*world, options.out_dir, "simulator");
      !s.ok()) {
    return s;
  }
  absl::StatusOr<World> back = LoadWorld(options.out_dir);
  if (!back.ok()) return back.status();
  if (!(*back == *world)) {
    return absl::InternalError("written world did not read back");
  }
  std::ostringstream unused;
  if (absl::Status s =
          Emit((fs::path(options.out_dir) / "config.yaml").string(),
               SerializeConfig(*config), unused);
      !s.ok()) {
    return s;
  }
  err << "wrote " << 4 * config->n_per_split << " records to "
      << options.out_dir << "\n";
  return absl::OkStatus();
}

// --- render ----------------------------------------------------------------

struct RenderOptions {
  CommonOptions common;
  std::string in_path;
  std::string out_dir;
  std::string format = "pgm";
};

absl::Status RenderDump(const RenderOptions& options, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  absl::StatusOr<ImageFormat> format = ParseImageFormat(options.format);
  if (!format.ok()) return format.status();
  absl::StatusOr<ParsedDump> dump = LoadDump(options.in_path);
  if (!dump.ok()) return dump.status();
  PrintWarnings(dump->warnings, err);
  if (absl::Status s = EnsureDirectory(options.out_dir); !s.ok()) return s;
  const std::string extension = *format == ImageFormat::kPgm ? ".pgm" : ".png";
  std::vector<std::string> written;
  for (const DetectionSet& raw : dump->dump.images) {
    const Canvas canvas =
        Render(Harvest(raw, config->attack.postprocess), config->attack.canvas);
    const std::string path =
        (fs::path(options.out_dir) / (FileStem(raw.image_id) + extension))
            .string();
    if (std::find(written.begin(), written.end(), path) != written.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "image id '", raw.image_id, "' maps to an already written file"));
    }
    if (absl::Status s = ExportCanvas(canvas, path, *format); !s.ok()) {
      return s;
    }
    absl::StatusOr<ImportedCanvas> back = ImportCanvas(path, *format);
    if (!back.ok()) return back.status();
    if (back->canvas.size() != canvas.size()) {
      return absl::InternalError(
          absl::StrCat("'", path, "' did not read back"));
    }
    written.push_back(path);
  }
  err << "wrote " << written.size() << " canvases to " << options.out_dir
      << "\n";
  return absl::OkStatus();
}

// --- attack ----------------------------------------------------------------

struct AttackOptions {
  CommonOptions common;
  std::string shadow_path;
  std::string target_path;
  std::string report_path;
  std::string model_path;
  std::string features_path;
};

absl::Status Attack(const AttackOptions& options, std::ostream& out,
                    std::ostream& err) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  std::vector<std::string> warnings;
  absl::StatusOr<std::vector<MembershipRecord>> shadow =
      LoadRecords(options.shadow_path, RecordSource::kShadow, &warnings);
  if (!shadow.ok()) return shadow.status();
  absl::StatusOr<std::vector<MembershipRecord>> target =
      LoadRecords(options.target_path, RecordSource::kTarget, &warnings);
  if (!target.ok()) return target.status();
  PrintWarnings(warnings, err);
  absl::StatusOr<AttackResult> result =
      RunAttack(*shadow, *target, config->attack);
  if (!result.ok()) return result.status();
  if (!options.model_path.empty()) {
    if (absl::Status s = SaveModel(result->model, options.model_path);
        !s.ok()) {
      return s;
    }
    absl::StatusOr<Classifier> back = LoadModel(options.model_path);
    if (!back.ok()) return back.status();
    if (!(*back == result->model)) {
      return absl::InternalError("written model did not read back");
    }
  }
  if (!options.features_path.empty()) {
    AttackExperiment vector_experiment = config->attack;
    vector_experiment.kind = AttackKind::kGbtVector;
    const AttackDataset dataset =
        BuildEvaluationSet(*target, vector_experiment);
    if (absl::Status s = Emit(options.features_path, FeatureCsv(dataset), out);
        !s.ok()) {
      return s;
    }
  }
  return Emit(options.report_path, AttackReport(*config, *result), out);
}

// --- transfer --------------------------------------------------------------

struct TransferOptions {
  CommonOptions common;
  std::vector<std::string> shadow_configs;
  std::vector<std::string> target_configs;
  std::string report_path;
  std::string csv_path;
};

absl::StatusOr<NamedSimulatorConfig> LoadNamed(const std::string& path) {
  absl::StatusOr<ExperimentConfig> config = LoadConfig(path);
  if (!config.ok()) return config.status();
  return NamedSimulatorConfig{fs::path(path).stem().string(),
                              config->simulator};
}

absl::Status Transfer(const TransferOptions& options, std::ostream& out) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  std::vector<TransferCell> cells;
  if (options.shadow_configs.empty() && options.target_configs.empty()) {
    if (config->transfer_configs.empty()) {
      return absl::InvalidArgumentError(
          "transfer needs --shadow-config/--target-config or "
          "transfer.configs in the config file");
    }
    absl::StatusOr<std::vector<TransferCell>> matrix =
        TransferMatrix(config->transfer_configs, config->n_per_split,
                       config->seed, config->attack);
    if (!matrix.ok()) return matrix.status();
    cells = *std::move(matrix);
  } else {
    if (options.shadow_configs.empty() || options.target_configs.empty()) {
      return absl::InvalidArgumentError(
          "--shadow-config and --target-config must be given together");
    }
    std::vector<NamedSimulatorConfig> shadows, targets;
    for (const std::string& path : options.shadow_configs) {
      absl::StatusOr<NamedSimulatorConfig> named = LoadNamed(path);
      if (!named.ok()) return named.status();
      shadows.push_back(*std::move(named));
    }
    for (const std::string& path : options.target_configs) {
      absl::StatusOr<NamedSimulatorConfig> named = LoadNamed(path);
      if (!named.ok()) return named.status();
      targets.push_back(*std::move(named));
    }
    config->transfer_configs.clear();
    for (const auto* list : {&shadows, &targets}) {
      for (const NamedSimulatorConfig& named : *list) {
        bool seen = false;
        for (const NamedSimulatorConfig& prior : config->transfer_configs) {
          if (prior.name != named.name) continue;
          if (!(prior == named)) {
            return absl::InvalidArgumentError(absl::StrCat(
                "two different simulator configs are named '", named.name,
                "'"));
          }
          seen = true;
        }
        if (!seen) config->transfer_configs.push_back(named);
      }
    }
    for (const NamedSimulatorConfig& a : shadows) {
      for (const NamedSimulatorConfig& b : targets) {
        absl::StatusOr<World> world =
            GenerateWorld(b.config, config->n_per_split, config->seed,
                          a.config);
        if (!world.ok()) return world.status();
        std::vector<MembershipRecord> shadow = world->shadow_in;
        shadow.insert(shadow.end(), world->shadow_out.begin(),
                      world->shadow_out.end());
        std::vector<MembershipRecord> target = world->target_in;
        target.insert(target.end(), world->target_out.begin(),
                      world->target_out.end());
        absl::StatusOr<TransferCell> cell =
            TransferAttack(shadow, target, config->attack, a.name, b.name);
        if (!cell.ok()) return cell.status();
        cells.push_back(*std::move(cell));
      }
    }
  }
  if (!options.csv_path.empty()) {
    if (absl::Status s = Emit(options.csv_path, TransferCsv(cells), out);
        !s.ok()) {
      return s;
    }
  }
  return Emit(options.report_path, TransferReport(*config, cells), out);
}

// --- sweep -----------------------------------------------------------------

struct SweepOptions {
  CommonOptions common;
  std::vector<double> levels;
  std::string report_path;
};

absl::Status Sweep(const SweepOptions& options, std::ostream& out) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  if (!options.levels.empty()) config->sweep_levels = options.levels;
  absl::StatusOr<std::vector<SweepRow>> rows =
      OverfitSweep(config->sweep_levels, config->simulator,
                   config->n_per_split, config->seed, config->attack);
  if (!rows.ok()) return rows.status();
  return Emit(options.report_path, SweepReport(*config, *rows), out);
}

// --- defend ----------------------------------------------------------------

struct DefendOptions {
  CommonOptions common;
  std::string report_path;
};

absl::Status Defend(const DefendOptions& options, std::ostream& out) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(options.common);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::vector<DefenseRow>> rows = DefenseEval(config->defense);
  if (!rows.ok()) return rows.status();
  return Emit(options.report_path, DefenseReport(*config, *rows), out);
}

// --- account ---------------------------------------------------------------

struct AccountOptions {
  double sigma = 1.0;
  double epochs = 1.0;
  double delta = kDefaultDelta;
  std::optional<uint64_t> seed;
};

absl::Status Account(const AccountOptions& options, std::ostream& out) {
  PrivacyParams params;
  params.noise_scale = options.sigma;
  params.epochs = options.epochs;
  params.delta = options.delta;
  if (absl::Status s = ValidatePrivacyParams(params); !s.ok()) return s;
  const double epsilon = PrivacyLoss(params);
  if (std::isinf(epsilon)) {
    out << "inf\n";
  } else {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", epsilon);
    out << buffer << "\n";
  }
  return out ? absl::OkStatus()
             : absl::InternalError("cannot write to standard output");
}

void AddCommon(CLI::App* command, CommonOptions& common, bool needs_config) {
  CLI::Option* config =
      command->add_option("--config", common.config_path, "YAML config")
          ->check(CLI::ExistingFile);
  if (needs_config) config->required();
  command->add_option("--seed", common.seed,
                      "Override the experiment seed");
  command->add_option("--n-per-split", common.n_per_split,
                      "Override records per split")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Membership inference against object detector outputs",
               "odmia"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  SimulateOptions simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Generate a synthetic world of dumps");
  AddCommon(simulate_cmd, simulate.common, false);
  simulate_cmd->add_option("--out", simulate.out_dir, "Output directory")
      ->required();

  RenderOptions render;
  CLI::App* render_cmd =
      app.add_subcommand("render", "Render a dump's images to canvases");
  AddCommon(render_cmd, render.common, false);
  render_cmd->add_option("--in", render.in_path, "Detection dump")
      ->required()
      ->check(CLI::ExistingFile);
  render_cmd->add_option("--out", render.out_dir, "Output directory")
      ->required();
  render_cmd->add_option("--format", render.format, "pgm or png")
      ->check(CLI::IsMember({"pgm", "png"}));

  AttackOptions attack;
  CLI::App* attack_cmd =
      app.add_subcommand("attack", "Train on shadow dumps, attack target");
  AddCommon(attack_cmd, attack.common, false);
  attack_cmd->add_option("--shadow", attack.shadow_path,
                         "Shadow dump file or directory")
      ->required()
      ->check(CLI::ExistingPath);
  attack_cmd->add_option("--target", attack.target_path,
                         "Target dump file or directory")
      ->required()
      ->check(CLI::ExistingPath);
  attack_cmd->add_option("--report", attack.report_path,
                         "JSON report path (default: stdout)");
  attack_cmd->add_option("--model-out", attack.model_path,
                         "Save the trained attack model");
  attack_cmd->add_option("--features-csv", attack.features_path,
                         "Export target feature vectors as CSV");

  TransferOptions transfer;
  CLI::App* transfer_cmd =
      app.add_subcommand("transfer", "Shadow/target transfer matrix");
  AddCommon(transfer_cmd, transfer.common, false);
  transfer_cmd->add_option("--shadow-config", transfer.shadow_configs,
                           "Config whose simulator drives the shadow side")
      ->check(CLI::ExistingFile);
  transfer_cmd->add_option("--target-config", transfer.target_configs,
                           "Config whose simulator drives the target side")
      ->check(CLI::ExistingFile);
  transfer_cmd->add_option("--report", transfer.report_path,
                           "JSON report path (default: stdout)");
  transfer_cmd->add_option("--csv", transfer.csv_path,
                           "Target accuracy matrix as CSV");

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Attack accuracy across overfit levels");
  AddCommon(sweep_cmd, sweep.common, false);
  sweep_cmd->add_option("--levels", sweep.levels, "Comma-separated levels")
      ->delimiter(',');
  sweep_cmd->add_option("--report", sweep.report_path,
                        "JSON report path (default: stdout)");

  DefendOptions defend;
  CLI::App* defend_cmd =
      app.add_subcommand("defend", "Attack a surrogate under each defense");
  AddCommon(defend_cmd, defend.common, false);
  defend_cmd->add_option("--report", defend.report_path,
                         "JSON report path (default: stdout)");

  AccountOptions account;
  CLI::App* account_cmd =
      app.add_subcommand("account", "Print epsilon for DP-SGD parameters");
  account_cmd->add_option("--sigma", account.sigma, "Noise multiplier")
      ->required();
  account_cmd->add_option("--epochs", account.epochs, "Passes over the data")
      ->required();
  account_cmd->add_option("--delta", account.delta, "Target delta");
  account_cmd->add_option("--seed", account.seed, "Accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  absl::Status status;
  if (*simulate_cmd) {
    status = Simulate(simulate, err);
  } else if (*render_cmd) {
    status = RenderDump(render, err);
  } else if (*attack_cmd) {
    status = Attack(attack, out, err);
  } else if (*transfer_cmd) {
    status = Transfer(transfer, out);
  } else if (*sweep_cmd) {
    status = Sweep(sweep, out);
  } else if (*defend_cmd) {
    status = Defend(defend, out);
  } else {
    status = Account(account, out);
  }
  if (!status.ok()) {
    err << "odmia: error: " << status.message() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace odmia::cli
