// Copyright 2026 The frostmil Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frostmil/cli/app.h"

#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frostmil/cli/stages.h"

namespace frostmil::cli {

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<uint64_t> seed;
  std::optional<std::string> workdir;
};

struct Options {
  CommonOptions common;
  std::string cohort, patches, features, encoder, out, pred_out, pred, attention, compare;
  std::vector<std::string> slides;
  std::optional<int> cases, patch, steps, batch, patience, max_epochs, iters, level;
  std::optional<double> mpp, min_tissue, lr, wd, theta_hi, theta_lo, alpha;
};

void AddCommon(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--config", c.config_file, "Run config JSON");
  cmd->add_option("--set", c.sets, "Override a config field, key.path=value")->take_all();
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--workdir", c.workdir, "Base directory for relative paths");
}

template <typename T>
void Override(Json& doc, const std::string& key, const std::optional<T>& value) {
  if (!value) return;
  Json* node = &doc;
  size_t start = 0;
  for (size_t dot; (dot = key.find('.', start)) != std::string::npos; start = dot + 1) {
    node = &(*node)[key.substr(start, dot - start)];
  }
  (*node)[key.substr(start)] = *value;
}

std::string ErrorJson(const std::string& command, const char* kind, const std::string& message,
                      int code) {
  return Json{{"command", command}, {"status", "error"}, {"error", kind},
              {"message", message}, {"exit_code", code}}
      .dump();
}

fs::path Or(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

}  // namespace

int RunApp(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic frozen-section MIL pipeline"};
  app.set_version_flag("--version", std::string("frostmil ") + kVersion + " (config schema " +
                                        std::to_string(kConfigSchemaVersion) + ")");
  app.require_subcommand(1);
  Options o;

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic cohort");
  gen->add_option("--cases", o.cases, "Number of cases");
  gen->add_option("--out", o.out, "Output directory");

  CLI::App* tile = app.add_subcommand("tile", "Segment tissue and tile slides");
  tile->add_option("--cohort", o.cohort, "cohort.json");
  tile->add_option("--out", o.out, "Output patch JSONL");
  tile->add_option("--patch", o.patch, "Patch side in pixels");
  tile->add_option("--mpp", o.mpp, "Extraction microns per pixel");
  tile->add_option("--min-tissue", o.min_tissue, "Minimum tissue fraction");

  CLI::App* pretrain = app.add_subcommand("pretrain", "DINO pretraining of LoRA adapters");
  pretrain->add_option("--cohort", o.cohort, "cohort.json");
  pretrain->add_option("--patches", o.patches, "Patch JSONL");
  pretrain->add_option("--out", o.out, "Checkpoint directory");
  pretrain->add_option("--steps", o.steps, "Optimization steps");
  pretrain->add_option("--batch", o.batch, "Images per step");

  CLI::App* extract = app.add_subcommand("extract", "Extract patch features");
  extract->add_option("--cohort", o.cohort, "cohort.json");
  extract->add_option("--patches", o.patches, "Patch JSONL");
  extract->add_option("--encoder", o.encoder, "Pretraining checkpoint directory");
  extract->add_option("--out", o.out, "Output feature file");

  CLI::App* train = app.add_subcommand("train", "Train the ABMIL aggregator and predict");
  train->add_option("--cohort", o.cohort, "cohort.json");
  train->add_option("--patches", o.patches, "Patch JSONL");
  train->add_option("--features", o.features, "Feature file");
  train->add_option("--out", o.out, "Model checkpoint directory");
  train->add_option("--pred-out", o.pred_out, "Predictions directory");
  train->add_option("--lr", o.lr, "Learning rate");
  train->add_option("--wd", o.wd, "Weight decay");
  train->add_option("--patience", o.patience, "Early-stopping patience");
  train->add_option("--max-epochs", o.max_epochs, "Epoch limit");

  CLI::App* eval = app.add_subcommand("eval", "Metrics with bootstrap CIs");
  eval->add_option("--pred", o.pred, "Predictions CSV");
  eval->add_option("--cohort", o.cohort, "cohort.json for subgroup tags");
  eval->add_option("--out", o.out, "Report directory");
  eval->add_option("--compare", o.compare, "Models x tasks metric table JSON");
  eval->add_option("--iters", o.iters, "Bootstrap iterations");

  CLI::App* tri = app.add_subcommand("triage", "Score-threshold triage simulation");
  tri->add_option("--pred", o.pred, "Case-level predictions CSV");
  tri->add_option("--cohort", o.cohort, "cohort.json");
  tri->add_option("--theta-hi", o.theta_hi, "Upper auto threshold");
  tri->add_option("--theta-lo", o.theta_lo, "Lower auto threshold");
  tri->add_option("--out", o.out, "Output triage.json");

  CLI::App* heat = app.add_subcommand("heatmap", "Render attention heatmaps");
  heat->add_option("--cohort", o.cohort, "cohort.json");
  heat->add_option("--attention", o.attention, "Attention grid JSONL");
  heat->add_option("--out", o.out, "Output directory");
  heat->add_option("--slide", o.slides, "Slide id (repeatable); default all");
  heat->add_option("--level", o.level, "Pyramid level index");
  heat->add_option("--alpha", o.alpha, "Overlay opacity");

  for (CLI::App* cmd : {gen, tile, pretrain, extract, train, eval, tri, heat}) {
    AddCommon(cmd, o.common);
  }

  std::string command = "frostmil";
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    const auto subs = app.get_subcommands();
    if (!subs.empty()) command = subs.front()->get_name();
    out << ErrorJson(command, "validation", e.what(), 3) << "\n";
    err << "error: " << e.what() << "\n";
    return 3;
  }
  command = app.get_subcommands().front()->get_name();

  try {
    Json doc = LoadConfigDocument(o.common.config_file, o.common.sets);
    Override(doc, "seed", o.common.seed);
    Override(doc, "paths.workdir", o.common.workdir);
    Override(doc, "gen.n_cases", o.cases);
    Override(doc, "tile.patch_px", o.patch);
    Override(doc, "tile.target_mpp", o.mpp);
    Override(doc, "tile.min_tissue", o.min_tissue);
    Override(doc, "pretrain.steps", o.steps);
    Override(doc, "pretrain.dino.batch", o.batch);
    Override(doc, "train.lr", o.lr);
    Override(doc, "train.weight_decay", o.wd);
    Override(doc, "train.patience", o.patience);
    Override(doc, "train.max_epochs", o.max_epochs);
    Override(doc, "eval.bootstrap_iters", o.iters);
    Override(doc, "triage.policy.theta_hi", o.theta_hi);
    Override(doc, "triage.policy.theta_lo", o.theta_lo);
    Override(doc, "heatmap.level_index", o.level);
    Override(doc, "heatmap.alpha", o.alpha);
    const RunConfig config = RunConfigFromJson(doc);
    const PathsConfig& p = config.paths;

    const fs::path cohort_dir = p.Resolve(p.cohort);
    const fs::path cohort_json = Or(o.cohort, cohort_dir / "cohort.json");
    const fs::path patches = Or(o.patches, p.Resolve(p.patches));
    const fs::path features = Or(o.features, p.Resolve(p.features));
    const fs::path encoder = Or(o.encoder, p.Resolve(p.checkpoints) / "encoder");
    const fs::path predictions_dir = Or(o.pred_out, p.Resolve(p.predictions));
    const fs::path predictions = Or(o.pred, predictions_dir / "predictions.csv");

    Json summary;
    if (command == "gen") {
      summary = RunGen(config, Or(o.out, cohort_dir));
    } else if (command == "tile") {
      summary = RunTile(config, cohort_json, Or(o.out, patches));
    } else if (command == "pretrain") {
      summary = RunPretrain(config, cohort_json, patches, Or(o.out, encoder));
    } else if (command == "extract") {
      summary = RunExtract(config, cohort_json, patches, encoder, Or(o.out, features));
    } else if (command == "train") {
      summary = RunTrain(config, cohort_json, patches, features,
                         Or(o.out, p.Resolve(p.checkpoints) / "abmil"), predictions_dir);
    } else if (command == "eval") {
      fs::path tags = o.cohort;
      if (tags.empty() && fs::exists(cohort_json)) tags = cohort_json;
      summary = RunEval(config, predictions, tags, Or(o.out, p.Resolve(p.reports)),
                        o.compare);
    } else if (command == "triage") {
      summary = RunTriage(config, predictions, cohort_json,
                          Or(o.out, p.Resolve(p.reports) / "triage.json"));
    } else if (command == "heatmap") {
      summary = RunHeatmap(config, cohort_json,
                           Or(o.attention, predictions_dir / "attention.jsonl"),
                           Or(o.out, p.Resolve(p.heatmaps)), o.slides);
    }
    out << summary.dump() << "\n";
    return 0;
  } catch (const Error& e) {
    const int code = static_cast<int>(e.kind());
    out << ErrorJson(command, e.kind_name(), e.what(), code) << "\n";
    err << "error: " << e.what() << "\n";
    return code;
  } catch (const Json::exception& e) {
    out << ErrorJson(command, "validation", e.what(), 3) << "\n";
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    out << ErrorJson(command, "generic", e.what(), 1) << "\n";
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace frostmil::cli
