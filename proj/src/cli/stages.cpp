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

#include "frostmil/cli/stages.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "frostmil/cli/heatmap.h"
#include "frostmil/common/png_io.h"
#include "frostmil/mil/attention_grid.h"
#include "frostmil/mil/predictions_io.h"
#include "frostmil/nn/feature_file.h"
#include "frostmil/stats/metrics.h"
#include "frostmil/stats/report.h"

namespace frostmil::cli {

namespace {

constexpr uint64_t kPretrainStream = 0x5052;
constexpr uint64_t kBalanceStream = 0x42414c;
constexpr uint64_t kTrainStream = 0x5452;
constexpr uint64_t kEvalStream = 0x4556;
constexpr int kExtractBatch = 64;

fs::path CohortRoot(const fs::path& cohort_json) {
  return cohort_json.has_parent_path() ? cohort_json.parent_path() : fs::path(".");
}

synthwsi::CohortManifest LoadCohort(const fs::path& cohort_json) {
  RequireExists(cohort_json, "cohort manifest");
  return synthwsi::LoadManifest(cohort_json);
}

std::vector<preprocess::PatchRecord> LoadRecords(const fs::path& patches) {
  RequireExists(patches, "patch records");
  return preprocess::ReadPatchRecords(patches);
}

mil::TaskSpec TaskFor(const synthwsi::CohortManifest& cohort, mil::BagLevel level) {
  mil::TaskSpec task;
  task.task_id = cohort.cohort_id;
  task.class_names.clear();
  for (const auto& c : cohort.classes) task.class_names.push_back(c.name);
  task.level = level;
  task.positive_class = 1;
  return task;
}

nn::Tensor Stack(const std::vector<nn::Tensor>& items, size_t begin, size_t end) {
  const nn::Shape& s = items.at(begin).shape;
  const size_t per = nn::NumElements(s);
  nn::Tensor out({static_cast<int>(end - begin), s[0], s[1], s[2]});
  for (size_t i = begin; i < end; ++i) {
    std::copy(items[i].data.begin(), items[i].data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>((i - begin) * per));
  }
  return out;
}

std::map<std::string, std::string> CaseTags(const synthwsi::CaseRecord& c) {
  return {{"site", c.site},
          {"center_id", c.center_id},
          {"histotech_id", c.histotech_id},
          {"is_difficult", c.is_difficult ? "true" : "false"},
          {"needs_ihc", c.needs_ihc ? "true" : "false"},
          {"metastasis_size", synthwsi::ToString(c.metastasis_size)}};
}

const synthwsi::CaseRecord* CaseForBag(const synthwsi::CohortManifest& cohort,
                                       const std::string& bag_id) {
  if (auto it = cohort.cases.find(bag_id); it != cohort.cases.end()) return &it->second;
  if (const auto* slide = cohort.FindSlide(bag_id)) return &cohort.cases.at(slide->case_id);
  return nullptr;
}

}  // namespace

Json RunGen(const RunConfig& config, const fs::path& out_dir) {
  const synthwsi::CohortManifest cohort = synthwsi::GenerateCohort(config.seed, config.gen);
  fs::create_directories(out_dir);
  synthwsi::SaveManifest(cohort, out_dir / "cohort.json");
  synthwsi::RenderCohort(cohort, out_dir);
  WriteEffectiveConfig(out_dir, config, true);
  Json splits = Json::object();
  for (const auto& [slide, split] : cohort.slide_split) {
    const std::string name = synthwsi::ToString(split);
    splits[name] = splits.value(name, 0) + 1;
  }
  return Json{{"command", "gen"},           {"status", "ok"},
              {"cases", cohort.cases.size()}, {"slides", cohort.slides.size()},
              {"slides_per_split", splits},  {"out", (out_dir / "cohort.json").string()}};
}

Json RunTile(const RunConfig& config, const fs::path& cohort_json, const fs::path& out) {
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  const fs::path root = CohortRoot(cohort_json);
  std::vector<preprocess::PatchRecord> records;
  size_t lesion_patches = 0;
  for (const auto& manifest : cohort.slides) {
    const size_t coarsest = manifest.levels.size() - 1;
    const synthwsi::Slide slide =
        synthwsi::LoadSlideLevels(synthwsi::SlideDir(root, manifest.slide_id), {coarsest});
    const preprocess::TissueMask mask = preprocess::SegmentImage(
        slide.levels.at(coarsest), manifest.levels[coarsest]);
    for (auto& r : preprocess::TileSlide(manifest, mask, config.tile)) {
      lesion_patches += r.in_lesion;
      records.push_back(std::move(r));
    }
  }
  preprocess::WritePatchRecords(out, records);
  WriteEffectiveConfig(out, config, false);
  return Json{{"command", "tile"}, {"status", "ok"}, {"slides", cohort.slides.size()},
              {"patches", records.size()}, {"lesion_patches", lesion_patches},
              {"out", out.string()}};
}

std::vector<nn::Tensor> LoadPatchPixels(const fs::path& cohort_json,
                                        const synthwsi::CohortManifest& cohort,
                                        const std::vector<preprocess::PatchRecord>& records,
                                        int net_px) {
  const fs::path root = CohortRoot(cohort_json);
  std::map<std::string, std::vector<size_t>> by_slide;
  for (size_t i = 0; i < records.size(); ++i) by_slide[records[i].slide_id].push_back(i);
  std::vector<nn::Tensor> out(records.size());
  for (const auto& manifest : cohort.slides) {
    auto it = by_slide.find(manifest.slide_id);
    if (it == by_slide.end()) continue;
    const synthwsi::Slide slide =
        synthwsi::LoadSlideLevels(synthwsi::SlideDir(root, manifest.slide_id), {0});
    for (size_t i : it->second) {
      out[i] = preprocess::ExtractPatchPixels(slide.levels[0], manifest.mpp, records[i], net_px);
    }
    by_slide.erase(it);
  }
  if (!by_slide.empty()) {
    throw ValidationError("patch records reference slide " + by_slide.begin()->first +
                          " which is not in the cohort");
  }
  return out;
}

Json RunPretrain(const RunConfig& config, const fs::path& cohort_json, const fs::path& patches,
                 const fs::path& out_dir) {
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  const auto records = LoadRecords(patches);
  // Pretraining draws on the pretrain split when present, else on train.
  std::vector<std::string> pool = cohort.SlidesIn(synthwsi::Split::kPretrain);
  std::string pool_split = "pretrain";
  if (pool.empty()) {
    pool = cohort.SlidesIn(synthwsi::Split::kTrain);
    pool_split = "train";
  }
  const std::set<std::string> pool_set(pool.begin(), pool.end());
  preprocess::CenterRecords by_center;
  for (const auto& r : records) {
    if (pool_set.count(r.slide_id)) by_center[cohort.slide(r.slide_id).center_id].push_back(r);
  }
  const size_t cap = config.pretrain.balance_cap > 0
                         ? static_cast<size_t>(config.pretrain.balance_cap)
                         : preprocess::MedianCenterCount(by_center);
  const auto balanced =
      preprocess::BalanceCenters(by_center, cap, Rng::DeriveSeed(config.seed, {kBalanceStream}));
  std::vector<preprocess::PatchRecord> selected;
  for (const auto& [center, list] : balanced) selected.insert(selected.end(), list.begin(), list.end());
  if (selected.empty() && config.pretrain.steps > 0) {
    throw ValidationError("pretrain: no patches in the " + pool_split + " split");
  }
  const auto pixels = LoadPatchPixels(cohort_json, cohort, selected, config.pretrain.vit.net_px);

  nn::DinoState state = nn::InitDino(config.pretrain.vit, config.pretrain.lora, config.pretrain.dino,
                                     Rng::DeriveSeed(config.seed, {kPretrainStream}));
  double last_loss = 0.0;
  nn::Pretrain(state, pixels, config.pretrain.steps,
               [&](const nn::DinoState&, const nn::StepInfo& info) { last_loss = info.loss; });
  nn::SaveDinoCheckpoint(out_dir, state);
  WriteEffectiveConfig(out_dir, config, true);
  const nn::ModelSummary summary = nn::Summarize(state.StudentEncoder());
  return Json{{"command", "pretrain"},
              {"status", "ok"},
              {"pool_split", pool_split},
              {"patches", selected.size()},
              {"balance_cap", cap},
              {"steps", state.step},
              {"final_loss", last_loss},
              {"encoder_params", summary.total},
              {"trainable_params", summary.trainable},
              {"trainable_fraction", summary.trainable_fraction()},
              {"out", out_dir.string()}};
}

Json RunExtract(const RunConfig& config, const fs::path& cohort_json, const fs::path& patches,
                const fs::path& encoder_dir, const fs::path& out) {
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  const auto records = LoadRecords(patches);
  RequireExists(encoder_dir / "model.json", "encoder checkpoint");
  const nn::Encoder encoder = nn::LoadEncoder(encoder_dir);
  const auto pixels = LoadPatchPixels(cohort_json, cohort, records, encoder.vit.net_px);
  const int dim = encoder.vit.feature_dim();
  nn::Tensor features({static_cast<int>(records.size()), dim});
  for (size_t begin = 0; begin < pixels.size(); begin += kExtractBatch) {
    const size_t end = std::min(pixels.size(), begin + kExtractBatch);
    const nn::Tensor rows = nn::ExtractFeatures(encoder, Stack(pixels, begin, end));
    std::copy(rows.data.begin(), rows.data.end(),
              features.data.begin() + static_cast<std::ptrdiff_t>(begin * dim));
  }
  nn::WriteFeatureFile(out, features);
  WriteEffectiveConfig(out, config, false);
  return Json{{"command", "extract"}, {"status", "ok"}, {"rows", records.size()},
              {"dim", dim}, {"out", out.string()}};
}

Json RunTrain(const RunConfig& config, const fs::path& cohort_json, const fs::path& patches,
              const fs::path& features_path, const fs::path& model_dir,
              const fs::path& predictions_dir) {
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  const auto records = LoadRecords(patches);
  const nn::Tensor features = nn::ReadFeatureFile(features_path);
  const mil::TaskSpec task = TaskFor(cohort, config.train.level);
  const auto train = mil::BuildBags(task, cohort, records, features,
                                    mil::BagIds(task, cohort, synthwsi::Split::kTrain));
  const auto val = mil::BuildBags(task, cohort, records, features,
                                  mil::BagIds(task, cohort, synthwsi::Split::kVal));
  mil::TrainConfig optim = config.train.optim;
  optim.seed = Rng::DeriveSeed(config.seed, {kTrainStream});
  const mil::TrainResult result = mil::TrainAbmil(train, val, task.classes(), optim);

  Json log = Json::array();
  for (const auto& e : result.log) {
    log.push_back(Json{{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss}});
  }
  mil::SaveAbmil(model_dir, result.config, result.params,
                 Json{{"best_epoch", result.best_epoch}, {"train_level", mil::ToString(task.level)}});
  WriteJsonFile(model_dir / "training_log.json",
                Json{{"best_epoch", result.best_epoch}, {"epochs", log}});
  WriteEffectiveConfig(model_dir, config, true);

  // Inference at the configured level on the prediction splits.
  const mil::TaskSpec infer = TaskFor(cohort, config.train.infer_level);
  std::vector<std::string> ids;
  for (const auto& s : config.train.predict_splits) {
    const auto part = mil::BagIds(infer, cohort, synthwsi::ParseSplit(s));
    ids.insert(ids.end(), part.begin(), part.end());
  }
  const auto bags = mil::BuildBags(infer, cohort, records, features, ids);
  const auto preds = mil::Predict(result.params, bags);
  std::vector<mil::PredictionRow> rows;
  std::vector<mil::AttentionGrid> grids;
  for (size_t i = 0; i < preds.size(); ++i) {
    rows.push_back({preds[i].bag_id, preds[i].label,
                    std::vector<double>(preds[i].probs.begin(), preds[i].probs.end())});
    for (auto& g : mil::AttentionToGrid(bags[i], preds[i].attention, cohort)) grids.push_back(std::move(g));
  }
  fs::create_directories(predictions_dir);
  mil::WritePredictions(predictions_dir / "predictions.csv", rows);
  mil::WriteAttentionGrids(predictions_dir / "attention.jsonl", grids);
  WriteEffectiveConfig(predictions_dir, config, true);
  return Json{{"command", "train"},
              {"status", "ok"},
              {"train_bags", train.size()},
              {"val_bags", val.size()},
              {"epochs", result.log.size()},
              {"best_epoch", result.best_epoch},
              {"best_val_loss", result.best_val_loss},
              {"predicted_bags", preds.size()},
              {"out", model_dir.string()}};
}

Json RunEval(const RunConfig& config, const fs::path& predictions, const fs::path& cohort_json,
             const fs::path& out_dir, const fs::path& compare_table) {
  RequireExists(predictions, "predictions");
  const auto rows = mil::ReadPredictions(predictions);
  if (rows.empty()) throw ValidationError("eval: predictions file has no rows");
  std::optional<synthwsi::CohortManifest> cohort;
  if (!cohort_json.empty()) cohort = LoadCohort(cohort_json);

  std::vector<stats::ScoredItem> items;
  for (const auto& r : rows) {
    stats::ScoredItem item{r.bag_id, r.label, r.probs, {}};
    if (cohort) {
      const auto* c = CaseForBag(*cohort, r.bag_id);
      if (!c) throw ValidationError("eval: bag " + r.bag_id + " is not in the cohort");
      item.tags = CaseTags(*c);
    }
    items.push_back(std::move(item));
  }
  stats::EvalOptions options;
  options.classes = static_cast<int>(rows.front().probs.size());
  options.positive_class = 1;
  options.bootstrap_iters = config.eval.bootstrap_iters;
  options.level = config.eval.level;
  options.seed = Rng::DeriveSeed(config.seed, {kEvalStream});

  stats::EvalReport report = stats::Evaluate(items, options);
  report.task = cohort ? cohort->cohort_id : predictions.stem().string();
  report.model = "abmil";
  if (!compare_table.empty()) {
    RequireExists(compare_table, "comparison table");
    const Json table = ReadJsonFile(compare_table);
    std::vector<std::string> models;
    std::vector<std::vector<double>> values;
    for (const auto& [model, row] : table.at("models").items()) {
      models.push_back(model);
      values.push_back(row.get<std::vector<double>>());
    }
    report.comparisons = stats::PairedWilcoxonHolm(models, values);
  }
  Json subgroups = Json::object();
  std::vector<stats::SubgroupResult> md_groups;
  if (cohort) {
    for (const auto& key : config.eval.subgroups) {
      auto groups = stats::SubgroupReport(items, key, options);
      subgroups[key] = stats::ToJson(groups);
      for (auto& g : groups) {
        g.group = key + "=" + g.group;
        md_groups.push_back(std::move(g));
      }
    }
  }
  fs::create_directories(out_dir);
  Json doc = stats::ToJson(report);
  doc["subgroups"] = subgroups;
  doc["bootstrap_iters"] = options.bootstrap_iters;
  doc["ci_level"] = options.level;
  WriteJsonFile(out_dir / "report.json", doc);
  WriteTextFile(out_dir / "report.md", stats::RenderMarkdown(report, md_groups));
  WriteEffectiveConfig(out_dir, config, true);
  Json summary{{"command", "eval"}, {"status", "ok"}, {"items", items.size()}};
  for (const auto& [name, v] : report.metrics) summary[name] = v.point;
  summary["out"] = (out_dir / "report.json").string();
  return summary;
}

Json RunTriage(const RunConfig& config, const fs::path& predictions, const fs::path& cohort_json,
               const fs::path& out) {
  RequireExists(predictions, "predictions");
  const auto rows = mil::ReadPredictions(predictions);
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  std::vector<triage::ScoredCase> cases;
  std::vector<triage::ScoredCase> ihc_cases;
  for (const auto& r : rows) {
    if (r.probs.size() != 2) {
      throw ValidationError("triage: bag " + r.bag_id + " is not a binary prediction");
    }
    auto it = cohort.cases.find(r.bag_id);
    if (it == cohort.cases.end()) {
      throw ValidationError("triage: bag " + r.bag_id + " is not a case of the cohort");
    }
    triage::ScoredCase c{r.bag_id, r.probs[1], r.label == 1, it->second.pathologist_positive};
    if (it->second.needs_ihc) ihc_cases.push_back(c);
    cases.push_back(std::move(c));
  }
  const triage::TriagePolicy& policy = config.triage.policy;
  const triage::TriageOutcome outcome = triage::ApplyPolicy(policy, cases);
  const triage::WorkflowComparison workflow = triage::CombinedWorkflowEval(policy, cases);
  Json ihc;
  try {
    ihc = triage::ToJson(triage::IhcScreen(ihc_cases, config.triage.ihc_target_sens));
  } catch (const stats::UndefinedMetricError& e) {
    ihc = Json{{"skipped", true}, {"reason", e.what()}, {"n_cases", ihc_cases.size()}};
  }
  const Json doc{{"policy", triage::ToJson(policy)},
                 {"outcome", triage::ToJson(outcome)},
                 {"combined_workflow", triage::ToJson(workflow)},
                 {"ihc_screen", ihc},
                 {"extension_zero_error_policy", triage::ToJson(triage::SearchZeroErrorPolicy(cases))}};
  WriteJsonFile(out, doc);
  const fs::path waterfall = (out.has_parent_path() ? out.parent_path() : fs::path(".")) / "waterfall.csv";
  triage::WriteWaterfall(waterfall, policy, cases);
  WriteEffectiveConfig(out, config, false);
  return Json{{"command", "triage"},
              {"status", "ok"},
              {"cases", cases.size()},
              {"auto", outcome.auto_set.size()},
              {"workload_reduction", outcome.workload_reduction},
              {"out", out.string()}};
}

Json RunHeatmap(const RunConfig& config, const fs::path& cohort_json, const fs::path& attention,
                const fs::path& out_dir, const std::vector<std::string>& slide_ids) {
  const synthwsi::CohortManifest cohort = LoadCohort(cohort_json);
  RequireExists(attention, "attention grids");
  const auto grids = mil::ReadAttentionGrids(attention);
  const fs::path root = CohortRoot(cohort_json);
  fs::create_directories(out_dir);
  Json written = Json::array();
  for (const auto& g : grids) {
    if (!slide_ids.empty() &&
        std::find(slide_ids.begin(), slide_ids.end(), g.slide_id) == slide_ids.end()) {
      continue;
    }
    const auto& manifest = cohort.slide(g.slide_id);
    const int index = config.heatmap.level_index;
    if (index < 0 || index >= static_cast<int>(manifest.levels.size())) {
      throw ValidationError("heatmap.level_index " + std::to_string(index) + " not in slide " +
                            g.slide_id);
    }
    const synthwsi::Slide slide = synthwsi::LoadSlideLevels(
        synthwsi::SlideDir(root, g.slide_id), {static_cast<size_t>(index)});
    const RgbImage overlay = RenderHeatmap(slide.levels.at(static_cast<size_t>(index)),
                                           manifest.levels[static_cast<size_t>(index)], g,
                                           config.heatmap.alpha);
    const fs::path png = out_dir / (g.slide_id + ".png");
    WritePng(png, overlay);
    written.push_back(png.filename().string());
  }
  if (!slide_ids.empty() && written.size() != slide_ids.size()) {
    throw ValidationError("heatmap: some requested slides have no attention grid");
  }
  WriteEffectiveConfig(out_dir, config, true);
  return Json{{"command", "heatmap"}, {"status", "ok"}, {"images", written.size()},
              {"out", out_dir.string()}};
}

}  // namespace frostmil::cli
