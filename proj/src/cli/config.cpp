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

#include "frostmil/cli/config.h"

namespace frostmil::cli {

namespace {

std::vector<std::string> Strings(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ValidationError(where + ": expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Json PolicyJson(const triage::TriagePolicy& p) {
  return Json{{"theta_hi", p.theta_hi}, {"theta_lo", p.theta_lo}};
}

}  // namespace

std::filesystem::path PathsConfig::Resolve(const std::string& p) const {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : std::filesystem::path(workdir) / path;
}

Json ToJson(const synthwsi::CohortConfig& c) {
  Json mix = Json::array();
  for (const auto& e : c.class_mix) {
    mix.push_back(Json{{"name", e.name}, {"proportion", e.proportion}, {"malignant", e.malignant}});
  }
  Json splits = Json::array();
  for (const auto& [split, share] : c.split_policy) {
    splits.push_back(Json{{"split", synthwsi::ToString(split)}, {"share", share}});
  }
  return Json{{"cohort_id", c.cohort_id},
              {"n_cases", c.n_cases},
              {"class_mix", mix},
              {"split_policy", splits},
              {"centers", c.centers},
              {"sites", c.sites},
              {"histotechs", c.histotechs},
              {"min_slides_per_case", c.min_slides_per_case},
              {"max_slides_per_case", c.max_slides_per_case},
              {"width_px", c.width_px},
              {"height_px", c.height_px},
              {"mpp", c.mpp},
              {"tile_px", c.tile_px},
              {"difficult_rate", c.difficult_rate},
              {"needs_ihc_rate", c.needs_ihc_rate},
              {"difficult_contrast", c.difficult_contrast},
              {"lymph_node_task", c.lymph_node_task},
              {"micro_fraction", c.micro_fraction},
              {"center_tint", c.center_tint},
              {"pathologist_miss_rate", c.pathologist_miss_rate},
              {"pathologist_false_alarm_rate", c.pathologist_false_alarm_rate}};
}

synthwsi::CohortConfig CohortConfigFromJson(const Json& j) {
  const std::string w = "gen";
  synthwsi::CohortConfig c;
  c.cohort_id = GetField<std::string>(j, "cohort_id", w);
  c.n_cases = GetField<int>(j, "n_cases", w);
  c.class_mix.clear();
  for (const auto& e : j.at("class_mix")) {
    c.class_mix.push_back({GetField<std::string>(e, "name", "gen.class_mix"),
                           GetField<double>(e, "proportion", "gen.class_mix"),
                           GetField<bool>(e, "malignant", "gen.class_mix")});
  }
  c.split_policy.clear();
  for (const auto& e : j.at("split_policy")) {
    c.split_policy.emplace_back(synthwsi::ParseSplit(GetField<std::string>(e, "split", "gen.split_policy")),
                                GetField<double>(e, "share", "gen.split_policy"));
  }
  c.centers = Strings(j.at("centers"), "gen.centers");
  c.sites = Strings(j.at("sites"), "gen.sites");
  c.histotechs = Strings(j.at("histotechs"), "gen.histotechs");
  c.min_slides_per_case = GetField<int>(j, "min_slides_per_case", w);
  c.max_slides_per_case = GetField<int>(j, "max_slides_per_case", w);
  c.width_px = GetField<int64_t>(j, "width_px", w);
  c.height_px = GetField<int64_t>(j, "height_px", w);
  c.mpp = GetField<double>(j, "mpp", w);
  c.tile_px = GetField<int64_t>(j, "tile_px", w);
  c.difficult_rate = GetField<double>(j, "difficult_rate", w);
  c.needs_ihc_rate = GetField<double>(j, "needs_ihc_rate", w);
  c.difficult_contrast = GetField<double>(j, "difficult_contrast", w);
  c.lymph_node_task = GetField<bool>(j, "lymph_node_task", w);
  c.micro_fraction = GetField<double>(j, "micro_fraction", w);
  c.center_tint = GetField<double>(j, "center_tint", w);
  c.pathologist_miss_rate = GetField<double>(j, "pathologist_miss_rate", w);
  c.pathologist_false_alarm_rate = GetField<double>(j, "pathologist_false_alarm_rate", w);
  if (c.min_slides_per_case < 1 || c.max_slides_per_case < c.min_slides_per_case) {
    throw ValidationError("gen: need 1 <= min_slides_per_case <= max_slides_per_case");
  }
  return c;
}

Json ToJson(const RunConfig& c) {
  const auto& p = c.paths;
  return Json{
      {"schema_version", kConfigSchemaVersion},
      {"seed", c.seed},
      {"paths",
       {{"workdir", p.workdir},
        {"cohort", p.cohort},
        {"patches", p.patches},
        {"features", p.features},
        {"checkpoints", p.checkpoints},
        {"predictions", p.predictions},
        {"reports", p.reports},
        {"heatmaps", p.heatmaps}}},
      {"gen", ToJson(c.gen)},
      {"tile",
       {{"patch_px", c.tile.patch_px},
        {"target_mpp", c.tile.target_mpp},
        {"min_tissue", c.tile.min_tissue}}},
      {"pretrain",
       {{"vit", nn::ToJson(c.pretrain.vit)},
        {"lora", nn::ToJson(c.pretrain.lora)},
        {"dino", nn::ToJson(c.pretrain.dino)},
        {"steps", c.pretrain.steps},
        {"balance_cap", c.pretrain.balance_cap}}},
      {"train",
       {{"lr", c.train.optim.lr},
        {"weight_decay", c.train.optim.weight_decay},
        {"patience", c.train.optim.patience},
        {"max_epochs", c.train.optim.max_epochs},
        {"hidden", c.train.optim.hidden},
        {"level", mil::ToString(c.train.level)},
        {"infer_level", mil::ToString(c.train.infer_level)},
        {"predict_splits", c.train.predict_splits}}},
      {"eval",
       {{"bootstrap_iters", c.eval.bootstrap_iters},
        {"level", c.eval.level},
        {"subgroups", c.eval.subgroups}}},
      {"triage",
       {{"policy", PolicyJson(c.triage.policy)}, {"ihc_target_sens", c.triage.ihc_target_sens}}},
      {"heatmap", {{"level_index", c.heatmap.level_index}, {"alpha", c.heatmap.alpha}}}};
}

RunConfig RunConfigFromJson(const Json& doc) {
  // Strictness: every key must exist in the default document.
  const Json merged = MergeConfig(ToJson(RunConfig{}), doc);
  RunConfig c;
  if (GetField<int>(merged, "schema_version", "config") != kConfigSchemaVersion) {
    throw ValidationError("config.schema_version: unsupported version");
  }
  c.seed = GetField<uint64_t>(merged, "seed", "config");
  const Json& p = merged.at("paths");
  c.paths.workdir = GetField<std::string>(p, "workdir", "paths");
  c.paths.cohort = GetField<std::string>(p, "cohort", "paths");
  c.paths.patches = GetField<std::string>(p, "patches", "paths");
  c.paths.features = GetField<std::string>(p, "features", "paths");
  c.paths.checkpoints = GetField<std::string>(p, "checkpoints", "paths");
  c.paths.predictions = GetField<std::string>(p, "predictions", "paths");
  c.paths.reports = GetField<std::string>(p, "reports", "paths");
  c.paths.heatmaps = GetField<std::string>(p, "heatmaps", "paths");
  c.gen = CohortConfigFromJson(merged.at("gen"));

  const Json& t = merged.at("tile");
  c.tile.patch_px = GetField<int>(t, "patch_px", "tile");
  c.tile.target_mpp = GetField<double>(t, "target_mpp", "tile");
  c.tile.min_tissue = GetField<double>(t, "min_tissue", "tile");
  if (c.tile.patch_px < 1) throw ValidationError("tile.patch_px must be >= 1");

  const Json& pt = merged.at("pretrain");
  c.pretrain.vit = nn::ViTConfigFromJson(pt.at("vit"));
  c.pretrain.lora = nn::LoRAConfigFromJson(pt.at("lora"));
  c.pretrain.dino = nn::DinoConfigFromJson(pt.at("dino"));
  c.pretrain.steps = GetField<int>(pt, "steps", "pretrain");
  c.pretrain.balance_cap = GetField<int>(pt, "balance_cap", "pretrain");
  if (c.pretrain.steps < 0) throw ValidationError("pretrain.steps must be >= 0");
  if (c.pretrain.balance_cap < 0) throw ValidationError("pretrain.balance_cap must be >= 0");

  const Json& tr = merged.at("train");
  c.train.optim.lr = GetField<double>(tr, "lr", "train");
  c.train.optim.weight_decay = GetField<double>(tr, "weight_decay", "train");
  c.train.optim.patience = GetField<int>(tr, "patience", "train");
  c.train.optim.max_epochs = GetField<int>(tr, "max_epochs", "train");
  c.train.optim.hidden = GetField<int>(tr, "hidden", "train");
  c.train.level = mil::ParseBagLevel(GetField<std::string>(tr, "level", "train"));
  c.train.infer_level = mil::ParseBagLevel(GetField<std::string>(tr, "infer_level", "train"));
  c.train.predict_splits = Strings(tr.at("predict_splits"), "train.predict_splits");
  for (const auto& s : c.train.predict_splits) synthwsi::ParseSplit(s);
  if (c.train.optim.patience < 1) throw ValidationError("train.patience must be >= 1");
  if (c.train.optim.max_epochs < 0) throw ValidationError("train.max_epochs must be >= 0");
  if (!(c.train.optim.lr > 0)) throw ValidationError("train.lr must be > 0");

  const Json& ev = merged.at("eval");
  c.eval.bootstrap_iters = GetField<int>(ev, "bootstrap_iters", "eval");
  c.eval.level = GetField<double>(ev, "level", "eval");
  c.eval.subgroups = Strings(ev.at("subgroups"), "eval.subgroups");
  if (c.eval.bootstrap_iters < 1) throw ValidationError("eval.bootstrap_iters must be >= 1");

  const Json& tg = merged.at("triage");
  c.triage.policy.theta_hi = GetField<double>(tg.at("policy"), "theta_hi", "triage.policy");
  c.triage.policy.theta_lo = GetField<double>(tg.at("policy"), "theta_lo", "triage.policy");
  c.triage.policy.Validate();
  c.triage.ihc_target_sens = GetField<double>(tg, "ihc_target_sens", "triage");

  const Json& hm = merged.at("heatmap");
  c.heatmap.level_index = GetField<int>(hm, "level_index", "heatmap");
  c.heatmap.alpha = GetField<double>(hm, "alpha", "heatmap");
  if (!(c.heatmap.alpha >= 0 && c.heatmap.alpha <= 1)) {
    throw ValidationError("heatmap.alpha must be in [0, 1]");
  }
  return c;
}

Json MergeConfig(const Json& base, const Json& overlay, const std::string& path) {
  if (!overlay.is_object()) {
    throw ValidationError("config" + (path.empty() ? "" : "." + path) + ": expected an object");
  }
  Json out = base;
  for (const auto& [key, value] : overlay.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ValidationError("config: unknown key '" + here + "'");
    if (base.at(key).is_object()) {
      out[key] = MergeConfig(base.at(key), value, here);
    } else {
      out[key] = value;
    }
  }
  return out;
}

void SetDotted(Json& doc, const std::string& dotted, const std::string& value) {
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const Json::parse_error&) {
    parsed = value;
  }
  Json* node = &doc;
  size_t start = 0;
  while (true) {
    const size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ValidationError("--set: malformed key '" + dotted + "'");
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      return;
    }
    if (!node->contains(key)) (*node)[key] = Json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

Json LoadConfigDocument(const std::string& file, const std::vector<std::string>& sets) {
  Json doc = Json::object();
  if (!file.empty()) {
    RequireExists(file, "config file");
    doc = ReadJsonFile(file);
  }
  for (const auto& s : sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
    SetDotted(doc, s.substr(0, eq), s.substr(eq + 1));
  }
  return doc;
}

void WriteEffectiveConfig(const std::filesystem::path& output, const RunConfig& config,
                          bool output_is_dir) {
  const std::filesystem::path target =
      output_is_dir ? output / "effective_config.json"
                    : std::filesystem::path(output.string() + ".config.json");
  WriteJsonFile(target, ToJson(config));
}

}  // namespace frostmil::cli
