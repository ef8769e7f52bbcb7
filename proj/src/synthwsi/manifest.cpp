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

#include "frostmil/synthwsi/manifest.h"

#include <algorithm>
#include <set>

#include "frostmil/common/error.h"

namespace frostmil::synthwsi {

int64_t Box::IntersectionArea(const Box& other) const {
  const int64_t x0 = std::max(x, other.x);
  const int64_t y0 = std::max(y, other.y);
  const int64_t x1 = std::min(x + w, other.x + other.w);
  const int64_t y1 = std::min(y + h, other.y + other.h);
  if (x1 <= x0 || y1 <= y0) return 0;
  return (x1 - x0) * (y1 - y0);
}

std::pair<int64_t, int64_t> SlideManifest::LevelSize(size_t level) const {
  if (level >= levels.size()) {
    throw ValidationError(slide_id + ": level " + std::to_string(level) +
                          " not in pyramid");
  }
  return {width_px / levels[level], height_px / levels[level]};
}

std::string ToString(Split split) {
  switch (split) {
    case Split::kPretrain: return "pretrain";
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
    case Split::kProspective: return "prospective";
  }
  return "unknown";
}

Split ParseSplit(const std::string& text) {
  for (Split s : {Split::kPretrain, Split::kTrain, Split::kVal, Split::kTest,
                  Split::kProspective}) {
    if (ToString(s) == text) return s;
  }
  throw ValidationError("unknown split '" + text + "'");
}

std::string ToString(MetastasisSize size) {
  switch (size) {
    case MetastasisSize::kNone: return "none";
    case MetastasisSize::kMicro: return "micro";
    case MetastasisSize::kMacro: return "macro";
  }
  return "unknown";
}

MetastasisSize ParseMetastasisSize(const std::string& text) {
  if (text == "none") return MetastasisSize::kNone;
  if (text == "micro") return MetastasisSize::kMicro;
  if (text == "macro") return MetastasisSize::kMacro;
  throw ValidationError("unknown metastasis_size_class '" + text + "'");
}

const SlideManifest* CohortManifest::FindSlide(const std::string& id) const {
  for (const auto& s : slides) {
    if (s.slide_id == id) return &s;
  }
  return nullptr;
}

const SlideManifest& CohortManifest::slide(const std::string& id) const {
  const SlideManifest* s = FindSlide(id);
  if (!s) throw ValidationError("unknown slide_id '" + id + "'");
  return *s;
}

Split CohortManifest::case_split(const std::string& case_id) const {
  auto it = cases.find(case_id);
  if (it == cases.end() || it->second.slide_ids.empty()) {
    throw ValidationError("unknown case_id '" + case_id + "'");
  }
  return slide_split.at(it->second.slide_ids.front());
}

std::vector<std::string> CohortManifest::CasesIn(Split split) const {
  std::vector<std::string> out;
  for (const auto& [id, c] : cases) {
    if (!c.slide_ids.empty() && slide_split.at(c.slide_ids.front()) == split) {
      out.push_back(id);
    }
  }
  return out;
}

std::vector<std::string> CohortManifest::SlidesIn(Split split) const {
  std::vector<std::string> out;
  for (const auto& s : slides) {
    auto it = slide_split.find(s.slide_id);
    if (it != slide_split.end() && it->second == split) {
      out.push_back(s.slide_id);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

Json ToJson(const Box& box) {
  return Json{{"x", box.x}, {"y", box.y}, {"w", box.w}, {"h", box.h}};
}

namespace {

Box BoxFromJson(const Json& j, const std::string& where) {
  Box b;
  b.x = GetField<int64_t>(j, "x", where);
  b.y = GetField<int64_t>(j, "y", where);
  b.w = GetField<int64_t>(j, "w", where);
  b.h = GetField<int64_t>(j, "h", where);
  return b;
}

Json BoxesToJson(const std::vector<Box>& boxes) {
  Json arr = Json::array();
  for (const auto& b : boxes) arr.push_back(ToJson(b));
  return arr;
}

std::vector<Box> BoxesFromJson(const Json& j, const std::string& key,
                               const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  std::vector<Box> out;
  const Json& arr = j.at(key);
  for (size_t i = 0; i < arr.size(); ++i) {
    out.push_back(
        BoxFromJson(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

Json ToJson(const SlideManifest& s) {
  Json render{{"seed", s.render.seed},
              {"lesion_contrast", s.render.lesion_contrast},
              {"channel_gain", s.render.channel_gain}};
  return Json{{"slide_id", s.slide_id},
              {"width_px", s.width_px},
              {"height_px", s.height_px},
              {"mpp", s.mpp},
              {"levels", s.levels},
              {"lesion_boxes", BoxesToJson(s.lesion_boxes)},
              {"tissue_boxes", BoxesToJson(s.tissue_boxes)},
              {"class_label", s.class_label},
              {"malignant", s.malignant},
              {"center_id", s.center_id},
              {"site", s.site},
              {"histotech_id", s.histotech_id},
              {"case_id", s.case_id},
              {"render", render}};
}

SlideManifest SlideFromJson(const Json& j, const std::string& where) {
  SlideManifest s;
  s.slide_id = GetField<std::string>(j, "slide_id", where);
  const std::string at = where + "(" + s.slide_id + ")";
  s.width_px = GetField<int64_t>(j, "width_px", at);
  s.height_px = GetField<int64_t>(j, "height_px", at);
  s.mpp = GetField<double>(j, "mpp", at);
  if (!j.contains("levels") || !j.at("levels").is_array()) {
    throw ValidationError(at + ": missing field 'levels'");
  }
  s.levels = j.at("levels").get<std::vector<int>>();
  s.lesion_boxes = BoxesFromJson(j, "lesion_boxes", at);
  s.tissue_boxes = BoxesFromJson(j, "tissue_boxes", at);
  s.class_label = GetField<int>(j, "class_label", at);
  s.malignant = GetField<bool>(j, "malignant", at);
  s.center_id = GetField<std::string>(j, "center_id", at);
  s.site = GetField<std::string>(j, "site", at);
  s.histotech_id = GetField<std::string>(j, "histotech_id", at);
  s.case_id = GetField<std::string>(j, "case_id", at);
  if (j.contains("render")) {
    const Json& r = j.at("render");
    s.render.seed = GetField<uint64_t>(r, "seed", at + ".render");
    s.render.lesion_contrast =
        GetField<double>(r, "lesion_contrast", at + ".render");
    s.render.channel_gain =
        r.at("channel_gain").get<std::array<double, 3>>();
  }
  Validate(s, at);
  return s;
}

void Validate(const SlideManifest& s, const std::string& where) {
  if (s.width_px <= 0 || s.height_px <= 0) {
    throw ValidationError(where + ".width_px/height_px: must be positive");
  }
  if (!(s.mpp > 0.0)) throw ValidationError(where + ".mpp: must be > 0");
  if (s.levels.empty() || s.levels.front() != 1) {
    throw ValidationError(where + ".levels: must start at 1");
  }
  for (size_t i = 0; i < s.levels.size(); ++i) {
    const int d = s.levels[i];
    if (d <= 0 || (d & (d - 1)) != 0) {
      throw ValidationError(where + ".levels[" + std::to_string(i) +
                            "]: downsample must be a power of 2");
    }
    if (i > 0 && d <= s.levels[i - 1]) {
      throw ValidationError(where + ".levels: must be strictly increasing");
    }
  }
  const Box bounds{0, 0, s.width_px, s.height_px};
  for (size_t i = 0; i < s.tissue_boxes.size(); ++i) {
    if (s.tissue_boxes[i].w <= 0 || s.tissue_boxes[i].h <= 0 ||
        !bounds.Contains(s.tissue_boxes[i])) {
      throw ValidationError(where + ".tissue_boxes[" + std::to_string(i) +
                            "]: empty or outside slide bounds");
    }
  }
  for (size_t i = 0; i < s.lesion_boxes.size(); ++i) {
    const Box& lesion = s.lesion_boxes[i];
    const bool inside = std::any_of(
        s.tissue_boxes.begin(), s.tissue_boxes.end(),
        [&](const Box& t) { return t.Contains(lesion); });
    if (lesion.w <= 0 || lesion.h <= 0 || !inside) {
      throw ValidationError(where + ".lesion_boxes[" + std::to_string(i) +
                            "]: not contained in any tissue_box");
    }
  }
  if (s.malignant && s.lesion_boxes.empty()) {
    throw ValidationError(where +
                          ".class_label: malignant class requires a lesion_box");
  }
  if (!s.malignant && !s.lesion_boxes.empty()) {
    throw ValidationError(where +
                          ".class_label: benign class must have no lesion_box");
  }
}

Json ToJson(const CohortManifest& c) {
  Json classes = Json::array();
  for (const auto& k : c.classes) {
    classes.push_back(Json{{"name", k.name}, {"malignant", k.malignant}});
  }
  Json slides = Json::array();
  for (const auto& s : c.slides) slides.push_back(ToJson(s));

  Json splits = Json::object();
  for (const auto& s : c.slides) {
    auto it = c.slide_split.find(s.slide_id);
    if (it != c.slide_split.end()) {
      splits[ToString(it->second)].push_back(s.slide_id);
    }
  }
  Json cases = Json::object();
  for (const auto& [id, k] : c.cases) {
    cases[id] = Json{{"slide_ids", k.slide_ids},
                     {"label", k.label},
                     {"is_difficult", k.is_difficult},
                     {"needs_ihc", k.needs_ihc},
                     {"metastasis_size_class", ToString(k.metastasis_size)},
                     {"pathologist_positive", k.pathologist_positive},
                     {"center_id", k.center_id},
                     {"site", k.site},
                     {"histotech_id", k.histotech_id}};
  }
  return Json{{"cohort_id", c.cohort_id},
              {"seed", c.seed},
              {"classes", classes},
              {"lymph_node_task", c.lymph_node_task},
              {"slides", slides},
              {"splits", splits},
              {"cases", cases}};
}

CohortManifest CohortFromJson(const Json& j) {
  CohortManifest c;
  c.cohort_id = GetField<std::string>(j, "cohort_id", "cohort");
  c.seed = GetField<uint64_t>(j, "seed", "cohort");
  c.lymph_node_task = GetField<bool>(j, "lymph_node_task", "cohort");
  if (!j.contains("classes") || !j.at("classes").is_array()) {
    throw ValidationError("cohort: missing field 'classes'");
  }
  for (const auto& k : j.at("classes")) {
    c.classes.push_back({GetField<std::string>(k, "name", "cohort.classes"),
                         GetField<bool>(k, "malignant", "cohort.classes")});
  }
  if (!j.contains("slides") || !j.at("slides").is_array()) {
    throw ValidationError("cohort: missing field 'slides'");
  }
  const Json& slides = j.at("slides");
  for (size_t i = 0; i < slides.size(); ++i) {
    c.slides.push_back(
        SlideFromJson(slides[i], "cohort.slides[" + std::to_string(i) + "]"));
  }
  if (!j.contains("splits") || !j.at("splits").is_object()) {
    throw ValidationError("cohort: missing field 'splits'");
  }
  for (const auto& [name, ids] : j.at("splits").items()) {
    const Split split = ParseSplit(name);
    for (const auto& id_json : ids) {
      const std::string id = id_json.get<std::string>();
      if (!c.slide_split.emplace(id, split).second) {
        throw ValidationError("cohort.splits: slide '" + id +
                              "' assigned to more than one split");
      }
    }
  }
  if (!j.contains("cases") || !j.at("cases").is_object()) {
    throw ValidationError("cohort: missing field 'cases'");
  }
  for (const auto& [id, k] : j.at("cases").items()) {
    const std::string at = "cohort.cases." + id;
    CaseRecord r;
    r.case_id = id;
    r.slide_ids = k.at("slide_ids").get<std::vector<std::string>>();
    r.label = GetField<int>(k, "label", at);
    r.is_difficult = GetField<bool>(k, "is_difficult", at);
    r.needs_ihc = GetField<bool>(k, "needs_ihc", at);
    r.metastasis_size = ParseMetastasisSize(
        GetField<std::string>(k, "metastasis_size_class", at));
    r.pathologist_positive = GetField<bool>(k, "pathologist_positive", at);
    r.center_id = GetField<std::string>(k, "center_id", at);
    r.site = GetField<std::string>(k, "site", at);
    r.histotech_id = GetField<std::string>(k, "histotech_id", at);
    c.cases.emplace(id, std::move(r));
  }
  Validate(c);
  return c;
}

void Validate(const CohortManifest& c) {
  if (c.classes.size() < 2) {
    throw ValidationError("cohort.classes: need at least 2 classes");
  }
  std::set<std::string> names;
  for (const auto& k : c.classes) {
    if (!names.insert(k.name).second) {
      throw ValidationError("cohort.classes: duplicate class '" + k.name + "'");
    }
  }
  const int n_classes = static_cast<int>(c.classes.size());
  std::set<std::string> slide_ids;
  for (size_t i = 0; i < c.slides.size(); ++i) {
    const auto& s = c.slides[i];
    const std::string at = "cohort.slides[" + std::to_string(i) + "]";
    Validate(s, at);
    if (!slide_ids.insert(s.slide_id).second) {
      throw ValidationError(at + ".slide_id: duplicate '" + s.slide_id + "'");
    }
    if (s.class_label < 0 || s.class_label >= n_classes) {
      throw ValidationError(at + ".class_label: out of range");
    }
    if (c.classes[s.class_label].malignant != s.malignant) {
      throw ValidationError(at + ".malignant: inconsistent with class_label");
    }
    if (!c.slide_split.contains(s.slide_id)) {
      throw ValidationError("cohort.splits: slide '" + s.slide_id +
                            "' has no split");
    }
  }
  for (const auto& [id, split] : c.slide_split) {
    if (!slide_ids.contains(id)) {
      throw ValidationError("cohort.splits: unknown slide '" + id + "'");
    }
  }
  std::map<std::string, std::string> slide_owner;
  for (const auto& [id, k] : c.cases) {
    const std::string at = "cohort.cases." + id;
    if (k.slide_ids.empty()) {
      throw ValidationError(at + ".slide_ids: case has no slides");
    }
    if (k.label < 0 || k.label >= n_classes) {
      throw ValidationError(at + ".label: out of range");
    }
    bool any_malignant = false;
    const Split split = c.slide_split.count(k.slide_ids.front())
                            ? c.slide_split.at(k.slide_ids.front())
                            : Split::kTrain;
    for (const auto& sid : k.slide_ids) {
      const SlideManifest* s = c.FindSlide(sid);
      if (!s) throw ValidationError(at + ".slide_ids: unknown slide " + sid);
      if (s->case_id != id) {
        throw ValidationError(at + ".slide_ids: slide " + sid +
                              " names case " + s->case_id);
      }
      if (!slide_owner.emplace(sid, id).second) {
        throw ValidationError(at + ".slide_ids: slide " + sid +
                              " belongs to two cases");
      }
      if (c.slide_split.at(sid) != split) {
        throw ValidationError(at + ".slide_ids: slides of one case span "
                              "several splits");
      }
      any_malignant = any_malignant || s->malignant;
    }
    if (c.classes[k.label].malignant != any_malignant) {
      throw ValidationError(at + ".label: case positivity must equal the "
                            "presence of a malignant slide");
    }
    if (k.metastasis_size != MetastasisSize::kNone &&
        !(c.lymph_node_task && any_malignant)) {
      throw ValidationError(at + ".metastasis_size_class: only positive "
                            "lymph-node cases carry a size class");
    }
  }
  for (const auto& s : c.slides) {
    if (!slide_owner.contains(s.slide_id)) {
      throw ValidationError("cohort.cases: slide '" + s.slide_id +
                            "' belongs to no case");
    }
  }
}

CohortManifest LoadManifest(const std::filesystem::path& path) {
  RequireExists(path, "cohort manifest");
  return CohortFromJson(ReadJsonFile(path));
}

void SaveManifest(const CohortManifest& cohort,
                  const std::filesystem::path& path) {
  Validate(cohort);
  WriteJsonFile(path, ToJson(cohort));
}

}  // namespace frostmil::synthwsi
