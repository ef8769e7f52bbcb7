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

// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Usage: acceptance <frostmil binary> <demo config> [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abmil_grad_case.h"
#include "frostmil/common/error.h"
#include "frostmil/common/rng.h"
#include "frostmil/mil/abmil.h"
#include "frostmil/mil/attention_grid.h"
#include "frostmil/mil/bags.h"
#include "frostmil/mil/train.h"
#include "frostmil/nn/dino.h"
#include "frostmil/nn/grad_check.h"
#include "frostmil/nn/vit.h"
#include "frostmil/preprocess/segment.h"
#include "frostmil/preprocess/tiling.h"
#include "frostmil/stats/bootstrap.h"
#include "frostmil/stats/metrics.h"
#include "frostmil/stats/wilcoxon.h"
#include "frostmil/synthwsi/cohort.h"
#include "frostmil/synthwsi/generator.h"
#include "frostmil/triage/triage.h"
#include "grad_cases.h"
#include "stats_oracles.h"
#include "test_util.h"

namespace frostmil::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared in-memory pipeline: render, segment, tile, extract.

struct Extracted {
  synthwsi::CohortManifest cohort;
  std::vector<preprocess::PatchRecord> records;
  nn::Tensor features;
  std::vector<nn::Tensor> pixels;  // kept only when requested
};

constexpr int kGeometryPx = 1024;
constexpr int kTilePx = 256;

synthwsi::CohortConfig MilCohortConfig(int cases) {
  synthwsi::CohortConfig c;
  c.cohort_id = "acceptance";
  c.n_cases = cases;
  c.width_px = c.height_px = kGeometryPx;
  c.tile_px = kTilePx;
  return c;
}

Extracted RunPipeline(const synthwsi::CohortManifest& cohort, const nn::Encoder* encoder,
                      bool keep_pixels, int net_px) {
  Extracted out;
  out.cohort = cohort;
  preprocess::TileOptions tile;
  tile.patch_px = kTilePx;
  std::vector<nn::Tensor> pixels;
  for (const auto& manifest : cohort.slides) {
    const std::vector<RgbImage> levels = synthwsi::RenderSlide(manifest);
    const size_t coarsest = levels.size() - 1;
    const preprocess::TissueMask mask =
        preprocess::SegmentImage(levels[coarsest], manifest.levels[coarsest]);
    for (auto& r : preprocess::TileSlide(manifest, mask, tile)) {
      pixels.push_back(preprocess::ExtractPatchPixels(levels[0], manifest.mpp, r, net_px));
      out.records.push_back(std::move(r));
    }
  }
  if (encoder) {
    const int n = static_cast<int>(pixels.size());
    const int F = encoder->vit.feature_dim();
    out.features = nn::Tensor({n, F});
    const int chunk = 64;
    for (int start = 0; start < n; start += chunk) {
      const int b = std::min(chunk, n - start);
      nn::Tensor batch({b, 3, net_px, net_px});
      const size_t per = static_cast<size_t>(3) * net_px * net_px;
      for (int i = 0; i < b; ++i) {
        std::copy(pixels[start + i].data.begin(), pixels[start + i].data.end(),
                  batch.data.begin() + static_cast<std::ptrdiff_t>(i * per));
      }
      const nn::Tensor f = nn::ExtractFeatures(*encoder, batch);
      std::copy(f.data.begin(), f.data.end(),
                out.features.data.begin() + static_cast<std::ptrdiff_t>(start) * F);
    }
  }
  if (keep_pixels) out.pixels = std::move(pixels);
  return out;
}

nn::Encoder ToyEncoder(uint64_t seed) {
  const nn::ViTConfig vit = nn::ViTConfig::Toy();
  const nn::LoRAConfig lora;
  return nn::Encoder{vit, lora, nn::InitViT(vit, seed), nn::InitLoRA(vit, lora, seed)};
}

// State carried from criterion 4 to criteria 5 and 9.
struct MilRun {
  bool ready = false;
  nn::Encoder encoder;
  mil::TrainResult result;
  std::vector<mil::Bag> test;
  synthwsi::CohortManifest cohort;
};

MilRun& SharedMil() {
  static MilRun run;
  return run;
}

// ---------------------------------------------------------------------------
// 1. Gradient suite.

Outcome GradientSuite() {
  const auto start = Clock::now();
  double prim = 0, abmil = 0, vit = 0;
  std::string worst_prim;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (const auto& c : testing::PrimitiveGradCases(seed)) {
      const double e = nn::GradCheck(c.fn, c.inputs, c.eps).max_rel_error;
      if (e > prim) {
        prim = e;
        worst_prim = c.name;
      }
    }
    const auto ce = testing::CrossEntropyFiveLogitCase(seed);
    prim = std::max(prim, nn::GradCheck(ce.fn, ce.inputs, ce.eps).max_rel_error);
    const auto a = testing::AbmilCrossEntropyCase(seed);
    abmil = std::max(abmil, nn::GradCheck(a.fn, a.inputs, a.eps).max_rel_error);
    const auto v = testing::VitLoraDinoCase(seed);
    vit = std::max(vit, nn::GradCheck(v.fn, v.inputs, v.eps).max_rel_error);
  }
  const double t = Seconds(start);
  Outcome o;
  o.pass = prim < 1e-3 && abmil < 1e-2 && vit < 1e-2 && t < 60;
  o.detail = "20 seeds; max rel err primitives " + Fmt("%.2e", prim) + " (" + worst_prim +
             "), ABMIL+CE " + Fmt("%.2e", abmil) + ", ViT+LoRA+DINO " + Fmt("%.2e", vit) +
             "; " + Fmt("%.1f", t) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 2. LoRA identity.

Outcome LoraIdentity() {
  const nn::ViTConfig vit = nn::ViTConfig::Toy();
  const nn::LoRAConfig lora;
  const nn::Params base = nn::InitViT(vit, 11);
  nn::Params adapted = base;
  nn::Merge(adapted, nn::InitLoRA(vit, lora, 11));
  int identical = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    Rng rng = Rng::Derive(2, {i});
    nn::Tensor img({1, 3, vit.net_px, vit.net_px});
    for (float& v : img.data) v = static_cast<float>(rng.Uniform());
    auto tokens = [&](const nn::Params& p) {
      nn::Tape<float> tape;
      const auto vars = nn::Bind(tape, p);
      return nn::ForwardViT(tape, vit, lora, vars, tape.Leaf(img)).value();
    };
    const nn::Tensor a = tokens(base);
    const nn::Tensor b = tokens(adapted);
    identical += a.shape == b.shape &&
                 std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0;
  }
  Outcome o;
  o.pass = identical == 100 && lora.rank == 8 && lora.alpha == 16.0;
  o.detail = std::to_string(identical) + "/100 bitwise identical (rank " +
             std::to_string(lora.rank) + ", alpha " + Fmt("%g", lora.alpha) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 3. DINO sanity.

Outcome DinoSanity() {
  const auto start = Clock::now();
  const nn::ViTConfig vit = nn::ViTConfig::Toy();
  // Patch stream from a small rendered cohort.
  const auto cohort = synthwsi::GenerateCohort(31, MilCohortConfig(16));
  const Extracted ex = RunPipeline(cohort, nullptr, true, vit.net_px);

  nn::DinoConfig dino;
  dino.batch = 16;
  dino.out_dim = 64;
  nn::DinoState s = nn::InitDino(vit, nn::LoRAConfig{}, dino, 3);
  std::vector<size_t> probe_idx;
  for (size_t i = 0; i < 16; ++i) probe_idx.push_back(i * ex.pixels.size() / 16);
  const nn::Tensor probe = nn::MakeViews(ex.pixels, probe_idx, 999, 0, dino.augment);
  const double before = nn::ProbeLoss(s, probe);
  const nn::DinoState initial = s;

  // Independent EMA replay over the observed student trajectory.
  const float m = static_cast<float>(0.9995);
  const float one_minus = static_cast<float>(1.0 - 0.9995);
  nn::Params replay = s.teacher;
  nn::Pretrain(s, ex.pixels, 200, [&](const nn::DinoState& st, const nn::StepInfo&) {
    for (auto& [name, t] : replay) {
      const auto& src = st.student.at(name).data;
      for (size_t i = 0; i < t.data.size(); ++i) t.data[i] = m * t.data[i] + one_minus * src[i];
    }
  });
  const double after = nn::ProbeLoss(s, probe);
  // Diagnostic only: both states scored against the final center.
  nn::DinoState initial_final_center = initial;
  initial_final_center.center = s.center;
  const double before_fixed = nn::ProbeLoss(initial_final_center, probe);
  const bool ema_exact = replay == s.teacher && s.dino.teacher_momentum == 0.9995;
  const double t = Seconds(start);
  Outcome o;
  o.pass = after < before && ema_exact && s.step == 200 && t < 300;
  o.detail = "probe loss " + Fmt("%.4f", before) + " -> " + Fmt("%.4f", after) +
             " (ln K = " + Fmt("%.4f", std::log(static_cast<double>(dino.out_dim))) +
             "; with the final center at both ends " + Fmt("%.4f", before_fixed) + " -> " +
             Fmt("%.4f", after) + ")" + "; teacher exact EMA: " + (ema_exact ? "yes" : "no") + "; " +
             std::to_string(ex.pixels.size()) + " patches; " + Fmt("%.1f", t) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 4. MIL learnability.

Outcome MilLearnability() {
  const auto start = Clock::now();
  synthwsi::CohortConfig config = MilCohortConfig(300);
  config.split_policy = {{synthwsi::Split::kTrain, 200.0 / 300},
                         {synthwsi::Split::kVal, 50.0 / 300},
                         {synthwsi::Split::kTest, 50.0 / 300}};
  const auto cohort = synthwsi::GenerateCohort(41, config);
  MilRun& run = SharedMil();
  run.encoder = ToyEncoder(41);
  const Extracted ex = RunPipeline(cohort, &run.encoder, false, run.encoder.vit.net_px);
  const double t_extract = Seconds(start);

  // Malignant slides must carry a lesion patch for the bag rule to hold.
  std::set<std::string> with_lesion;
  for (const auto& r : ex.records) {
    if (r.in_lesion) with_lesion.insert(r.slide_id);
  }
  int rule_mismatch = 0;
  for (const auto& s : cohort.slides) rule_mismatch += s.malignant != with_lesion.contains(s.slide_id);

  const mil::TaskSpec task;
  auto bags = [&](synthwsi::Split split) {
    return mil::BuildBags(task, cohort, ex.records, ex.features, cohort.SlidesIn(split));
  };
  const auto train = bags(synthwsi::Split::kTrain);
  const auto val = bags(synthwsi::Split::kVal);
  run.test = bags(synthwsi::Split::kTest);
  mil::TrainConfig tc;
  tc.max_epochs = 50;
  tc.lr = 2e-4;
  tc.weight_decay = 1e-5;
  tc.seed = 41;
  run.result = mil::TrainAbmil(train, val, 2, tc);
  run.cohort = cohort;
  run.ready = true;

  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& p : mil::Predict(run.result.params, run.test)) {
    scores.push_back(p.probs[1]);
    labels.push_back(p.label);
  }
  const double auroc = stats::Auroc(scores, labels);
  const double t = Seconds(start);
  Outcome o;
  o.pass = auroc >= 0.95 && run.result.log.size() <= 50 && train.size() == 200 &&
           val.size() == 50 && run.test.size() == 50 && t < 600;
  o.detail = "bags " + std::to_string(train.size()) + "/" + std::to_string(val.size()) + "/" +
             std::to_string(run.test.size()) + ", test AUROC " + Fmt("%.4f", auroc) +
             ", best epoch " + std::to_string(run.result.best_epoch) + " of " +
             std::to_string(run.result.log.size()) + ", label/lesion mismatches " +
             std::to_string(rule_mismatch) + "; extract " + Fmt("%.0f", t_extract) + " s, total " +
             Fmt("%.0f", t) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Heatmap localization.

Outcome HeatmapLocalization() {
  MilRun& run = SharedMil();
  if (!run.ready) return {false, "criterion 4 did not run"};
  int malignant = 0, localized = 0, skipped = 0;
  const auto preds = mil::Predict(run.result.params, run.test);
  for (size_t i = 0; i < run.test.size(); ++i) {
    const mil::Bag& bag = run.test[i];
    if (bag.label != 1) continue;
    for (const auto& grid : mil::AttentionToGrid(bag, preds[i].attention, run.cohort)) {
      double in_sum = 0, out_sum = 0;
      int in_n = 0, out_n = 0;
      for (const auto& c : grid.cells) {
        (c.in_lesion ? in_sum : out_sum) += c.weight;
        (c.in_lesion ? in_n : out_n) += 1;
      }
      if (in_n == 0 || out_n == 0) {
        ++skipped;
        continue;
      }
      ++malignant;
      localized += in_sum / in_n > out_sum / out_n;
    }
  }
  const double frac = malignant ? static_cast<double>(localized) / malignant : 0.0;
  Outcome o;
  o.pass = malignant > 0 && frac >= 0.90;
  o.detail = std::to_string(localized) + "/" + std::to_string(malignant) +
             " malignant test slides (" + Fmt("%.1f", 100 * frac) + "%) favor lesion patches; " +
             std::to_string(skipped) + " without both patch kinds skipped";
  return o;
}

// ---------------------------------------------------------------------------
// 6. Metric oracles.

Outcome MetricOracles() {
  Rng rng(61);
  int auroc_ok = 0, spec_ok = 0, holm_ok = 0, wil_ok = 0;
  const double targets[] = {0.0, 0.5, 0.9, 0.95, 1.0};
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 2 + rng.Below(29);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (size_t i = 0; i < n; ++i) {
      s[i] = std::round(rng.Uniform() * 20) / 20;
      y[i] = rng.Uniform() < 0.5;
    }
    y[0] = 1;
    y[1] = 0;
    auroc_ok += stats::Auroc(s, y) == testing::PairCountAuroc(s, y);
    bool all = true;
    for (double target : targets) {
      const auto got = stats::SpecAtSens(s, y, target);
      const auto want = testing::ThresholdScan(s, y, target);
      all = all && got.specificity == want.specificity && got.threshold == want.threshold;
    }
    spec_ok += all;
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> raw(1 + rng.Below(12));
    for (double& p : raw) p = rng.Uniform() * (rng.Uniform() < 0.5 ? 0.05 : 1.0);
    holm_ok += stats::HolmAdjust(raw) == testing::HandHolm(raw);
  }
  int wil_total = 0;
  for (size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> d(n);
      for (double& v : d) {
        v = (rng.Uniform() < 0.5 ? -1.0 : 1.0) * (1 + static_cast<double>(rng.Below(6)));
      }
      const auto [ranks, w_plus] = testing::SignedRanks(d);
      const double want = testing::EnumeratedSignedRankP(ranks, w_plus);
      bool ok = std::fabs(stats::ExactSignedRankP(ranks, w_plus) - want) <= 1e-15;
      if (n >= static_cast<size_t>(stats::kWilcoxonMinPairs)) {
        const std::vector<double> zero(n, 0.0);
        const auto r = stats::WilcoxonSignedRank(d, zero);
        ok = ok && r.exact && std::fabs(r.p_value - want) <= 1e-15;
      }
      wil_ok += ok;
      ++wil_total;
    }
  }
  Outcome o;
  o.pass = auroc_ok == 1000 && spec_ok == 1000 && holm_ok == 50 && wil_ok == wil_total;
  o.detail = "AUROC " + std::to_string(auroc_ok) + "/1000, spec@sens " + std::to_string(spec_ok) +
             "/1000, Holm " + std::to_string(holm_ok) + "/50, exact Wilcoxon " +
             std::to_string(wil_ok) + "/" + std::to_string(wil_total) + " (n 1..12)";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Bootstrap determinism and coverage.

Outcome BootstrapCoverage() {
  const auto start = Clock::now();
  // Positives ~ N(mu, 1), negatives ~ N(0, 1): true AUROC = Phi(mu / sqrt 2).
  const double mu = 1.0;
  const double truth = 0.5 * std::erfc(-mu / 2.0);
  auto dataset = [&](uint64_t k, std::vector<double>& s, std::vector<int>& y) {
    Rng rng = Rng::Derive(71, {k});
    s.assign(100, 0.0);
    y.assign(100, 0);
    for (size_t i = 0; i < 100; ++i) {
      y[i] = i < 50;
      s[i] = rng.Normal() + (y[i] ? mu : 0.0);
    }
  };
  auto ci_for = [&](const std::vector<double>& s, const std::vector<int>& y, uint64_t seed) {
    const stats::IndexedMetric metric = [&](std::span<const size_t> idx) {
      std::vector<double> ss;
      std::vector<int> yy;
      for (size_t i : idx) {
        ss.push_back(s[i]);
        yy.push_back(y[i]);
      }
      return stats::Auroc(ss, yy);
    };
    return stats::BootstrapCi(s.size(), metric, 1000, 0.95, seed);
  };
  std::vector<double> s;
  std::vector<int> y;
  dataset(0, s, y);
  const stats::Interval a = ci_for(s, y, 5);
  const stats::Interval b = ci_for(s, y, 5);
  const bool deterministic = std::memcmp(&a, &b, sizeof(stats::Interval)) == 0;
  int covered = 0;
  for (uint64_t k = 0; k < 200; ++k) {
    dataset(k, s, y);
    const stats::Interval ci = ci_for(s, y, k);
    covered += ci.lo <= truth && truth <= ci.hi;
  }
  const double coverage = covered / 200.0;
  Outcome o;
  o.pass = deterministic && coverage >= 0.90 && coverage <= 0.99;
  o.detail = std::string("identical CI bytes: ") + (deterministic ? "yes" : "no") +
             "; coverage of true AUROC " + Fmt("%.4f", truth) + ": " + std::to_string(covered) +
             "/200 (" + Fmt("%.1f", 100 * coverage) + "%); " + Fmt("%.1f", Seconds(start)) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Case-level aggregation.

Outcome CaseAggregation() {
  synthwsi::CohortConfig config = MilCohortConfig(30);
  config.width_px = config.height_px = 512;
  config.tile_px = 128;
  config.min_slides_per_case = 1;
  config.max_slides_per_case = 3;
  const auto cohort = synthwsi::GenerateCohort(81, config);
  Extracted ex;
  {
    preprocess::TileOptions tile;
    tile.patch_px = 128;
    for (const auto& manifest : cohort.slides) {
      const auto levels = synthwsi::RenderSlide(manifest);
      const size_t coarsest = levels.size() - 1;
      const auto mask = preprocess::SegmentImage(levels[coarsest], manifest.levels[coarsest]);
      for (auto& r : preprocess::TileSlide(manifest, mask, tile)) ex.records.push_back(r);
    }
  }
  ex.features = nn::Tensor({static_cast<int>(ex.records.size()), 8});
  Rng rng(82);
  nn::FillNormal(ex.features, rng, 1.0);
  std::map<std::string, int> per_slide;
  for (const auto& r : ex.records) ++per_slide[r.slide_id];

  mil::TaskSpec slide_task;
  mil::TaskSpec case_task;
  case_task.level = mil::BagLevel::kCase;
  const nn::Params params = mil::InitAbmil({8, 4, 2}, 83);
  int sizes_ok = 0, cases = 0, single = 0, single_ok = 0, multi = 0;
  for (const auto& [id, rec] : cohort.cases) {
    int expected = 0;
    for (const auto& sid : rec.slide_ids) expected += per_slide[sid];
    if (expected == 0) continue;
    ++cases;
    const mil::Bag bag = mil::BuildBags(case_task, cohort, ex.records, ex.features, {id}).front();
    sizes_ok += bag.size() == expected;
    multi += rec.slide_ids.size() > 1;
    if (rec.slide_ids.size() == 1) {
      ++single;
      const mil::Bag sb =
          mil::BuildBags(slide_task, cohort, ex.records, ex.features, rec.slide_ids).front();
      const auto a = mil::RunAbmil(params, bag.features);
      const auto b = mil::RunAbmil(params, sb.features);
      single_ok += a.probs == b.probs && a.attention == b.attention;
    }
  }
  Outcome o;
  o.pass = cases > 0 && sizes_ok == cases && single > 0 && single_ok == single && multi > 0;
  o.detail = "bag size = sum of slide patches for " + std::to_string(sizes_ok) + "/" +
             std::to_string(cases) + " cases (" + std::to_string(multi) +
             " multi-slide); single-slide case equals slide prediction " +
             std::to_string(single_ok) + "/" + std::to_string(single);
  return o;
}

// ---------------------------------------------------------------------------
// 9. Triage accounting on a prospective cohort scored by criterion 4's model.

Outcome TriageAccounting() {
  MilRun& run = SharedMil();
  if (!run.ready) return {false, "criterion 4 did not run"};
  synthwsi::CohortConfig config = MilCohortConfig(200);
  config.split_policy = {{synthwsi::Split::kProspective, 1.0}};
  const auto cohort = synthwsi::GenerateCohort(91, config);
  const Extracted ex = RunPipeline(cohort, &run.encoder, false, run.encoder.vit.net_px);
  mil::TaskSpec task;
  task.level = mil::BagLevel::kCase;
  std::vector<std::string> ids;
  for (const auto& [id, rec] : cohort.cases) {
    for (const auto& sid : rec.slide_ids) {
      if (std::any_of(ex.records.begin(), ex.records.end(),
                      [&](const auto& r) { return r.slide_id == sid; })) {
        ids.push_back(id);
        break;
      }
    }
  }
  const auto bags = mil::BuildBags(task, cohort, ex.records, ex.features, ids);
  std::vector<triage::ScoredCase> cases;
  for (const auto& p : mil::Predict(run.result.params, bags)) {
    cases.push_back({p.bag_id, p.probs[1], p.label == 1, cohort.cases.at(p.bag_id).pathologist_positive});
  }
  const triage::TriagePolicy policy;
  const auto outcome = triage::ApplyPolicy(policy, cases);
  std::set<std::string> seen(outcome.auto_set.begin(), outcome.auto_set.end());
  bool disjoint = true;
  for (const auto& id : outcome.residual_set) disjoint = seen.insert(id).second && disjoint;
  const bool complete = seen.size() == cases.size() && disjoint;

  // Boundary handling: scores exactly on a threshold stay residual.
  std::vector<triage::ScoredCase> boundary = {{"hi", policy.theta_hi, true, true},
                                              {"lo", policy.theta_lo, false, false}};
  const bool strict = triage::ApplyPolicy(policy, boundary).auto_set.empty();

  size_t auto_errors = 0;
  for (const auto& c : cases) {
    if (policy.IsAuto(c.score)) auto_errors += (c.score > policy.theta_hi) != c.positive;
  }
  const auto w = triage::CombinedWorkflowEval(policy, cases);
  const double diff = w.after.sensitivity() - w.before.sensitivity();
  Outcome o;
  o.pass = complete && strict && auto_errors == 0 && std::fabs(diff) <= 0.02;
  o.detail = std::to_string(cases.size()) + " cases, auto " + std::to_string(outcome.auto_set.size()) +
             " (" + Fmt("%.1f", 100 * outcome.workload_reduction) + "%), auto errors " +
             std::to_string(auto_errors) + ", partition " + (complete ? "complete" : "BROKEN") +
             ", boundary " + (strict ? "residual" : "AUTO") + ", sensitivity " +
             Fmt("%.4f", w.before.sensitivity()) + " -> " + Fmt("%.4f", w.after.sensitivity()) +
             ", specificity " + Fmt("%.4f", w.before.specificity()) + " -> " +
             Fmt("%.4f", w.after.specificity());
  return o;
}

// ---------------------------------------------------------------------------
// 10. Pipeline reproducibility through the CLI.

std::map<std::string, std::string> Artifacts(const fs::path& workdir) {
  std::map<std::string, std::string> out;
  const fs::path report = workdir / "reports" / "report.json";
  if (fs::exists(report)) out["reports/report.json"] = testing::ReadBytes(report);
  if (fs::exists(workdir / "heatmaps")) {
    for (const auto& e : fs::directory_iterator(workdir / "heatmaps")) {
      if (e.path().extension() == ".png") {
        out["heatmaps/" + e.path().filename().string()] = testing::ReadBytes(e.path());
      }
    }
  }
  return out;
}

std::optional<std::string> RunDemo(const std::string& cli, const std::string& config,
                                   const fs::path& workdir) {
  fs::create_directories(workdir);
  for (const char* stage :
       {"gen", "tile", "pretrain", "extract", "train", "eval", "triage", "heatmap"}) {
    const std::string cmd = "\"" + cli + "\" " + stage + " --config \"" + config +
                            "\" --workdir \"" + workdir.string() + "\" >> \"" +
                            (workdir / "stages.log").string() + "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) return std::string(stage) + " failed (see stages.log)";
  }
  return std::nullopt;
}

Outcome PipelineReproducibility(const std::string& cli, const std::string& config) {
  testing::TempDir dir("acceptance_demo");
  const auto start = Clock::now();
  if (auto err = RunDemo(cli, config, dir / "run_a")) return {false, "run A: " + *err};
  const double t_run = Seconds(start);
  if (auto err = RunDemo(cli, config, dir / "run_b")) return {false, "run B: " + *err};
  const auto a = Artifacts(dir / "run_a");
  const auto b = Artifacts(dir / "run_b");
  size_t pngs = 0;
  for (const auto& [name, bytes] : a) pngs += name.starts_with("heatmaps/");
  Outcome o;
  o.pass = a == b && a.contains("reports/report.json") && pngs > 0 && t_run < 1800;
  o.detail = std::string(a == b ? "byte-identical" : "DIFFERENT") + " report.json and " +
             std::to_string(pngs) + " heatmap PNGs; one demo run " + Fmt("%.0f", t_run) + " s";
  return o;
}

}  // namespace
}  // namespace frostmil::acceptance

int main(int argc, char** argv) {
  using namespace frostmil::acceptance;
  if (argc < 3) {
    std::cerr << "usage: acceptance <frostmil binary> <demo config> [criteria...]\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string config = argv[2];
  std::set<int> only;
  for (int i = 3; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient suite", GradientSuite},
      {"LoRA identity", LoraIdentity},
      {"DINO sanity", DinoSanity},
      {"MIL learnability", MilLearnability},
      {"heatmap localization", HeatmapLocalization},
      {"metric oracles", MetricOracles},
      {"bootstrap determinism and coverage", BootstrapCoverage},
      {"case-level aggregation", CaseAggregation},
      {"triage accounting", TriageAccounting},
      {"pipeline reproducibility", [&] { return PipelineReproducibility(cli, config); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(number)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << number << ". " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
