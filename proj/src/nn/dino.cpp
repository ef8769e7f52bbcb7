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

#include "frostmil/nn/dino.h"

#include <cmath>

#include "frostmil/nn/checkpoint.h"
#include "frostmil/nn/ops.h"

namespace frostmil::nn {

namespace {

constexpr uint64_t kHeadStream = 0x4845u;
constexpr uint64_t kLoraStream = 0x4c4fu;
constexpr uint64_t kBatchStream = 0x4241u;
constexpr uint64_t kViewStream = 0x5649u;

const char* const kTeacherPrefix = "teacher.";
const char* const kCenterName = "dino.center";
const char* const kFirstMomentPrefix = "opt.m.";
const char* const kSecondMomentPrefix = "opt.v.";

Params WithPrefix(const Params& params, const std::string& prefix) {
  Params out;
  for (const auto& [name, value] : params) out.emplace(prefix + name, value);
  return out;
}

}  // namespace

void DinoConfig::Validate() const {
  if (tau_student <= 0 || tau_teacher <= 0) {
    throw ValidationError("dino: temperatures must be > 0");
  }
  if (out_dim < 1 || head_hidden < 1) throw ValidationError("dino: head sizes must be >= 1");
  if (batch < 1) throw ValidationError("dino.batch must be >= 1");
  if (teacher_momentum < 0 || teacher_momentum > 1) {
    throw ValidationError("dino.teacher_momentum must be in [0, 1]");
  }
  if (center_momentum < 0 || center_momentum > 1) {
    throw ValidationError("dino.center_momentum must be in [0, 1]");
  }
}

Json ToJson(const DinoConfig& c) {
  return Json{{"out_dim", c.out_dim},
              {"head_hidden", c.head_hidden},
              {"tau_student", c.tau_student},
              {"tau_teacher", c.tau_teacher},
              {"center_momentum", c.center_momentum},
              {"teacher_momentum", c.teacher_momentum},
              {"batch", c.batch},
              {"lr", c.optim.lr},
              {"beta1", c.optim.beta1},
              {"beta2", c.optim.beta2},
              {"eps", c.optim.eps},
              {"weight_decay", c.optim.weight_decay},
              {"crop_min_scale", c.augment.min_scale},
              {"crop_max_scale", c.augment.max_scale},
              {"flip_probability", c.augment.flip_probability},
              {"gain_jitter", c.augment.gain_jitter}};
}

DinoConfig DinoConfigFromJson(const Json& j) {
  DinoConfig c;
  const std::string where = "dino";
  c.out_dim = GetField<int>(j, "out_dim", where);
  c.head_hidden = GetField<int>(j, "head_hidden", where);
  c.tau_student = GetField<double>(j, "tau_student", where);
  c.tau_teacher = GetField<double>(j, "tau_teacher", where);
  c.center_momentum = GetField<double>(j, "center_momentum", where);
  c.teacher_momentum = GetField<double>(j, "teacher_momentum", where);
  c.batch = GetField<int>(j, "batch", where);
  c.optim.lr = GetField<double>(j, "lr", where);
  c.optim.beta1 = GetField<double>(j, "beta1", where);
  c.optim.beta2 = GetField<double>(j, "beta2", where);
  c.optim.eps = GetField<double>(j, "eps", where);
  c.optim.weight_decay = GetField<double>(j, "weight_decay", where);
  c.augment.min_scale = GetField<double>(j, "crop_min_scale", where);
  c.augment.max_scale = GetField<double>(j, "crop_max_scale", where);
  c.augment.flip_probability = GetField<double>(j, "flip_probability", where);
  c.augment.gain_jitter = GetField<double>(j, "gain_jitter", where);
  c.Validate();
  return c;
}

Encoder DinoState::StudentEncoder() const {
  return Encoder{vit, lora, base, Subset(student, "lora.", "lora.")};
}

Encoder DinoState::TeacherEncoder() const {
  return Encoder{vit, lora, base, Subset(teacher, "lora.", "lora.")};
}

Params InitDinoHead(int in_dim, const DinoConfig& config, uint64_t seed) {
  Rng rng = Rng::Derive(seed, {kHeadStream});
  Params head;
  const int dims[4] = {in_dim, config.head_hidden, config.head_hidden, config.out_dim};
  for (int i = 0; i < 3; ++i) {
    const std::string name = "head.fc" + std::to_string(i + 1);
    Tensor w({dims[i + 1], dims[i]});
    Tensor b({dims[i + 1]});
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[i]));
    FillUniform(w, rng, bound);
    FillUniform(b, rng, bound);
    head.emplace(name + ".weight", std::move(w));
    head.emplace(name + ".bias", std::move(b));
  }
  return head;
}

DinoState InitDino(const ViTConfig& vit, const LoRAConfig& lora,
                   const DinoConfig& dino, uint64_t seed) {
  vit.Validate();
  dino.Validate();
  DinoState s;
  s.vit = vit;
  s.lora = lora;
  s.dino = dino;
  s.seed = seed;
  s.base = InitViT(vit, seed);
  s.student = InitLoRA(vit, lora, Rng::DeriveSeed(seed, {kLoraStream}));
  Merge(s.student, InitDinoHead(vit.embed_dim, dino, seed));
  s.teacher = s.student;
  s.center = Tensor({dino.out_dim});
  s.optimizer = AdamW(dino.optim);
  return s;
}

template <typename T>
Var<T> DinoHead(const VarMap<T>& p, Var<T> x) {
  Var<T> h = Gelu(Linear(x, Param(p, "head.fc1.weight"), Param(p, "head.fc1.bias")));
  h = Gelu(Linear(h, Param(p, "head.fc2.weight"), Param(p, "head.fc2.bias")));
  return Linear(h, Param(p, "head.fc3.weight"), Param(p, "head.fc3.bias"));
}

template <typename T>
Var<T> DinoLogits(Tape<T>& tape, const ViTConfig& vit, const LoRAConfig& lora,
                  const VarMap<T>& params, Var<T> views) {
  Var<T> tokens = ForwardViT(tape, vit, lora, params, views);
  const int B = tokens.shape()[0];
  const int D = tokens.shape()[2];
  Var<T> cls = Reshape(Slice(tokens, 1, 0, 1), Shape{B, D});
  return DinoHead(params, cls);
}

template <typename T>
Var<T> DinoLoss(Tape<T>& tape, Var<T> student_logits,
                const BasicTensor<T>& teacher_logits,
                const BasicTensor<T>& center, double tau_student,
                double tau_teacher) {
  if (tau_student <= 0 || tau_teacher <= 0) {
    throw ValidationError("dino_loss: temperatures must be > 0");
  }
  const Shape& shape = student_logits.shape();
  if (shape.size() != 2 || shape != teacher_logits.shape || shape[0] % 2 != 0) {
    throw ValidationError("dino_loss: student " + ShapeString(shape) + " and teacher " +
                          ShapeString(teacher_logits.shape) +
                          " must be equal [2B, K] shapes");
  }
  const int rows = shape[0];
  const int K = shape[1];
  if (center.numel() != static_cast<size_t>(K)) {
    throw ValidationError("dino_loss: center length " + std::to_string(center.numel()) +
                          " does not match K = " + std::to_string(K));
  }
  BasicTensor<T> centered = teacher_logits;
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < K; ++k) centered.data[static_cast<size_t>(i) * K + k] -= center.data[k];
  }
  const BasicTensor<T> pt = SoftmaxRows(centered, static_cast<T>(tau_teacher));
  // Target for student row i is the teacher distribution of the other view.
  BasicTensor<T> target(shape);
  const int half = rows / 2;
  for (int i = 0; i < rows; ++i) {
    const int j = i < half ? i + half : i - half;
    std::copy_n(&pt.data[static_cast<size_t>(j) * K], K, &target.data[static_cast<size_t>(i) * K]);
  }
  Var<T> log_ps = LogSoftmax(Scale(student_logits, static_cast<T>(1.0 / tau_student)));
  Var<T> cross = Sum(Mul(tape.Leaf(std::move(target)), log_ps));
  return Scale(cross, static_cast<T>(-1.0 / rows));
}

void EmaUpdate(Params& teacher, const Params& student, double momentum) {
  const float m = static_cast<float>(momentum);
  const float one_minus = static_cast<float>(1.0 - momentum);
  for (auto& [name, t] : teacher) {
    auto it = student.find(name);
    if (it == student.end() || it->second.shape != t.shape) {
      throw ValidationError("ema_update: no student parameter matching '" + name + "'");
    }
    const auto& s = it->second.data;
    for (size_t i = 0; i < t.data.size(); ++i) t.data[i] = m * t.data[i] + one_minus * s[i];
  }
}

void UpdateCenter(Tensor& center, const Tensor& teacher_logits, double momentum) {
  const int rows = teacher_logits.dim(0);
  const int K = teacher_logits.dim(1);
  std::vector<double> mean(K, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < K; ++k) mean[k] += teacher_logits.data[static_cast<size_t>(i) * K + k];
  }
  const float m = static_cast<float>(momentum);
  const float one_minus = static_cast<float>(1.0 - momentum);
  for (int k = 0; k < K; ++k) {
    center.data[k] = m * center.data[k] + one_minus * static_cast<float>(mean[k] / rows);
  }
}

Tensor MakeViews(const std::vector<Tensor>& patches, const std::vector<size_t>& indices,
                 uint64_t seed, uint64_t stream, const AugmentConfig& augment) {
  const int B = static_cast<int>(indices.size());
  const Shape& ps = patches.at(indices.at(0)).shape;
  const size_t per = NumElements(ps);
  Tensor views({2 * B, ps[0], ps[1], ps[2]});
  for (int view = 0; view < 2; ++view) {
    for (int j = 0; j < B; ++j) {
      Rng rng = Rng::Derive(seed, {kViewStream, stream, static_cast<uint64_t>(j),
                                   static_cast<uint64_t>(view)});
      const Tensor v = AugmentView(patches.at(indices[j]), rng, augment);
      std::copy(v.data.begin(), v.data.end(),
                views.data.begin() + static_cast<std::ptrdiff_t>((view * B + j) * per));
    }
  }
  return views;
}

std::vector<size_t> BatchIndices(size_t n_patches, int batch, uint64_t seed, int64_t step) {
  std::vector<size_t> out;
  out.reserve(batch);
  uint64_t cached_pass = ~0ULL;
  std::vector<size_t> order;
  for (int j = 0; j < batch; ++j) {
    const uint64_t global = static_cast<uint64_t>(step) * batch + j;
    const uint64_t pass = global / n_patches;
    if (pass != cached_pass) {
      order.resize(n_patches);
      for (size_t i = 0; i < n_patches; ++i) order[i] = i;
      Rng rng = Rng::Derive(seed, {kBatchStream, pass});
      rng.Shuffle(order);
      cached_pass = pass;
    }
    out.push_back(order[global % n_patches]);
  }
  return out;
}

namespace {

Tensor TeacherLogits(const DinoState& s, const Tensor& views) {
  Tape<float> tape;
  VarMap<float> vars = Bind(tape, s.base);
  for (auto& [name, v] : Bind(tape, s.teacher)) vars.emplace(name, v);
  return DinoLogits(tape, s.vit, s.lora, vars, tape.Leaf(views)).value();
}

}  // namespace

double ProbeLoss(const DinoState& s, const Tensor& views) {
  const Tensor teacher = TeacherLogits(s, views);
  Tape<float> tape;
  VarMap<float> vars = Bind(tape, s.base);
  for (auto& [name, v] : Bind(tape, s.student)) vars.emplace(name, v);
  Var<float> logits = DinoLogits(tape, s.vit, s.lora, vars, tape.Leaf(views));
  return DinoLoss(tape, logits, teacher, s.center, s.dino.tau_student, s.dino.tau_teacher)
      .value()
      .data[0];
}

void Pretrain(DinoState& s, const std::vector<Tensor>& patches, int steps,
              const StepObserver& observer) {
  if (steps < 0) throw ValidationError("pretrain: steps must be >= 0");
  if (steps > 0 && patches.empty()) throw ValidationError("pretrain: patch stream is empty");
  for (int it = 0; it < steps; ++it) {
    const auto indices = BatchIndices(patches.size(), s.dino.batch, s.seed, s.step);
    const Tensor views = MakeViews(patches, indices, s.seed,
                                   static_cast<uint64_t>(s.step), s.dino.augment);
    const std::string where = "pretrain: non-finite DINO loss at step " + std::to_string(s.step);
    Tensor teacher;
    Tape<float> tape;
    VarMap<float> vars = Bind(tape, s.base);
    const VarMap<float> trainable = Bind(tape, s.student, [](const std::string&) { return true; });
    for (const auto& [name, v] : trainable) vars.emplace(name, v);
    Var<float> loss;
    try {
      teacher = TeacherLogits(s, views);
      Var<float> logits = DinoLogits(tape, s.vit, s.lora, vars, tape.Leaf(views));
      loss = DinoLoss(tape, logits, teacher, s.center, s.dino.tau_student, s.dino.tau_teacher);
    } catch (const NumericError& e) {
      throw NumericError(where + " (" + e.what() + ")");
    }
    const double loss_value = loss.value().data[0];
    if (!std::isfinite(loss_value)) throw NumericError(where);
    tape.Backward(loss);
    s.optimizer.Step(s.student, CollectGrads(tape, trainable));
    EmaUpdate(s.teacher, s.student, s.dino.teacher_momentum);
    UpdateCenter(s.center, teacher, s.dino.center_momentum);
    ++s.step;
    if (observer) observer(s, StepInfo{s.step, loss_value});
  }
}

void SaveDinoCheckpoint(const std::filesystem::path& dir, const DinoState& s) {
  Params all = s.base;
  Merge(all, s.student);
  Merge(all, WithPrefix(s.teacher, kTeacherPrefix));
  all.emplace(kCenterName, s.center);
  Merge(all, WithPrefix(s.optimizer.first_moments(), kFirstMomentPrefix));
  Merge(all, WithPrefix(s.optimizer.second_moments(), kSecondMomentPrefix));
  const Json config{{"kind", "dino"},
                    {"vit", ToJson(s.vit)},
                    {"lora", ToJson(s.lora)},
                    {"dino", ToJson(s.dino)},
                    {"seed", s.seed},
                    {"step", s.step},
                    {"optimizer_step", s.optimizer.step()}};
  SaveCheckpoint(dir, config, all);
}

DinoState LoadDinoCheckpoint(const std::filesystem::path& dir) {
  Checkpoint ckpt = LoadCheckpoint(dir);
  const Json& c = ckpt.config;
  if (!c.contains("kind") || c.at("kind") != "dino") {
    throw ValidationError(dir.string() + ": not a pretraining checkpoint");
  }
  DinoState s;
  s.vit = ViTConfigFromJson(c.at("vit"));
  s.lora = LoRAConfigFromJson(c.at("lora"));
  s.dino = DinoConfigFromJson(c.at("dino"));
  s.seed = GetField<uint64_t>(c, "seed", "model.json.config");
  s.step = GetField<int64_t>(c, "step", "model.json.config");
  s.base = Subset(ckpt.params, "vit.", "vit.");
  s.student = Subset(ckpt.params, "lora.", "lora.");
  Merge(s.student, Subset(ckpt.params, "head.", "head."));
  s.teacher = Subset(ckpt.params, kTeacherPrefix);
  auto center = ckpt.params.find(kCenterName);
  if (center == ckpt.params.end()) throw ValidationError("model.json: missing " + std::string(kCenterName));
  s.center = center->second;
  s.optimizer = AdamW(s.dino.optim);
  s.optimizer.Restore(GetField<int64_t>(c, "optimizer_step", "model.json.config"),
                      Subset(ckpt.params, kFirstMomentPrefix),
                      Subset(ckpt.params, kSecondMomentPrefix));
  return s;
}

Encoder LoadEncoder(const std::filesystem::path& dir) {
  return LoadDinoCheckpoint(dir).StudentEncoder();
}

template Var<float> DinoHead(const VarMap<float>&, Var<float>);
template Var<double> DinoHead(const VarMap<double>&, Var<double>);
template Var<float> DinoLogits(Tape<float>&, const ViTConfig&, const LoRAConfig&,
                               const VarMap<float>&, Var<float>);
template Var<double> DinoLogits(Tape<double>&, const ViTConfig&, const LoRAConfig&,
                                const VarMap<double>&, Var<double>);
template Var<float> DinoLoss(Tape<float>&, Var<float>, const Tensor&, const Tensor&, double,
                             double);
template Var<double> DinoLoss(Tape<double>&, Var<double>, const BasicTensor<double>&,
                              const BasicTensor<double>&, double, double);

}  // namespace frostmil::nn
