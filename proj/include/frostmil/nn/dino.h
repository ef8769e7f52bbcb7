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

#ifndef FROSTMIL_NN_DINO_H_
#define FROSTMIL_NN_DINO_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "frostmil/nn/augment.h"
#include "frostmil/nn/optim.h"
#include "frostmil/nn/vit.h"

namespace frostmil::nn {

struct DinoConfig {
  int out_dim = 64;       // K
  int head_hidden = 64;
  double tau_student = 0.1;
  double tau_teacher = 0.04;
  double center_momentum = 0.9;
  double teacher_momentum = 0.9995;
  int batch = 16;
  AdamWConfig optim{5e-4, 0.9, 0.999, 1e-8, 0.04};
  AugmentConfig augment;

  void Validate() const;
};

Json ToJson(const DinoConfig& config);
DinoConfig DinoConfigFromJson(const Json& j);

/// Student and teacher share the frozen base; only lora.* and head.* exist
/// in two copies.
struct DinoState {
  ViTConfig vit;
  LoRAConfig lora;
  DinoConfig dino;
  uint64_t seed = 0;
  Params base;
  Params student;
  Params teacher;
  Tensor center;
  AdamW optimizer;
  int64_t step = 0;

  Encoder StudentEncoder() const;
  Encoder TeacherEncoder() const;
};

DinoState InitDino(const ViTConfig& vit, const LoRAConfig& lora,
                   const DinoConfig& dino, uint64_t seed);

/// head.fc{1,2,3}: D -> hidden -> hidden -> K with GELU between layers.
Params InitDinoHead(int in_dim, const DinoConfig& config, uint64_t seed);

template <typename T>
Var<T> DinoHead(const VarMap<T>& params, Var<T> x);

/// [2B, D+...] tokens -> [2B, K] logits from the CLS token.
template <typename T>
Var<T> DinoLogits(Tape<T>& tape, const ViTConfig& vit, const LoRAConfig& lora,
                  const VarMap<T>& params, Var<T> views);

/// Rows [0, B) are view a and [B, 2B) view b. Student row i is matched to the
/// teacher row of the other view; the loss is averaged over all 2B pairings.
template <typename T>
Var<T> DinoLoss(Tape<T>& tape, Var<T> student_logits,
                const BasicTensor<T>& teacher_logits,
                const BasicTensor<T>& center, double tau_student,
                double tau_teacher);

/// theta_t <- m * theta_t + (1 - m) * theta_s for every teacher entry.
void EmaUpdate(Params& teacher, const Params& student, double momentum);
/// c <- cm * c + (1 - cm) * mean over rows of teacher logits.
void UpdateCenter(Tensor& center, const Tensor& teacher_logits,
                  double momentum);

/// Two augmented views per sampled patch: [2B, 3, N, N].
Tensor MakeViews(const std::vector<Tensor>& patches,
                 const std::vector<size_t>& indices, uint64_t seed,
                 uint64_t stream, const AugmentConfig& augment);

/// Patch indices for a training step; a fresh permutation per pass.
std::vector<size_t> BatchIndices(size_t n_patches, int batch, uint64_t seed,
                                 int64_t step);

/// DINO loss of the current state on a fixed set of views (no update).
double ProbeLoss(const DinoState& state, const Tensor& views);

struct StepInfo {
  int64_t step = 0;  // number of completed steps
  double loss = 0.0;
};
using StepObserver = std::function<void(const DinoState&, const StepInfo&)>;

/// Runs `steps` optimization steps from state.step. Batches depend only on
/// (seed, step), so resuming from a checkpoint reproduces the same run.
void Pretrain(DinoState& state, const std::vector<Tensor>& patches, int steps,
              const StepObserver& observer = nullptr);

void SaveDinoCheckpoint(const std::filesystem::path& dir,
                        const DinoState& state);
DinoState LoadDinoCheckpoint(const std::filesystem::path& dir);

/// Encoder (base + student adapters) from a DINO checkpoint directory.
Encoder LoadEncoder(const std::filesystem::path& dir);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_DINO_H_
