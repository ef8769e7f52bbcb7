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

#ifndef FROSTMIL_MIL_TRAIN_H_
#define FROSTMIL_MIL_TRAIN_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "frostmil/mil/abmil.h"
#include "frostmil/mil/bags.h"

namespace frostmil::mil {

/// Tracks the best validation loss; stops after `patience` epochs in a row
/// without strict improvement.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience);

  /// Records the loss of epoch `epoch` (1-based). Returns true if it is a
  /// new best.
  bool Update(int epoch, double val_loss);
  bool ShouldStop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  int patience_;
  int stale_ = 0;
  int best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct TrainConfig {
  double lr = 2e-4;
  double weight_decay = 1e-5;
  int patience = 10;
  int max_epochs = 200;
  int hidden = 16;
  uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  AbmilConfig config;
  nn::Params params;  // best-validation snapshot
  std::vector<EpochLog> log;
  int best_epoch = 0;  // 0 = initial params
  double best_val_loss = std::numeric_limits<double>::infinity();
};

using EpochObserver = std::function<void(const EpochLog&, const nn::Params&)>;

/// Mean cross-entropy over bags.
double MeanLoss(const nn::Params& params, const std::vector<Bag>& bags);

/// Adam with decoupled weight decay, one bag per step, epoch order shuffled
/// from (seed, epoch).
TrainResult TrainAbmil(const std::vector<Bag>& train, const std::vector<Bag>& val,
                       int classes, const TrainConfig& config,
                       const EpochObserver& observer = nullptr);

struct Prediction {
  std::string bag_id;
  int label = 0;
  std::vector<float> probs;
  std::vector<float> attention;
};

std::vector<Prediction> Predict(const nn::Params& params, const std::vector<Bag>& bags);

}  // namespace frostmil::mil

#endif  // FROSTMIL_MIL_TRAIN_H_
