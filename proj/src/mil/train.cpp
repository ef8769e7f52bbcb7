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

#include "frostmil/mil/train.h"

#include <cmath>
#include <numeric>

#include "frostmil/nn/ops.h"
#include "frostmil/nn/optim.h"

namespace frostmil::mil {

EarlyStopper::EarlyStopper(int patience) : patience_(patience) {
  if (patience < 1) throw ValidationError("train.patience must be >= 1");
}

bool EarlyStopper::Update(int epoch, double val_loss) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

namespace {

double BagLoss(const nn::Params& params, const Bag& bag) {
  nn::Tape<float> tape;
  const auto vars = nn::Bind(tape, params);
  const auto g = ForwardAbmil(vars, tape.Leaf(bag.features));
  const int label[1] = {bag.label};
  return nn::CrossEntropy(g.logits, std::span<const int>(label)).value().data[0];
}

void CheckBags(const std::vector<Bag>& bags, int classes, const char* split) {
  if (bags.empty()) throw ValidationError(std::string("train: ") + split + " split is empty");
  for (const auto& b : bags) {
    if (b.label < 0 || b.label >= classes) {
      throw ValidationError("bag " + b.bag_id + ": label " + std::to_string(b.label) +
                            " outside [0, " + std::to_string(classes) + ")");
    }
  }
}

}  // namespace

double MeanLoss(const nn::Params& params, const std::vector<Bag>& bags) {
  double total = 0.0;
  for (const auto& b : bags) total += BagLoss(params, b);
  return bags.empty() ? 0.0 : total / static_cast<double>(bags.size());
}

TrainResult TrainAbmil(const std::vector<Bag>& train, const std::vector<Bag>& val, int classes,
                       const TrainConfig& config, const EpochObserver& observer) {
  CheckBags(train, classes, "train");
  CheckBags(val, classes, "val");
  if (config.max_epochs < 0) throw ValidationError("train.max_epochs must be >= 0");
  TrainResult result;
  result.config = AbmilConfig{train.front().features.dim(1), config.hidden, classes};
  nn::Params params = InitAbmil(result.config, config.seed);
  result.params = params;
  if (config.max_epochs == 0) return result;

  nn::AdamW optimizer(nn::AdamWConfig{config.lr, 0.9, 0.999, 1e-8, config.weight_decay});
  EarlyStopper stopper(config.patience);
  std::vector<size_t> order(train.size());
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng = Rng::Derive(config.seed, {0x45504F43, static_cast<uint64_t>(epoch)});
    rng.Shuffle(order);
    double train_loss = 0.0;
    for (size_t idx : order) {
      const Bag& bag = train[idx];
      nn::Tape<float> tape;
      const auto vars = nn::Bind(tape, params, [](const std::string&) { return true; });
      const auto g = ForwardAbmil(vars, tape.Leaf(bag.features));
      const int label[1] = {bag.label};
      nn::Var<float> loss = nn::CrossEntropy(g.logits, std::span<const int>(label));
      const double value = loss.value().data[0];
      if (!std::isfinite(value)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                           ", bag " + bag.bag_id);
      }
      train_loss += value;
      tape.Backward(loss);
      optimizer.Step(params, nn::CollectGrads(tape, vars));
    }
    EpochLog entry{epoch, train_loss / static_cast<double>(train.size()), MeanLoss(params, val)};
    if (!std::isfinite(entry.val_loss)) {
      throw NumericError("train: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    result.log.push_back(entry);
    if (stopper.Update(epoch, entry.val_loss)) {
      result.params = params;
      result.best_epoch = epoch;
      result.best_val_loss = entry.val_loss;
    }
    if (observer) observer(entry, params);
    if (stopper.ShouldStop()) break;
  }
  return result;
}

std::vector<Prediction> Predict(const nn::Params& params, const std::vector<Bag>& bags) {
  std::vector<Prediction> out;
  out.reserve(bags.size());
  for (const auto& bag : bags) {
    AbmilOutput o = RunAbmil(params, bag.features);
    out.push_back(Prediction{bag.bag_id, bag.label, std::move(o.probs), std::move(o.attention)});
  }
  return out;
}

}  // namespace frostmil::mil
