// Copyright 2026 The deepoint Authors. All Rights Reserved.
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

#ifndef DEEPOINT_TRAIN_TRAINER_H_
#define DEEPOINT_TRAIN_TRAINER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/common/json_io.h"
#include "deepoint/common/random.h"
#include "deepoint/eval/metrics.h"
#include "deepoint/model/model.h"
#include "deepoint/train/data.h"

namespace deepoint::train {

enum class LossMode { kArccos, kOneMinusCos };
const char* LossModeName(LossMode m);  // "arccos", "one_minus_cos"
LossMode LossModeFromName(const std::string& name);

// Clamp used by the arccos loss; the gradient is zero outside it.
inline constexpr double kCosClamp = 1.0 - 1e-7;

struct TrainConfig {
  double learning_rate = 1e-4;
  int batch_size = 64;
  double loss_weight = 1.0;  // lambda; direction term in radians
  LossMode loss_mode = LossMode::kArccos;
  int max_epochs = 100;
  int patience = 5;  // epochs without validation improvement
  uint64_t seed = 1;
  double clip_norm = 0.0;
  long samples_per_epoch = 0;  // 0: number of labelled train frames
  double time_budget_s = 0.0;  // 0: unlimited; checked between epochs
  int workers = 1;             // evaluation only; updates are sequential

  void Validate() const;  // throws kInvalidArgument
  Json ToJson() const;
  static TrainConfig FromJson(const Json& j);  // missing keys keep defaults
  static TrainConfig Toy();
};

struct LossValue {
  double ce = 0.0;
  double direction = 0.0;  // radians (arccos) or 1 - cos
  double total = 0.0;
  Eigen::Vector2d d_logits = Eigen::Vector2d::Zero();
  Eigen::Vector3d d_raw = Eigen::Vector3d::Zero();
};

// Cross entropy over (pointing, not pointing) logits plus lambda times the
// direction term on pointing frames. Throws kMissingDirection when a
// pointing frame has no target.
LossValue PointingLoss(const Eigen::Vector2d& logits, const Eigen::Vector3d& raw,
                       bool pointing, const std::optional<geometry::UnitVec3>& target,
                       double lambda, LossMode mode = LossMode::kArccos);

// Each draw picks a class with probability 1/2, then a sample of that class
// uniformly, with replacement.
class BalancedSampler {
 public:
  BalancedSampler(const std::vector<Sample>& samples, uint64_t seed);
  std::vector<int> NextBatch(int batch_size);

 private:
  std::vector<int> pools_[2];  // [0] not pointing, [1] pointing
  Rng rng_;
};

struct ValMetrics {
  double angular_error = 0.0;  // degrees, pointing samples
  eval::Prf prf;
  long samples = 0;
  Json ToJson() const;
};

ValMetrics EvaluateSamples(const model::DeePointModel& model, const PreparedData& data,
                           const std::vector<Sample>& samples, int workers = 1);

struct EpochRecord {
  int epoch = 0;
  long steps = 0;
  double loss = 0.0, ce = 0.0, direction = 0.0;
  double grad_norm = 0.0;
  ValMetrics val;
  bool improved = false;
  double seconds = 0.0;  // wall clock since training start
  Json ToJson() const;
};

struct TrainOutputs {
  std::filesystem::path log_path;         // JSONL, one record per epoch
  std::filesystem::path checkpoint_path;  // best checkpoint
};

struct TrainResult {
  std::unique_ptr<model::DeePointModel> best;
  int best_epoch = 0;
  ValMetrics best_val;
  std::vector<EpochRecord> log;
  std::string stop_reason;  // "max_epochs", "early_stop", "time_budget"
};

// Trains from scratch and returns the epoch with the lowest validation
// angular error. On a non-finite loss the best checkpoint so far is written
// and kNonFiniteLoss is thrown.
TrainResult Train(const PreparedData& data, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainOutputs& outputs = {});

}  // namespace deepoint::train

#endif  // DEEPOINT_TRAIN_TRAINER_H_
