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

#include "deepoint/train/trainer.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"

namespace deepoint::train {

using model::DeePointModel;
using nn::Mat;

const char* LossModeName(LossMode m) {
  return m == LossMode::kArccos ? "arccos" : "one_minus_cos";
}

LossMode LossModeFromName(const std::string& name) {
  if (name == "arccos") return LossMode::kArccos;
  if (name == "one_minus_cos") return LossMode::kOneMinusCos;
  throw Error(ErrorCode::kInvalidArgument, "unknown loss mode '" + name + "'");
}

void TrainConfig::Validate() const {
  auto req = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  req(learning_rate > 0.0, "learning_rate must be positive");
  req(batch_size >= 1, "batch_size must be >= 1");
  req(loss_weight >= 0.0, "loss_weight must be >= 0");
  req(max_epochs >= 1, "max_epochs must be >= 1");
  req(patience >= 1, "patience must be >= 1");
  req(clip_norm >= 0.0, "clip_norm must be >= 0");
  req(samples_per_epoch >= 0, "samples_per_epoch must be >= 0");
  req(time_budget_s >= 0.0, "time_budget_s must be >= 0");
  req(workers >= 1, "workers must be >= 1");
}

Json TrainConfig::ToJson() const {
  return {{"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"loss_weight", loss_weight},     {"loss_mode", LossModeName(loss_mode)},
          {"max_epochs", max_epochs},       {"patience", patience},
          {"seed", seed},                   {"clip_norm", clip_norm},
          {"samples_per_epoch", samples_per_epoch},
          {"time_budget_s", time_budget_s}, {"workers", workers}};
}

TrainConfig TrainConfig::FromJson(const Json& j) {
  TrainConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.loss_weight = j.value("loss_weight", c.loss_weight);
    c.loss_mode = LossModeFromName(j.value("loss_mode", std::string(LossModeName(c.loss_mode))));
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    c.clip_norm = j.value("clip_norm", c.clip_norm);
    c.samples_per_epoch = j.value("samples_per_epoch", c.samples_per_epoch);
    c.time_budget_s = j.value("time_budget_s", c.time_budget_s);
    c.workers = j.value("workers", c.workers);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("train config: ") + e.what());
  }
  c.Validate();
  return c;
}

TrainConfig TrainConfig::Toy() {
  TrainConfig c;
  c.learning_rate = 1e-3;
  c.batch_size = 16;
  c.clip_norm = 5.0;
  return c;
}

LossValue PointingLoss(const Eigen::Vector2d& logits, const Eigen::Vector3d& raw,
                       bool pointing, const std::optional<geometry::UnitVec3>& target,
                       double lambda, LossMode mode) {
  LossValue v;
  const int y = pointing ? 0 : 1;
  const double m = logits.maxCoeff();
  const Eigen::Vector2d e = (logits.array() - m).exp();
  const double z = e.sum();
  v.ce = m + std::log(z) - logits[y];
  v.d_logits = e / z;
  v.d_logits[y] -= 1.0;
  if (pointing) {
    if (!target) throw Error(ErrorCode::kMissingDirection, "pointing frame without direction");
    const double n = raw.norm();
    const Eigen::Vector3d& g = target->vec();
    if (!(n >= 1e-12)) {
      // Fallback axis; no useful gradient direction exists.
      const double c = std::clamp(g.z(), -kCosClamp, kCosClamp);
      v.direction = mode == LossMode::kArccos ? std::acos(c) : 1.0 - g.z();
    } else {
      const double c = raw.dot(g) / n;
      double dl_dc;
      if (mode == LossMode::kArccos) {
        const double cc = std::clamp(c, -kCosClamp, kCosClamp);
        v.direction = std::acos(cc);
        dl_dc = std::abs(c) < kCosClamp ? -1.0 / std::sqrt(1.0 - c * c) : 0.0;
      } else {
        v.direction = 1.0 - c;
        dl_dc = -1.0;
      }
      v.d_raw = lambda * dl_dc * (g - c * raw / n) / n;
    }
  }
  v.total = v.ce + lambda * v.direction;
  return v;
}

BalancedSampler::BalancedSampler(const std::vector<Sample>& samples, uint64_t seed)
    : rng_(DeriveSeed(seed, "balanced_sampler")) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pools_[samples[i].pointing ? 1 : 0].push_back(static_cast<int>(i));
  }
  if (pools_[0].empty() || pools_[1].empty()) {
    throw Error(ErrorCode::kSingleClassDataset,
                pools_[1].empty() ? "no pointing samples" : "no non-pointing samples");
  }
}

std::vector<int> BalancedSampler::NextBatch(int batch_size) {
  std::vector<int> out(batch_size);
  for (int& i : out) {
    const auto& pool = pools_[Uniform(rng_, 0.0, 1.0) < 0.5 ? 1 : 0];
    const auto k = static_cast<std::size_t>(Uniform(rng_, 0.0, 1.0) * pool.size());
    i = pool[std::min(k, pool.size() - 1)];
  }
  return out;
}

Json ValMetrics::ToJson() const {
  return {{"angular_error", angular_error}, {"precision", prf.precision},
          {"recall", prf.recall},           {"f1", prf.f1},
          {"samples", samples}};
}

ValMetrics EvaluateSamples(const DeePointModel& model, const PreparedData& data,
                           const std::vector<Sample>& samples, int workers) {
  const auto preds = PredictSamples(model, data, samples, workers);
  std::vector<double> p;
  std::vector<bool> gt;
  std::vector<geometry::UnitVec3> pred_dir, gt_dir;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    p.push_back(preds[i].p);
    gt.push_back(samples[i].pointing);
    if (samples[i].pointing) {
      pred_dir.push_back(preds[i].nu);
      gt_dir.push_back(samples[i].direction);
    }
  }
  ValMetrics m;
  m.samples = static_cast<long>(samples.size());
  m.prf = eval::FramePrf(p, gt);
  m.angular_error = eval::MeanAngularError(pred_dir, gt_dir);
  return m;
}

Json EpochRecord::ToJson() const {
  return {{"epoch", epoch}, {"steps", steps},         {"loss", loss},
          {"ce", ce},       {"direction", direction}, {"grad_norm", grad_norm},
          {"val", val.ToJson()}, {"improved", improved}, {"seconds", seconds}};
}

namespace {

struct StepStats {
  double loss = 0, ce = 0, dir = 0, grad_norm = 0;
};

StepStats TrainStep(DeePointModel& model, const PreparedData& data,
                    const std::vector<Sample>& samples, const std::vector<int>& batch,
                    const TrainConfig& cfg, nn::Adam& adam) {
  const int w = model.config().window_size();
  model::BatchInput in;
  in.batch_size = static_cast<int>(batch.size());
  std::map<const tokenizer::FrameFeatures*, int> slot;
  for (int b : batch) {
    for (const auto* f : data.Window(samples[b], w)) {
      if (f == nullptr) {
        in.windows.push_back(-1);
        continue;
      }
      auto [it, fresh] = slot.emplace(f, static_cast<int>(in.frames.size()));
      if (fresh) in.frames.push_back(f);
      in.windows.push_back(it->second);
    }
  }
  nn::Tape tape;
  const auto out = model.Forward(tape, in);
  const Mat& logits = tape.value(out.logits);
  const Mat& raw = tape.value(out.raw);
  Mat dl(in.batch_size, 2), dr(in.batch_size, 3);
  StepStats s;
  const double inv = 1.0 / in.batch_size;
  for (int i = 0; i < in.batch_size; ++i) {
    const Sample& smp = samples[batch[i]];
    std::optional<geometry::UnitVec3> target;
    if (smp.pointing) target = smp.direction;
    const LossValue v = PointingLoss(logits.row(i).transpose(), raw.row(i).transpose(),
                                     smp.pointing, target, cfg.loss_weight, cfg.loss_mode);
    s.loss += v.total * inv;
    s.ce += v.ce * inv;
    s.dir += v.direction * inv;
    dl.row(i) = v.d_logits.transpose() * inv;
    dr.row(i) = v.d_raw.transpose() * inv;
  }
  if (!std::isfinite(s.loss)) return s;
  model.params().ZeroGrad();
  tape.Backward({{out.logits, dl}, {out.raw, dr}});
  s.grad_norm = adam.Step();
  return s;
}

}  // namespace

TrainResult Train(const PreparedData& data, const model::ModelConfig& model_config,
                  const TrainConfig& config, const TrainOutputs& outputs) {
  config.Validate();
  const auto& train = data.split(SplitPart::kTrain).samples;
  const auto& val = data.split(SplitPart::kVal).samples;
  if (train.empty() || val.empty()) {
    throw Error(ErrorCode::kEmptyInput, "train and validation splits must be nonempty");
  }
  BalancedSampler sampler(train, config.seed);
  model::ModelConfig mc = model_config;
  mc.features = data.options().features;
  mc.init_seed = DeriveSeed(config.seed, "model");
  auto model = std::make_unique<DeePointModel>(mc);
  nn::Adam adam(model->params(), {.learning_rate = config.learning_rate,
                                  .clip_norm = config.clip_norm});

  const long per_epoch = config.samples_per_epoch > 0
                             ? config.samples_per_epoch
                             : data.split(SplitPart::kTrain).frame_pairs;
  const long steps = std::max<long>(1, (per_epoch + config.batch_size - 1) / config.batch_size);

  std::ofstream log;
  if (!outputs.log_path.empty()) {
    if (outputs.log_path.has_parent_path()) {
      std::filesystem::create_directories(outputs.log_path.parent_path());
    }
    log.open(outputs.log_path);
    if (!log) throw Error(ErrorCode::kIoError, "cannot write " + outputs.log_path.string());
  }
  auto save = [&](const DeePointModel& m, const TrainResult& r) {
    if (outputs.checkpoint_path.empty()) return;
    SaveCheckpoint(outputs.checkpoint_path, m,
                   {{"epoch", r.best_epoch}, {"val", r.best_val.ToJson()},
                    {"train_config", config.ToJson()}});
  };

  TrainResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  int since_best = 0;
  result.stop_reason = "max_epochs";
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    for (long s = 0; s < steps; ++s) {
      const StepStats st = TrainStep(*model, data, train, sampler.NextBatch(config.batch_size),
                                     config, adam);
      if (!std::isfinite(st.loss) || !std::isfinite(st.grad_norm)) {
        if (result.best) save(*result.best, result);
        throw Error(ErrorCode::kNonFiniteLoss,
                    "epoch " + std::to_string(epoch) + " step " + std::to_string(s) +
                        (result.best ? "; best checkpoint from epoch " +
                                           std::to_string(result.best_epoch) + " kept"
                                     : "; no checkpoint yet"));
      }
      rec.loss += st.loss / steps;
      rec.ce += st.ce / steps;
      rec.direction += st.dir / steps;
      rec.grad_norm += st.grad_norm / steps;
    }
    rec.steps = steps;
    rec.val = EvaluateSamples(*model, data, val, config.workers);
    rec.improved = !result.best || rec.val.angular_error < result.best_val.angular_error;
    rec.seconds = elapsed();
    if (rec.improved) {
      result.best = DeePointModel::FromJson(model->ToJson());
      result.best_epoch = epoch;
      result.best_val = rec.val;
      save(*result.best, result);
      since_best = 0;
    } else {
      ++since_best;
    }
    result.log.push_back(rec);
    if (log) log << rec.ToJson().dump() << "\n" << std::flush;
    if (since_best >= config.patience) {
      result.stop_reason = "early_stop";
      break;
    }
    if (config.time_budget_s > 0.0 && epoch < config.max_epochs &&
        rec.seconds * (epoch + 1.0) / epoch > config.time_budget_s) {
      result.stop_reason = "time_budget";
      break;
    }
  }
  return result;
}

}  // namespace deepoint::train
