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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"
#include "support/fixtures.h"
#include <numbers>

namespace deepoint::train {
namespace {

namespace fs = std::filesystem;
using geometry::UnitVec3;

TEST_CASE("loss: perfect prediction gives near-zero loss") {
  const UnitVec3 g = UnitVec3::Normalize({0.3, -0.2, 0.9});
  const LossValue v = PointingLoss({30, -30}, 4.0 * g.vec(), true, g, 1.0);
  CHECK(v.ce < 1e-12);
  // The clamp bounds the smallest reachable angle at acos(1 - 1e-7).
  CHECK(v.direction <= std::acos(kCosClamp) + 1e-12);
  CHECK(v.d_raw.isZero(0.0));
  CHECK(v.total >= 0.0);
}

TEST_CASE("loss: non-pointing frames ignore the direction") {
  const LossValue a = PointingLoss({0.3, 0.1}, {1, 2, 3}, false, std::nullopt, 1.0);
  const LossValue b = PointingLoss({0.3, 0.1}, {-7, 0, 0.5}, false, std::nullopt, 1.0);
  CHECK(a.total == b.total);
  CHECK(a.d_raw.isZero(0.0));
  CHECK(a.direction == 0.0);
  CHECK_THROWS_AS(PointingLoss({0, 0}, {1, 0, 0}, true, std::nullopt, 1.0), Error);
}

TEST_CASE("loss: gradients match central differences") {
  Rng rng(31);
  for (LossMode mode : {LossMode::kArccos, LossMode::kOneMinusCos}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Vector2d l(Normal(rng, 0, 2), Normal(rng, 0, 2));
      const Eigen::Vector3d r(Normal(rng, 0, 1), Normal(rng, 0, 1), Normal(rng, 0, 1));
      const UnitVec3 g = UnitVec3::Normalize(
          {Normal(rng, 0, 1), Normal(rng, 0, 1), Normal(rng, 0, 1)});
      const bool pointing = trial % 3 != 0;
      const std::optional<UnitVec3> t = pointing ? std::optional(g) : std::nullopt;
      const double lambda = 0.7;
      const LossValue v = PointingLoss(l, r, pointing, t, lambda, mode);
      const double h = 1e-6;
      for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d up = l, dn = l;
        up[k] += h;
        dn[k] -= h;
        const double num = (PointingLoss(up, r, pointing, t, lambda, mode).total -
                            PointingLoss(dn, r, pointing, t, lambda, mode).total) / (2 * h);
        CHECK(std::abs(num - v.d_logits[k]) < 1e-4 * std::max(1.0, std::abs(num)));
      }
      for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d up = r, dn = r;
        up[k] += h;
        dn[k] -= h;
        const double num = (PointingLoss(l, up, pointing, t, lambda, mode).total -
                            PointingLoss(l, dn, pointing, t, lambda, mode).total) / (2 * h);
        CHECK(std::abs(num - v.d_raw[k]) < 1e-4 * std::max(1.0, std::abs(num)));
      }
      CHECK(v.direction >= 0.0);
      CHECK(v.direction <= std::numbers::pi);
    }
  }
}

std::vector<Sample> ClassMix(int n, double pointing_fraction) {
  std::vector<Sample> s(n);
  for (int i = 0; i < n; ++i) s[i].pointing = i < static_cast<int>(n * pointing_fraction);
  return s;
}

TEST_CASE("balanced batches: class fraction 0.5 despite a 27.5% pointing pool") {
  const auto samples = ClassMix(10000, 0.275);
  BalancedSampler sampler(samples, 7);
  long pos = 0, total = 0;
  for (int b = 0; b < 1000; ++b) {
    for (int i : sampler.NextBatch(64)) {
      pos += samples[i].pointing;
      ++total;
    }
  }
  // Binomial standard error over 64000 draws is 0.002.
  CHECK(std::abs(static_cast<double>(pos) / total - 0.5) < 0.05);

  BalancedSampler a(samples, 9), b(samples, 9);
  for (int k = 0; k < 20; ++k) CHECK(a.NextBatch(16) == b.NextBatch(16));

  BalancedSampler one(samples, 11);
  long p1 = 0;
  for (int k = 0; k < 10000; ++k) p1 += samples[one.NextBatch(1)[0]].pointing;
  CHECK(std::abs(p1 / 10000.0 - 0.5) < 0.02);

  try {
    BalancedSampler bad(ClassMix(50, 0.0), 1);
    FAIL("expected SingleClassDataset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClassDataset);
  }
}

TEST_CASE("train config: validation and json") {
  TrainConfig c = TrainConfig::Toy();
  c.loss_mode = LossMode::kOneMinusCos;
  const TrainConfig r = TrainConfig::FromJson(c.ToJson());
  CHECK(r.ToJson() == c.ToJson());
  CHECK(TrainConfig::FromJson(Json::object()).learning_rate == 1e-4);
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = TrainConfig::Toy();
  c.loss_weight = -1;
  CHECK_THROWS_AS(c.Validate(), Error);
}

struct SmallRun {
  anno::Dataset dataset = testing::SmallDataset(1, 2, 40.0, 5);
  PreparedData data;
  SmallRun() {
    DataOptions o;
    o.features.embed_dim = 16;
    data = PreparedData::Build(dataset, o);
  }
  static model::ModelConfig Model() {
    model::ModelConfig m;
    m.embed_dim = 16;
    m.features.embed_dim = 16;
    m.heads = 2;
    m.joint_layers = m.temporal_layers = 1;
    m.window = 3;
    return m;
  }
  static TrainConfig Train() {
    TrainConfig t = TrainConfig::Toy();
    t.samples_per_epoch = 320;
    t.max_epochs = 3;
    t.seed = 3;
    return t;
  }
};

TEST_CASE("prepared data: sample bookkeeping") {
  SmallRun run;
  const auto& tr = run.data.split(SplitPart::kTrain);
  CHECK(tr.frame_pairs > 0);
  const int cams = static_cast<int>(run.dataset.sessions[0].session.tracks.size());
  CHECK(static_cast<long>(tr.samples.size()) + tr.skipped_few_joints ==
        (tr.frame_pairs - tr.skipped_missing_direction) * cams);
  for (const auto& s : tr.samples) {
    const auto& f = run.data.sequences()[s.sequence].frames[s.frame];
    CHECK(std::count(f.mask.begin(), f.mask.end(), true) >= 5);
    if (s.pointing) CHECK(std::abs(s.direction.vec().norm() - 1) < 1e-9);
  }
  const auto w = run.data.Window({0, 1, false, {}}, 4);
  CHECK(w[0] == nullptr);
  CHECK(w[1] == nullptr);
  CHECK(w[3] == &run.data.sequences()[0].frames[1]);
}

TEST_CASE("full loss gradient agrees with finite differences") {
  SmallRun run;
  model::ModelConfig mc = SmallRun::Model();
  mc.embed_dim = mc.features.embed_dim = 8;
  model::DeePointModel m(mc);
  std::vector<Sample> batch;
  const auto& tr = run.data.split(SplitPart::kTrain).samples;
  for (std::size_t i = 0; i < tr.size() && batch.size() < 6; i += tr.size() / 7) {
    batch.push_back(tr[i]);
  }
  for (const auto& s : tr) {
    if (s.pointing) {
      batch.push_back(s);
      break;
    }
  }
  const auto r = testing::CheckFullLossGradient(m, run.data, batch, 100, 1e-4, 41);
  CHECK(r.checked == 100);
  CHECK(r.worst_relative < 1e-4);
}

TEST_CASE("train: log, model selection, checkpoint and determinism") {
  SmallRun run;
  const fs::path dir = fs::temp_directory_path() / "deepoint_trainer_test";
  fs::remove_all(dir);
  const auto a = Train(run.data, SmallRun::Model(), SmallRun::Train(),
                       {dir / "a.jsonl", dir / "a_best.json"});
  const auto b = Train(run.data, SmallRun::Model(), SmallRun::Train(),
                       {dir / "b.jsonl", dir / "b_best.json"});
  REQUIRE(a.log.size() == 3);
  for (const auto& e : a.log) {
    CHECK(a.best_val.angular_error <= e.val.angular_error);
    CHECK(std::isfinite(e.loss));
    CHECK(e.steps == 20);
  }
  CHECK(a.log[a.best_epoch - 1].val.angular_error == a.best_val.angular_error);
  CHECK(a.stop_reason == "max_epochs");

  std::ifstream la(dir / "a.jsonl"), lb(dir / "b.jsonl");
  std::string line_a, line_b;
  int lines = 0;
  while (std::getline(la, line_a)) {
    REQUIRE(std::getline(lb, line_b));
    const Json ja = Json::parse(line_a), jb = Json::parse(line_b);
    CHECK(ja["loss"] == jb["loss"]);
    CHECK(ja["val"] == jb["val"]);
    CHECK(ja["epoch"] == ++lines);
  }
  CHECK(lines == 3);

  Json extra;
  const auto loaded = model::LoadCheckpoint(dir / "a_best.json", &extra);
  CHECK(extra["epoch"] == a.best_epoch);
  CHECK(loaded->ToJson()["parameters"] == a.best->ToJson()["parameters"]);
  CHECK(a.best->ToJson() == b.best->ToJson());
  const auto v = EvaluateSamples(*loaded, run.data, run.data.split(SplitPart::kVal).samples);
  CHECK(v.angular_error == a.best_val.angular_error);
  fs::remove_all(dir);
}

TEST_CASE("train: early stop after the patience window") {
  SmallRun run;
  TrainConfig t = SmallRun::Train();
  t.max_epochs = 40;
  t.patience = 1;
  t.learning_rate = 1e-9;  // effectively frozen: the first epoch stays best
  const auto r = Train(run.data, SmallRun::Model(), t);
  CHECK(r.stop_reason == "early_stop");
  CHECK(r.log.size() < 40);
}

TEST_CASE("train: non-finite loss aborts") {
  SmallRun run;
  for (auto& seq : run.data.mutable_sequences()) {
    for (auto& f : seq.frames) {
      for (int j = 0; j < tokenizer::kNumJoints; ++j) {
        if (f.mask[j]) f.joints(j, 0) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  try {
    Train(run.data, SmallRun::Model(), SmallRun::Train());
    FAIL("expected NonFiniteLoss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFiniteLoss);
  }
}

TEST_CASE("lambda = 0 control: detection learns, direction stays near 90 deg") {
  const auto ds = testing::SmallDataset(1, 3, 60.0, 9);
  DataOptions o;
  o.features.embed_dim = 32;
  const auto data = PreparedData::Build(ds, o);
  const auto& val = data.split(SplitPart::kVal).samples;
  const model::ModelConfig mc = model::ModelConfig::Toy();
  TrainConfig t = TrainConfig::Toy();
  t.max_epochs = 4;
  t.samples_per_epoch = 2000;
  const auto untrained = EvaluateSamples(model::DeePointModel(mc), data, val);

  t.loss_weight = 0.0;
  const auto off = Train(data, mc, t);
  for (const auto& e : off.log) CHECK(e.val.angular_error > 75.0);
  CHECK(off.log.back().val.prf.f1 > untrained.prf.f1 + 0.3);

  t.loss_weight = 1.0;
  const auto on = Train(data, mc, t);
  CHECK(on.best_val.angular_error < 45.0);
}

}  // namespace
}  // namespace deepoint::train
