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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <vector>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"
#include "deepoint/eval/ablation.h"
#include "deepoint/eval/evaluate.h"
#include "deepoint/eval/metrics.h"
#include "deepoint/geometry/geometry.h"
#include "support/fixtures.h"

namespace deepoint::eval {
namespace {

using geometry::UnitVec3;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

TEST_CASE("frame prf: worked examples") {
  const Prf perfect = FramePrf({0.9, 0.1, 0.7}, {true, false, true});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  const Prf half = FramePrf({1, 1, 0, 0}, {true, false, true, false});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == 0.5);

  const Prf none = FramePrf({0.1, 0.2}, {true, false});
  CHECK(none.precision == 0.0);
  CHECK(none.precision_undefined);
  CHECK(none.recall == 0.0);
  CHECK_FALSE(none.recall_undefined);

  // Decision rule is p >= threshold.
  CHECK(FramePrf({0.5}, {true}).tp == 1);
  CHECK(FramePrf({0.5}, {true}, 0.6).fn == 1);

  CHECK(CodeOf([] { FramePrf({}, {}); }) == ErrorCode::kEmptyInput);
  CHECK(CodeOf([] { FramePrf({0.1}, {true, false}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("frame prf: brute-force confusion matrix") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> p(n);
    std::vector<bool> gt(n);
    for (int i = 0; i < n; ++i) {
      p[i] = Uniform(rng, 0, 1);
      gt[i] = rng() % 2;
    }
    long m[2][2] = {{0, 0}, {0, 0}};  // [gt][pred]
    for (int i = 0; i < n; ++i) ++m[gt[i]][p[i] >= 0.5];
    const Prf r = FramePrf(p, gt);
    CHECK(r.tp == m[1][1]);
    CHECK(r.fp == m[0][1]);
    CHECK(r.fn == m[1][0]);
    CHECK(r.tn == m[0][0]);
    if (m[1][1] + m[0][1] > 0) {
      CHECK(r.precision == doctest::Approx(double(m[1][1]) / (m[1][1] + m[0][1])));
    }
    if (m[1][1] + m[1][0] > 0) {
      CHECK(r.recall == doctest::Approx(double(m[1][1]) / (m[1][1] + m[1][0])));
    }
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
    if (r.precision + r.recall > 0) {
      CHECK(r.f1 == doctest::Approx(2 * r.precision * r.recall / (r.precision + r.recall)));
    }
  }
}

anno::PointingInstance Inst(int s, int e) { return {0, s, e, "m"}; }

TEST_CASE("instance recall") {
  const std::vector<double> p = {0, 0.9, 0, 0, 0, 0, 0.6, 0, 0, 0};
  CHECK(InstanceRecall(p, {Inst(0, 2), Inst(5, 7)}) == 1.0);
  CHECK(InstanceRecall(p, {Inst(0, 2), Inst(3, 4), Inst(6, 6)}) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(CodeOf([&] { InstanceRecall(p, {}); }) == ErrorCode::kNoInstances);
  CHECK(CodeOf([&] { InstanceRecall(p, {Inst(8, 12)}); }) == ErrorCode::kInvalidArgument);

  // One hit per instance: frame recall 0.3, instance recall 1.
  std::vector<double> q(10, 0.0);
  std::vector<bool> gt(10, true);
  q[1] = q[5] = q[9] = 1.0;
  CHECK(FramePrf(q, gt).recall == doctest::Approx(0.3));
  CHECK(InstanceRecall(q, {Inst(0, 2), Inst(3, 5), Inst(6, 9)}) == 1.0);
}

TEST_CASE("instance recall is 1 whenever frame recall is 1") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 20 + static_cast<int>(rng() % 40);
    std::vector<bool> gt(n, false);
    std::vector<anno::PointingInstance> inst;
    for (int f = static_cast<int>(rng() % 5); f < n;) {
      const int len = 1 + static_cast<int>(rng() % 6);
      const int end = std::min(n - 1, f + len - 1);
      inst.push_back(Inst(f, end));
      for (int k = f; k <= end; ++k) gt[k] = true;
      f = end + 2 + static_cast<int>(rng() % 6);
    }
    if (inst.empty()) continue;
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = Uniform(rng, 0, 1);
    const Prf r = FramePrf(p, gt);
    if (r.recall == 1.0) CHECK(InstanceRecall(p, inst) == 1.0);
    for (int i = 0; i < n; ++i) p[i] = gt[i] ? Uniform(rng, 0.5, 1) : Uniform(rng, 0, 1);
    CHECK(FramePrf(p, gt).recall == 1.0);
    CHECK(InstanceRecall(p, inst) == 1.0);
  }
}

UnitVec3 RandomDir(Rng& rng) {
  return UnitVec3::Normalize({Normal(rng, 0, 1), Normal(rng, 0, 1), Normal(rng, 0, 1)});
}

TEST_CASE("mean angular error") {
  Rng rng(29);
  std::vector<UnitVec3> gt, fixed;
  for (int i = 0; i < 20000; ++i) gt.push_back(RandomDir(rng));
  CHECK(MeanAngularError(gt, gt) < 1e-6);
  fixed.assign(gt.size(), UnitVec3::Normalize({0.2, -0.5, 0.8}));
  // E[angle] between a fixed and a uniform direction is 90 degrees.
  CHECK(std::abs(MeanAngularError(fixed, gt) - 90.0) < 3.0);
  CHECK(CodeOf([] { MeanAngularError({}, {}); }) == ErrorCode::kNoEvaluableFrames);
  CHECK(FormatDeg(14.05) == "14.05");
  CHECK(FormatDeg(17.0801) == "17.08");
}

TEST_CASE("direction error map") {
  Rng rng(31);
  std::vector<UnitVec3> gt;
  std::vector<double> err;
  for (int i = 0; i < 5000; ++i) {
    gt.push_back(RandomDir(rng));
    err.push_back(Uniform(rng, 0, 60));
  }
  const auto map = DirectionErrorMap::Build(gt, err, 15.0);
  CHECK(map.yaw_bins() == 24);
  CHECK(map.pitch_bins() == 12);
  CHECK(map.total() == 5000);  // conservation
  double sum = 0;
  long count = 0;
  for (int i = 0; i < map.pitch_bins(); ++i) {
    for (int j = 0; j < map.yaw_bins(); ++j) {
      sum += map.bin(i, j).sum;
      count += map.bin(i, j).count;
    }
  }
  CHECK(count == 5000);
  CHECK(sum == doctest::Approx(std::accumulate(err.begin(), err.end(), 0.0)));

  const auto flat = DirectionErrorMap::Build(gt, std::vector<double>(gt.size(), 7.5));
  for (int i = 0; i < flat.pitch_bins(); ++i) {
    for (int j = 0; j < flat.yaw_bins(); ++j) {
      if (!flat.bin(i, j).empty()) CHECK(flat.bin(i, j).mean() == doctest::Approx(7.5));
    }
  }

  DirectionErrorMap one;
  one.Add(geometry::YawPitchToDir(40, -20), 12.0);
  CHECK(one.non_empty() == 1);
  CHECK(one.total() == 1);
  const Json j = one.ToJson();
  int nulls = 0, hits = 0;
  for (const auto& b : j["bins"]) {
    if (b["mean"].is_null()) {
      ++nulls;
    } else {
      ++hits;
      CHECK(b["mean"] == 12.0);
      CHECK(b["yaw"] == 37.5);
      CHECK(b["pitch"] == -22.5);
    }
  }
  CHECK(hits == 1);
  CHECK(nulls == 24 * 12 - 1);
  // Poles land in the first and last rows.
  DirectionErrorMap poles;
  poles.Add(UnitVec3::Normalize({0, 0, 1}), 1.0);
  poles.Add(UnitVec3::Normalize({0, 0, -1}), 1.0);
  CHECK(poles.non_empty() == 2);
}

TEST_CASE("baseline directions") {
  sim::Skeleton s{};
  for (auto& j : s) j = Eigen::Vector3d(0, 0, 1);
  s[sim::kNose] = {0, 0, 1.7};
  s[sim::kRightWrist] = {0.5, 0, 1.4};
  s[sim::kRightElbow] = {0.3, 0, 1.4};
  const auto sk = Skeleton3D::FromTruth(s);
  const UnitVec3 nose = BaselineDirection(sk, sim::Side::kRight, BaselineKind::kNoseHand);
  CHECK((nose.vec() - Eigen::Vector3d(0.5, 0, -0.3).normalized()).norm() < 1e-12);
  const UnitVec3 elbow = BaselineDirection(sk, sim::Side::kRight, BaselineKind::kElbowHand);
  CHECK((elbow.vec() - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);

  // Bent arm: forearm along +x, target up and ahead of the wrist.
  const Eigen::Vector3d target(1.5, 0.0, 1.4 + std::sqrt(3.0));
  const UnitVec3 truth = UnitVec3::Normalize(target - s[sim::kRightWrist]);
  CHECK(geometry::AngularErrorDeg(elbow, truth) == doctest::Approx(60.0));

  Skeleton3D missing = sk;
  missing.valid[sim::kRightElbow] = false;
  CHECK(CodeOf([&] {
          BaselineDirection(missing, sim::Side::kRight, BaselineKind::kElbowHand);
        }) == ErrorCode::kMissingJoint);
  CHECK_NOTHROW(BaselineDirection(missing, sim::Side::kRight, BaselineKind::kNoseHand));
  CHECK(BaselineFromName(BaselineName(BaselineKind::kNoseHand)) == BaselineKind::kNoseHand);
}

TEST_CASE("baselines on simulator truth: the extended arm points along the forearm") {
  const auto ds = testing::SmallDataset(1, 2, 40.0, 5);
  std::vector<double> elbow, nose;
  for (const auto& s : ds.sessions) {
    const auto& t = s.session.truth;
    for (int f = 0; f < t.num_frames(); ++f) {
      const auto& l = t.labels[f];
      if (!l.is_pointing || !l.direction) continue;
      const auto sk = Skeleton3D::FromTruth(t.skeletons[f]);
      elbow.push_back(geometry::AngularErrorDeg(
          BaselineDirection(sk, t.hand_side, BaselineKind::kElbowHand), *l.direction));
      nose.push_back(geometry::AngularErrorDeg(
          BaselineDirection(sk, t.hand_side, BaselineKind::kNoseHand), *l.direction));
    }
  }
  REQUIRE(elbow.size() > 20);
  std::sort(elbow.begin(), elbow.end());
  MESSAGE("truth elbow-hand median " << elbow[elbow.size() / 2] << " max " << elbow.back());
  CHECK(elbow[elbow.size() / 2] < 1.0);
  const double mean_nose = std::accumulate(nose.begin(), nose.end(), 0.0) / nose.size();
  CHECK(mean_nose > 5.0);

  const BaselineReport r = EvaluateBaselines(ds.sessions);
  CHECK(r.frames > 0);
  CHECK(r.nose_hand > r.elbow_hand);
  CHECK(r.elbow_hand >= 0.0);
  CHECK(r.annotation >= 0.0);
}

TEST_CASE("evaluate and ablation structure") {
  const auto ds = testing::SmallDataset(1, 2, 40.0, 5);
  train::DataOptions o;
  o.features.embed_dim = 16;
  const auto data = train::PreparedData::Build(ds, o);

  model::ModelConfig base;
  base.embed_dim = base.features.embed_dim = 16;
  base.heads = 2;
  base.joint_layers = base.temporal_layers = 1;
  train::TrainConfig tc = train::TrainConfig::Toy();
  tc.max_epochs = 1;
  tc.samples_per_epoch = 64;

  const model::DeePointModel untrained(base);
  const MetricsReport m = Evaluate(untrained, data, {});
  CHECK(m.samples == static_cast<long>(data.split(train::SplitPart::kTest).samples.size()));
  CHECK(m.error_map.total() == m.pointing_samples);
  CHECK(m.angular_error >= 0.0);
  CHECK(m.angular_error <= 180.0);
  CHECK(m.instance_recall >= 0.0);
  CHECK(m.instance_recall <= 1.0);
  CHECK(m.ToJson().contains("error_map"));
  CHECK(m.ToText().find("Angular error") != std::string::npos);

  AblationGrid std_grid = AblationGrid::Standard();
  const auto all = ExpandGrid(std_grid, base, tc);
  int window_rows = 0;
  bool hand_head = false;
  for (const auto& c : all) {
    window_rows += c.table == "window";
    hand_head |= c.label == "DP-Hand&Head";
    if (c.label == "N=15") CHECK(c.reference->angular_deg == 14.05);
    if (c.label == "N=1") CHECK(c.reference->angular_deg == 17.08);
  }
  CHECK(window_rows == 4);
  CHECK(hand_head);
  const auto head = model::JointsForParts("head");
  CHECK(std::count(head.begin(), head.end(), true) == 5);

  AblationGrid g;
  g.windows = {1, 5};
  const auto cells = ExpandGrid(g, base, tc);
  REQUIRE(cells.size() == 2);
  auto rows = RunAblation(data, cells);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.ok);
  const std::string table = FormatAblationTables(rows);
  CHECK(table.find("N=1") != std::string::npos);
  CHECK(table.find("N=5") != std::string::npos);
  CHECK(table.find("17.08") != std::string::npos);
  CHECK(AblationToJson(rows).size() == 2);

  // A failing cell is marked and the run continues.
  auto broken = cells;
  broken[0].model.heads = 3;
  rows = RunAblation(data, broken);
  CHECK_FALSE(rows[0].ok);
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].ok);
  CHECK(FormatAblationTables(rows).find("failed") != std::string::npos);
}

}  // namespace
}  // namespace deepoint::eval
