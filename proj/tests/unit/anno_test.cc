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
#include <string>
#include <vector>

#include "deepoint/anno/annotate.h"
#include "deepoint/anno/dataset.h"
#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"
#include "deepoint/sim/benchmark.h"

namespace deepoint::anno {
namespace {

namespace fs = std::filesystem;
using geometry::AngularErrorDeg;

std::vector<sim::SessionBundle> SmallBenchmark(const sim::NoiseModel& noise,
                                               int actors = 2,
                                               double duration_s = 30.0,
                                               uint64_t seed = 11) {
  sim::BenchmarkOptions opt;
  opt.num_actors = actors;
  opt.duration_s = duration_s;
  opt.noise = noise;
  return sim::MakeBenchmark(opt, seed);
}

std::vector<AnnotatedSession> AnnotateAll(
    const std::vector<sim::SessionBundle>& sessions) {
  std::vector<AnnotatedSession> out;
  for (const auto& s : sessions) out.push_back({s, AnnotateFrames(s)});
  return out;
}

TEST_CASE("segment_instances: spans and markers come from the event log") {
  sim::EventLog log;
  log.button_intervals = {{10, 20}, {40, 55}};
  log.utterances = {{10, "m3"}, {40, "m7"}};
  const SegmentResult r = SegmentInstances(log);
  REQUIRE(r.instances.size() == 2);
  CHECK(r.instances[0] == PointingInstance{0, 10, 20, "m3"});
  CHECK(r.instances[1] == PointingInstance{1, 40, 55, "m7"});
  CHECK(r.dropped == 0);
}

TEST_CASE("segment_instances: interval without utterance is dropped") {
  sim::EventLog log;
  log.button_intervals = {{10, 20}, {40, 55}};
  log.utterances = {{41, "m7"}};
  const SegmentResult r = SegmentInstances(log);
  REQUIRE(r.instances.size() == 1);
  CHECK(r.instances[0].marker_id == "m7");
  CHECK(r.dropped == 1);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("MissingUtterance") != std::string::npos);
  CHECK(SegmentInstances(sim::EventLog{}).instances.empty());
}

TEST_CASE("triangulate_hand: noiseless tracks recover the true wrist") {
  const auto sessions = SmallBenchmark(sim::NoiseModel::Noiseless(), 1, 12.0);
  for (const auto& s : sessions) {
    const int wrist = sim::WristOf(s.actor.dominant_side);
    int checked = 0;
    for (int f = 0; f < s.truth.num_frames(); f += 3) {
      int views = 0;
      for (const auto& t : s.tracks) views += t.frames[f].keypoints[wrist].confidence >= 0.5;
      if (views < 2) continue;
      const HandEstimate h = TriangulateHand(s.tracks, s.room.cameras, f,
                                             s.actor.dominant_side);
      CHECK((h.position - s.truth.skeletons[f][wrist]).norm() < 1e-6);
      CHECK(h.views_used == views);
      ++checked;
    }
    CHECK(checked > 20);
  }
}

TEST_CASE("triangulate_hand: a single confident view is insufficient") {
  auto sessions = SmallBenchmark(sim::NoiseModel::Noiseless(), 1, 12.0);
  auto& s = sessions[0];
  const int wrist = sim::WristOf(s.actor.dominant_side);
  for (std::size_t c = 1; c < s.tracks.size(); ++c) {
    s.tracks[c].frames[0].keypoints[wrist].confidence = 0.1;
  }
  s.tracks[0].frames[0].keypoints[wrist].confidence = 1.0;
  try {
    TriangulateHand(s.tracks, s.room.cameras, 0, s.actor.dominant_side);
    FAIL("expected InsufficientViews");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientViews);
  }
}

TEST_CASE("annotate_frames: noiseless annotation equals simulator truth") {
  const auto sessions = SmallBenchmark(sim::NoiseModel::Noiseless());
  int annotated = 0;
  for (const auto& s : sessions) {
    const SessionAnnotation a = AnnotateFrames(s);
    REQUIRE(a.frames.size() == s.truth.labels.size());
    CHECK(a.instances.size() == s.truth.events.button_intervals.size());
    for (int f = 0; f < s.truth.num_frames(); ++f) {
      const AnnotatedFrame& af = a.frames[f];
      const sim::FrameLabel& truth = s.truth.labels[f];
      CHECK(af.is_pointing == truth.is_pointing);
      if (!af.is_pointing) {
        CHECK_FALSE(af.world_direction.has_value());
        CHECK(af.camera_directions.empty());
        CHECK_FALSE(af.instance_id.has_value());
        continue;
      }
      if (!af.world_direction) continue;
      CHECK(AngularErrorDeg(*af.world_direction, *truth.direction) < 0.1);
      ++annotated;
    }
  }
  CHECK(annotated > 100);
}

TEST_CASE("annotate_frames: camera directions are rotated world directions") {
  const auto sessions = SmallBenchmark(sim::NoiseModel{}, 1);
  for (const auto& s : sessions) {
    const SessionAnnotation a = AnnotateFrames(s);
    for (const auto& af : a.frames) {
      if (!af.world_direction) continue;
      REQUIRE(af.camera_directions.size() == s.room.cameras.size());
      for (const auto& cam : s.room.cameras.cameras()) {
        const Eigen::Vector3d expected = cam.rotation * af.world_direction->vec();
        CHECK((af.camera_directions.at(cam.camera_id).vec() - expected).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("annotate_frames: never fabricates a direction") {
  sim::NoiseModel noise;
  noise.dropout_prob = 0.4;  // force frames with too few views
  const auto sessions = SmallBenchmark(noise, 2);
  int excluded = 0;
  for (const auto& s : sessions) {
    const SessionAnnotation a = AnnotateFrames(s);
    const int wrist = sim::WristOf(s.actor.dominant_side);
    for (const auto& af : a.frames) {
      int views = 0;
      for (const auto& t : s.tracks) {
        views += t.frames[af.frame].keypoints[wrist].confidence >= 0.5;
      }
      if (af.world_direction) CHECK(views >= 2);
      if (af.is_pointing && views < 2) CHECK_FALSE(af.world_direction.has_value());
    }
    excluded += a.excluded_frames;
  }
  CHECK(excluded > 0);
}

TEST_CASE("annotate_frames: error grows monotonically with pixel noise") {
  std::vector<double> means;
  for (double sigma : {0.0, 1.0, 2.0, 4.0}) {
    sim::NoiseModel noise;
    noise.pixel_sigma = sigma;
    const auto sessions = SmallBenchmark(noise, 5, 30.0, 4);
    REQUIRE(sessions.size() == 10);
    double sum = 0.0;
    int count = 0;
    for (const auto& s : sessions) {
      const SessionAnnotation a = AnnotateFrames(s);
      for (const auto& af : a.frames) {
        if (!af.world_direction) continue;
        sum += AngularErrorDeg(*af.world_direction, *s.truth.labels[af.frame].direction);
        ++count;
      }
    }
    means.push_back(sum / count);
  }
  MESSAGE("mean error by sigma: " << means[0] << " " << means[1] << " "
                                  << means[2] << " " << means[3]);
  for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] >= means[i - 1]);
}

TEST_CASE("instances are conserved from truth to annotation") {
  const auto sessions = SmallBenchmark(sim::NoiseModel{}, 3, 60.0);
  for (const auto& s : sessions) {
    const auto a = AnnotateFrames(s);
    const auto events = sim::EmitEvents(s.truth);
    CHECK(events.button_intervals.size() == s.truth.events.button_intervals.size());
    CHECK(a.instances.size() == events.button_intervals.size());
    CHECK(a.dropped_instances == 0);
  }
}

// Expected pointing fraction from simulator parameters: per actor, the mean
// of clamp(round(15 * hold_s * u), 5, 22) for u ~ U(0.7, 1.3), over the mean
// onset spacing of 4 s = 60 frames.
double ExpectedPointingFraction(const std::vector<sim::SessionBundle>& sessions) {
  double total = 0.0;
  for (const auto& s : sessions) {
    const int steps = 20000;
    double hold = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double u = 0.7 + 0.6 * (i + 0.5) / steps;
      hold += std::clamp(std::round(15.0 * s.actor.style.hold_s * u), 5.0, 22.0);
    }
    total += hold / steps / 60.0;
  }
  return total / sessions.size();
}

TEST_CASE("pointing-frame fraction matches hold duration over cadence") {
  const auto sessions = sim::MakeBenchmark(sim::BenchmarkOptions{}, 7);
  long pointing = 0, frames = 0;
  for (const auto& s : sessions) {
    for (const auto& l : s.truth.labels) pointing += l.is_pointing;
    frames += s.truth.num_frames();
  }
  const double observed = static_cast<double>(pointing) / frames;
  const double expected = ExpectedPointingFraction(sessions);
  MESSAGE("pointing fraction observed=" << observed << " expected=" << expected);
  CHECK(observed == doctest::Approx(expected).epsilon(0.08));
}

TEST_CASE("dataset: export then load round-trips") {
  const auto sessions = SmallBenchmark(sim::NoiseModel{}, 3, 12.0);
  const auto annotated = AnnotateAll(sessions);
  const auto splits = sim::MakeSplits(sim::Describe(sessions), sim::SplitMode::kPerson);
  const fs::path root = fs::temp_directory_path() / "deepoint_anno_roundtrip";
  fs::remove_all(root);
  ExportDataset(root, annotated, splits);
  const Dataset ds = LoadDataset(root);
  CHECK(ds.splits == splits);
  REQUIRE(ds.sessions.size() == annotated.size());
  for (std::size_t i = 0; i < annotated.size(); ++i) {
    const auto& a = annotated[i].annotation;
    const auto& b = ds.sessions[i].annotation;
    CHECK(ds.sessions[i].id() == annotated[i].id());
    CHECK(a.instances == b.instances);
    CHECK(a.excluded_frames == b.excluded_frames);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
      CHECK(a.frames[f].is_pointing == b.frames[f].is_pointing);
      CHECK(a.frames[f].world_direction == b.frames[f].world_direction);
      CHECK(a.frames[f].camera_directions == b.frames[f].camera_directions);
      CHECK(a.frames[f].instance_id == b.frames[f].instance_id);
      CHECK(a.frames[f].hand_position == b.frames[f].hand_position);
    }
  }
  fs::remove_all(root);
}

TEST_CASE("dataset: truncated annotations file names the bad line") {
  const auto sessions = SmallBenchmark(sim::NoiseModel{}, 1, 12.0);
  const auto annotated = AnnotateAll(sessions);
  const auto splits = sim::MakeSplits(sim::Describe(sessions), sim::SplitMode::kTime);
  const fs::path root = fs::temp_directory_path() / "deepoint_anno_truncated";
  fs::remove_all(root);
  ExportDataset(root, annotated, splits);
  const fs::path file = sim::SessionDir(root, annotated[0].id()) / "annotations.jsonl";
  std::string content;
  {
    std::ifstream in(file);
    content.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Cut the file in the middle of line 3.
  std::size_t pos = 0;
  for (int i = 0; i < 2; ++i) pos = content.find('\n', pos) + 1;
  {
    std::ofstream out(file, std::ios::trunc);
    out << content.substr(0, pos + 10);
  }
  try {
    LoadDataset(root);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
    CHECK(std::string(e.what()).find("annotations.jsonl:3") != std::string::npos);
  }
  fs::remove_all(root);
}

TEST_CASE("dataset: split referencing an absent session is rejected") {
  const auto sessions = SmallBenchmark(sim::NoiseModel{}, 1, 12.0);
  const auto annotated = AnnotateAll(sessions);
  auto splits = sim::MakeSplits(sim::Describe(sessions), sim::SplitMode::kTime);
  splits.test.push_back({"ghost__p99", 0, 10});
  const fs::path root = fs::temp_directory_path() / "deepoint_anno_badsplit";
  fs::remove_all(root);
  CHECK_THROWS_AS(ExportDataset(root, annotated, splits), Error);

  splits.test.pop_back();
  ExportDataset(root, annotated, splits);
  Json j = ReadJsonFile(root / "splits.json");
  j["val"].push_back({{"session", "ghost__p99"}, {"begin", 0}, {"end", 3}});
  WriteJsonFile(root / "splits.json", j);
  try {
    LoadDataset(root);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
    CHECK(std::string(e.what()).find("ghost__p99") != std::string::npos);
  }
  fs::remove_all(root);
}

TEST_CASE("dataset: missing directory is MissingFile") {
  try {
    LoadDataset(fs::temp_directory_path() / "deepoint_does_not_exist");
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingFile);
  }
}

}  // namespace
}  // namespace deepoint::anno
