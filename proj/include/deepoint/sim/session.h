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

#ifndef DEEPOINT_SIM_SESSION_H_
#define DEEPOINT_SIM_SESSION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepoint/geometry/unit_vec.h"
#include "deepoint/sim/actor.h"
#include "deepoint/sim/room.h"
#include "deepoint/sim/skeleton.h"

namespace deepoint::sim {

struct Interval {
  int start = 0;
  int end = 0;  // inclusive
  bool operator==(const Interval&) const = default;
};

struct Utterance {
  int frame = 0;
  std::string marker_id;
  bool operator==(const Utterance&) const = default;
};

struct EventLog {
  std::vector<Interval> button_intervals;
  std::vector<Utterance> utterances;

  // Intervals sorted, disjoint, start <= end; each holds exactly one
  // utterance. Throws kInvalidArgument.
  void Validate() const;
  bool operator==(const EventLog&) const = default;
};

struct FrameLabel {
  bool is_pointing = false;
  std::optional<geometry::UnitVec3> direction;  // world frame
  std::optional<std::string> marker_id;
};

struct SessionTruth {
  std::string session_id;
  std::string room_id;
  std::string actor_id;
  Side hand_side = Side::kRight;
  int fps = 15;
  std::vector<Skeleton> skeletons;
  std::vector<bool> seated;
  EventLog events;
  std::vector<FrameLabel> labels;

  int num_frames() const { return static_cast<int>(skeletons.size()); }
};

struct SessionOptions {
  int fps = 15;
  // Fraction of time spent seated (pointing may happen while seated).
  double seated_fraction = 0.2;
  // Walking speed multiplier while a gesture is in progress.
  double gesture_walk_scale = 0.3;
  // Minimum distance from the shoulder for a marker to be pointable.
  double min_marker_distance = 1.0;
};

std::string SessionId(const std::string& room_id, const std::string& actor_id);

// Simulates one capture session. The actor walks between random waypoints,
// idles, and sits; every 3-5 s (first onset within the first second) a marker
// visible from the head is chosen and the dominant arm performs
// raise -> settle -> hold -> lower. During settle and hold the wrist lies on
// the shoulder->marker ray at arm_length; the button interval covers exactly
// the hold frames, and its utterance is at the interval start. The head turns
// toward the marker scaled by head_turn_gain. Pure function of its inputs.
//
// Throws kInvalidArgument (duration_s < 10, invalid specs) and
// kInfeasibleRoom when no marker is visible from any sampled actor position.
SessionTruth GenerateSession(const RoomSpec& room, const ActorSpec& actor,
                             double duration_s, uint64_t seed,
                             const SessionOptions& options = {});

// The session's button intervals and one utterance per instance.
EventLog EmitEvents(const SessionTruth& truth);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_SESSION_H_
