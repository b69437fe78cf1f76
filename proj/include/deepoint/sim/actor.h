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

#ifndef DEEPOINT_SIM_ACTOR_H_
#define DEEPOINT_SIM_ACTOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "deepoint/sim/skeleton.h"

namespace deepoint::sim {

// Per-person gesture timing. Per-instance durations are jittered around
// these means and clamped to the stated ranges.
struct PointingStyle {
  double raise_s = 0.4;         // arm travel to the pointing pose, [0.3, 0.5]
  double hold_s = 0.8;          // button-held phase, [0.3, 1.5]
  double lower_s = 0.4;         // [0.3, 0.5]
  double press_latency_s = 0.3; // pose reached -> button pressed, [0.2, 0.47]
  double head_turn_gain = 0.7;  // [0, 1]
};

struct ActorSpec {
  std::string actor_id;
  double height = 1.7;      // m
  double arm_length = 0.6;  // shoulder to wrist, m
  Side dominant_side = Side::kRight;
  double gait_speed = 1.0;  // m/s
  PointingStyle style;

  // Throws kInvalidArgument.
  void Validate() const;
};

// `count` actors with varied body size, handedness, gait, and style.
std::vector<ActorSpec> MakeActors(int count, uint64_t seed);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_ACTOR_H_
