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

#include "deepoint/sim/actor.h"

#include <cstdio>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"

namespace deepoint::sim {

void ActorSpec::Validate() const {
  const auto require = [this](bool ok, const char* what) {
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  "actor '" + actor_id + "': " + what);
    }
  };
  require(height > 0.0, "height must be positive");
  require(arm_length > 0.0, "arm_length must be positive");
  require(gait_speed > 0.0, "gait_speed must be positive");
  require(style.raise_s > 0.0 && style.lower_s > 0.0,
          "raise/lower durations must be positive");
  require(style.press_latency_s > 0.0, "press latency must be positive");
  require(style.hold_s >= 0.3 && style.hold_s <= 1.5,
          "hold duration must lie in [0.3, 1.5] s");
  require(style.head_turn_gain >= 0.0 && style.head_turn_gain <= 1.0,
          "head_turn_gain must lie in [0, 1]");
}

std::vector<ActorSpec> MakeActors(int count, uint64_t seed) {
  std::vector<ActorSpec> actors;
  for (int i = 0; i < count; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "p%02d", i);
    Rng rng(DeriveSeed(seed, "actor", id));
    ActorSpec a;
    a.actor_id = id;
    a.height = Uniform(rng, 1.50, 1.90);
    a.arm_length = a.height * Uniform(rng, 0.33, 0.37);
    a.dominant_side = Uniform(rng, 0.0, 1.0) < 0.15 ? Side::kLeft : Side::kRight;
    a.gait_speed = Uniform(rng, 0.7, 1.3);
    a.style.raise_s = Uniform(rng, 0.3, 0.5);
    a.style.hold_s = Uniform(rng, 0.5, 1.2);
    a.style.lower_s = Uniform(rng, 0.3, 0.5);
    a.style.press_latency_s = Uniform(rng, 0.2, 0.45);
    a.style.head_turn_gain = Uniform(rng, 0.3, 1.0);
    actors.push_back(a);
  }
  return actors;
}

}  // namespace deepoint::sim
