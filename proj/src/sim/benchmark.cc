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

#include "deepoint/sim/benchmark.h"

#include <algorithm>

#include "deepoint/common/error.h"
#include "deepoint/common/parallel.h"
#include "deepoint/common/random.h"

namespace deepoint::sim {

std::vector<RoomSpec> MakeRooms(const BenchmarkOptions& options, uint64_t seed) {
  if (options.num_rooms < 1 || options.num_actors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one room and actor");
  }
  std::vector<RoomSpec> rooms;
  for (int i = 0; i < options.num_rooms; ++i) {
    const std::string id = i == 0   ? "living_room"
                           : i == 1 ? "office"
                                    : "room_" + std::to_string(i);
    RoomOptions ro;
    ro.layout = i % 2 == 0 ? RoomLayout::kLivingRoom : RoomLayout::kOffice;
    ro.num_cameras = options.cameras_per_room;
    ro.num_markers = options.markers_per_room;
    rooms.push_back(MakeRoom(id, ro, DeriveSeed(seed, "room", id)));
  }
  return rooms;
}

std::vector<SessionBundle> MakeBenchmark(const BenchmarkOptions& options,
                                         uint64_t seed) {
  const std::vector<RoomSpec> rooms = MakeRooms(options, seed);
  const std::vector<ActorSpec> actors =
      MakeActors(options.num_actors, DeriveSeed(seed, "actors"));

  std::vector<SessionBundle> out;
  for (const auto& room : rooms) {
    for (const auto& actor : actors) {
      SessionBundle b;
      b.room = room;
      b.actor = actor;
      out.push_back(std::move(b));
    }
  }
  ParallelFor(out.size(), options.workers, [&](std::size_t i) {
    SessionBundle& b = out[i];
    const std::string id = SessionId(b.room.room_id, b.actor.actor_id);
    b.truth = GenerateSession(b.room, b.actor, options.duration_s,
                              DeriveSeed(seed, "session", id), options.session);
    for (const auto& cam : b.room.cameras.cameras()) {
      b.tracks.push_back(Observe(b.truth, b.room, cam, options.noise,
                                 DeriveSeed(seed, "observe")));
    }
  });
  std::sort(out.begin(), out.end(),
            [](const SessionBundle& a, const SessionBundle& b) {
              return a.truth.session_id < b.truth.session_id;
            });
  return out;
}

std::vector<SessionInfo> Describe(const std::vector<SessionBundle>& sessions) {
  std::vector<SessionInfo> out;
  for (const auto& b : sessions) {
    out.push_back({b.truth.session_id, b.truth.room_id, b.truth.actor_id,
                   b.truth.num_frames()});
  }
  return out;
}

}  // namespace deepoint::sim
