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

#ifndef DEEPOINT_SIM_SESSION_IO_H_
#define DEEPOINT_SIM_SESSION_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "deepoint/common/json_io.h"
#include "deepoint/sim/actor.h"
#include "deepoint/sim/observe.h"
#include "deepoint/sim/room.h"
#include "deepoint/sim/session.h"
#include "deepoint/sim/splits.h"

namespace deepoint::sim {

// Everything the simulator produces for one (room, actor) recording.
struct SessionBundle {
  RoomSpec room;
  ActorSpec actor;
  SessionTruth truth;
  std::vector<PoseTrack> tracks;  // one per room camera, rig order

  const PoseTrack& Track(const std::string& camera_id) const;
};

Json RoomToJson(const RoomSpec& room);
RoomSpec RoomFromJson(const Json& j);
Json ActorToJson(const ActorSpec& actor);
ActorSpec ActorFromJson(const Json& j);
Json EventsToJson(const SessionTruth& truth);
EventLog EventsFromJson(const Json& j);
Json TrackFrameToJson(int frame, const PoseFrame& pf);
PoseFrame TrackFrameFromJson(const Json& j, int expected_frame);
Json SplitsToJson(const SplitAssignment& splits);
SplitAssignment SplitsFromJson(const Json& j);

std::filesystem::path SessionDir(const std::filesystem::path& root,
                                 const std::string& session_id);

// Writes root/session_<id>/{room.json, actor.json, truth.jsonl, events.json,
// tracks/<camera_id>.jsonl}.
void WriteSession(const std::filesystem::path& root, const SessionBundle& b);
// Reads a directory written by WriteSession. Throws kMissingFile /
// kSchemaError.
SessionBundle ReadSession(const std::filesystem::path& dir);
// Sorted ids of the session_* directories under root.
std::vector<std::string> ListSessions(const std::filesystem::path& root);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_SESSION_IO_H_
