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

#include "deepoint/sim/session_io.h"

#include <algorithm>
#include <map>

#include "deepoint/common/error.h"
#include "deepoint/geometry/calibration_io.h"

namespace deepoint::sim {
namespace fs = std::filesystem;

namespace {

constexpr char kSessionPrefix[] = "session_";

Json BoxToJson(const Box& b) {
  return {{"min", FromVector(b.min)}, {"max", FromVector(b.max)}};
}

Box BoxFromJson(const Json& j) {
  return Box{ToVector3(Field(j, "min")), ToVector3(Field(j, "max"))};
}

Json IntervalsToJson(const std::vector<Interval>& v) {
  Json out = Json::array();
  for (const auto& iv : v) out.push_back({iv.start, iv.end});
  return out;
}

}  // namespace

const PoseTrack& SessionBundle::Track(const std::string& camera_id) const {
  for (const auto& t : tracks) {
    if (t.camera_id == camera_id) return t;
  }
  throw Error(ErrorCode::kInvalidArgument, "no track for camera '" + camera_id + "'");
}

Json RoomToJson(const RoomSpec& room) {
  Json markers = Json::array();
  for (const auto& m : room.markers) {
    markers.push_back({{"id", m.marker_id}, {"position", FromVector(m.position)}});
  }
  Json obstacles = Json::array();
  for (const auto& b : room.obstacles) obstacles.push_back(BoxToJson(b));
  return {{"room_id", room.room_id},
          {"bounds", BoxToJson(room.bounds)},
          {"markers", markers},
          {"cameras", geometry::RigToJson(room.cameras)["cameras"]},
          {"obstacles", obstacles}};
}

RoomSpec RoomFromJson(const Json& j) {
  RoomSpec room;
  room.room_id = GetString(j, "room_id");
  room.bounds = BoxFromJson(Field(j, "bounds"));
  for (const Json& m : Field(j, "markers")) {
    room.markers.push_back({GetString(m, "id"), ToVector3(Field(m, "position"))});
  }
  room.cameras = geometry::RigFromJson({{"cameras", Field(j, "cameras")}});
  for (const Json& b : Field(j, "obstacles")) {
    room.obstacles.push_back(BoxFromJson(b));
  }
  try {
    room.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  return room;
}

Json ActorToJson(const ActorSpec& a) {
  return {{"actor_id", a.actor_id},
          {"height", a.height},
          {"arm_length", a.arm_length},
          {"dominant_side", SideName(a.dominant_side)},
          {"gait_speed", a.gait_speed},
          {"pointing_style",
           {{"raise_s", a.style.raise_s},
            {"hold_s", a.style.hold_s},
            {"lower_s", a.style.lower_s},
            {"press_latency_s", a.style.press_latency_s},
            {"head_turn_gain", a.style.head_turn_gain}}}};
}

ActorSpec ActorFromJson(const Json& j) {
  ActorSpec a;
  a.actor_id = GetString(j, "actor_id");
  a.height = GetNumber(j, "height");
  a.arm_length = GetNumber(j, "arm_length");
  a.dominant_side = SideFromName(GetString(j, "dominant_side"));
  a.gait_speed = GetNumber(j, "gait_speed");
  const Json& s = Field(j, "pointing_style");
  a.style.raise_s = GetNumber(s, "raise_s");
  a.style.hold_s = GetNumber(s, "hold_s");
  a.style.lower_s = GetNumber(s, "lower_s");
  a.style.press_latency_s = GetNumber(s, "press_latency_s");
  a.style.head_turn_gain = GetNumber(s, "head_turn_gain");
  try {
    a.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  return a;
}

Json EventsToJson(const SessionTruth& t) {
  Json utt = Json::array();
  for (const auto& u : t.events.utterances) {
    utt.push_back({{"frame", u.frame}, {"marker_id", u.marker_id}});
  }
  return {{"session_id", t.session_id},
          {"room_id", t.room_id},
          {"actor_id", t.actor_id},
          {"fps", t.fps},
          {"num_frames", t.num_frames()},
          {"button_intervals", IntervalsToJson(t.events.button_intervals)},
          {"utterances", utt}};
}

EventLog EventsFromJson(const Json& j) {
  EventLog log;
  for (const Json& iv : Field(j, "button_intervals")) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() ||
        !iv[1].is_number_integer()) {
      throw Error(ErrorCode::kSchemaError,
                  "button interval must be [start, end] integers");
    }
    log.button_intervals.push_back({iv[0].get<int>(), iv[1].get<int>()});
  }
  for (const Json& u : Field(j, "utterances")) {
    log.utterances.push_back({GetInt(u, "frame"), GetString(u, "marker_id")});
  }
  return log;
}

Json TrackFrameToJson(int frame, const PoseFrame& pf) {
  Json kps = Json::array();
  for (const auto& kp : pf.keypoints) {
    kps.push_back({kp.pixel.x(), kp.pixel.y(), kp.confidence});
  }
  return {{"frame", frame},
          {"keypoints", kps},
          {"bbox", {pf.bbox.x, pf.bbox.y, pf.bbox.width, pf.bbox.height}}};
}

PoseFrame TrackFrameFromJson(const Json& j, int expected_frame) {
  if (GetInt(j, "frame") != expected_frame) {
    throw Error(ErrorCode::kSchemaError,
                "expected frame " + std::to_string(expected_frame));
  }
  PoseFrame pf;
  const Json& kps = Field(j, "keypoints");
  if (!kps.is_array() || kps.size() != static_cast<std::size_t>(kNumJoints)) {
    throw Error(ErrorCode::kSchemaError, "keypoints must hold 17 entries");
  }
  for (int k = 0; k < kNumJoints; ++k) {
    const Json& e = kps[k];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number() ||
        !e[1].is_number() || !e[2].is_number()) {
      throw Error(ErrorCode::kSchemaError, "keypoint must be [u, v, c]");
    }
    pf.keypoints[k].pixel = {e[0].get<double>(), e[1].get<double>()};
    pf.keypoints[k].confidence = e[2].get<double>();
    if (pf.keypoints[k].confidence < 0.0 || pf.keypoints[k].confidence > 1.0) {
      throw Error(ErrorCode::kSchemaError, "confidence outside [0, 1]");
    }
  }
  const Json& bb = Field(j, "bbox");
  if (!bb.is_array() || bb.size() != 4) {
    throw Error(ErrorCode::kSchemaError, "bbox must be [x, y, w, h]");
  }
  pf.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
             bb[3].get<double>()};
  return pf;
}

Json SplitsToJson(const SplitAssignment& s) {
  auto list = [](const std::vector<SessionRange>& v) {
    Json out = Json::array();
    for (const auto& r : v) {
      out.push_back({{"session", r.session_id}, {"begin", r.begin}, {"end", r.end}});
    }
    return out;
  };
  return {{"mode", SplitModeName(s.mode)},
          {"train", list(s.train)},
          {"val", list(s.val)},
          {"test", list(s.test)}};
}

SplitAssignment SplitsFromJson(const Json& j) {
  SplitAssignment s;
  try {
    s.mode = SplitModeFromName(GetString(j, "mode"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  auto list = [&](const char* key, std::vector<SessionRange>& out) {
    for (const Json& r : Field(j, key)) {
      SessionRange range{GetString(r, "session"), GetInt(r, "begin"),
                         GetInt(r, "end")};
      if (range.begin < 0 || range.end < range.begin) {
        throw Error(ErrorCode::kSchemaError,
                    "bad range for session '" + range.session_id + "'");
      }
      out.push_back(range);
    }
  };
  list("train", s.train);
  list("val", s.val);
  list("test", s.test);
  return s;
}

fs::path SessionDir(const fs::path& root, const std::string& session_id) {
  return root / (kSessionPrefix + session_id);
}

void WriteSession(const fs::path& root, const SessionBundle& b) {
  const fs::path dir = SessionDir(root, b.truth.session_id);
  fs::create_directories(dir / "tracks");
  WriteJsonFile(dir / "room.json", RoomToJson(b.room));
  WriteJsonFile(dir / "actor.json", ActorToJson(b.actor));
  WriteJsonFile(dir / "events.json", EventsToJson(b.truth));

  const SessionTruth& t = b.truth;
  std::vector<Json> lines;
  lines.reserve(t.skeletons.size());
  for (int f = 0; f < t.num_frames(); ++f) {
    Json joints = Json::array();
    for (const auto& p : t.skeletons[f]) joints.push_back(FromVector(p));
    const FrameLabel& l = t.labels[f];
    lines.push_back(
        {{"frame", f},
         {"skeleton", joints},
         {"seated", static_cast<bool>(t.seated[f])},
         {"is_pointing", l.is_pointing},
         {"direction", l.direction ? FromVector(l.direction->vec()) : Json()},
         {"marker_id", l.marker_id ? Json(*l.marker_id) : Json()}});
  }
  WriteJsonLines(dir / "truth.jsonl", lines);

  for (const PoseTrack& track : b.tracks) {
    std::vector<Json> rows;
    rows.reserve(track.frames.size());
    for (std::size_t f = 0; f < track.frames.size(); ++f) {
      rows.push_back(TrackFrameToJson(static_cast<int>(f), track.frames[f]));
    }
    WriteJsonLines(dir / "tracks" / (track.camera_id + ".jsonl"), rows);
  }
}

SessionBundle ReadSession(const fs::path& dir) {
  SessionBundle b;
  b.room = RoomFromJson(ReadJsonFile(dir / "room.json"));
  b.actor = ActorFromJson(ReadJsonFile(dir / "actor.json"));
  const Json events = ReadJsonFile(dir / "events.json");
  SessionTruth& t = b.truth;
  int num_frames = 0;
  try {
    t.session_id = GetString(events, "session_id");
    t.room_id = GetString(events, "room_id");
    t.actor_id = GetString(events, "actor_id");
    t.fps = GetInt(events, "fps");
    num_frames = GetInt(events, "num_frames");
    t.events = EventsFromJson(events);
    t.events.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError,
                (dir / "events.json").string() + ": " + e.what());
  }
  if (t.room_id != b.room.room_id || t.actor_id != b.actor.actor_id) {
    throw Error(ErrorCode::kSchemaError,
                dir.string() + ": events.json disagrees with room/actor");
  }
  t.hand_side = b.actor.dominant_side;

  ForEachJsonLine(dir / "truth.jsonl", [&](int, const Json& j) {
    if (GetInt(j, "frame") != t.num_frames()) {
      throw Error(ErrorCode::kSchemaError, "frames out of order");
    }
    const Json& joints = Field(j, "skeleton");
    if (!joints.is_array() || joints.size() != static_cast<std::size_t>(kNumJoints)) {
      throw Error(ErrorCode::kSchemaError, "skeleton must hold 17 joints");
    }
    Skeleton s;
    for (int k = 0; k < kNumJoints; ++k) s[k] = ToVector3(joints[k]);
    FrameLabel l;
    l.is_pointing = GetBool(j, "is_pointing");
    const Json& d = Field(j, "direction");
    if (!d.is_null()) l.direction = geometry::UnitVec3::FromUnit(ToVector3(d));
    const Json& m = Field(j, "marker_id");
    if (!m.is_null()) l.marker_id = GetString(j, "marker_id");
    t.skeletons.push_back(s);
    t.seated.push_back(GetBool(j, "seated"));
    t.labels.push_back(std::move(l));
  });
  if (t.num_frames() != num_frames) {
    throw Error(ErrorCode::kSchemaError,
                dir.string() + ": truth.jsonl frame count disagrees with events");
  }

  for (const auto& cam : b.room.cameras.cameras()) {
    PoseTrack track;
    track.camera_id = cam.camera_id;
    const fs::path path = dir / "tracks" / (cam.camera_id + ".jsonl");
    ForEachJsonLine(path, [&](int, const Json& j) {
      track.frames.push_back(
          TrackFrameFromJson(j, static_cast<int>(track.frames.size())));
    });
    if (static_cast<int>(track.frames.size()) != num_frames) {
      throw Error(ErrorCode::kSchemaError,
                  path.string() + ": frame count disagrees with events");
    }
    b.tracks.push_back(std::move(track));
  }
  return b;
}

std::vector<std::string> ListSessions(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kMissingFile, "no data directory " + root.string());
  }
  std::vector<std::string> ids;
  const std::string prefix = kSessionPrefix;
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && name.rfind(prefix, 0) == 0) {
      ids.push_back(name.substr(prefix.size()));
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace deepoint::sim
