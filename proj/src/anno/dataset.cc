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

#include "deepoint/anno/dataset.h"

#include <algorithm>
#include <map>

#include "deepoint/common/error.h"

namespace deepoint::anno {
namespace fs = std::filesystem;

const AnnotatedSession& Dataset::Get(const std::string& session_id) const {
  for (const auto& s : sessions) {
    if (s.id() == session_id) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown session '" + session_id + "'");
}

Json AnnotatedFrameToJson(const AnnotatedFrame& f) {
  Json j = {{"frame", f.frame}, {"pointing", f.is_pointing ? 1 : 0}};
  if (f.world_direction) j["dir_world"] = FromVector(f.world_direction->vec());
  if (!f.camera_directions.empty()) {
    Json cams = Json::object();
    for (const auto& [id, d] : f.camera_directions) cams[id] = FromVector(d.vec());
    j["dir_cam"] = cams;
  }
  if (f.instance_id) j["instance"] = *f.instance_id;
  if (f.hand_position) j["hand"] = FromVector(*f.hand_position);
  return j;
}

AnnotatedFrame AnnotatedFrameFromJson(const Json& j) {
  AnnotatedFrame f;
  f.frame = GetInt(j, "frame");
  const int p = GetInt(j, "pointing");
  if (p != 0 && p != 1) throw Error(ErrorCode::kSchemaError, "pointing must be 0 or 1");
  f.is_pointing = p == 1;
  if (j.contains("dir_world")) {
    f.world_direction = geometry::UnitVec3::FromUnit(ToVector3(j["dir_world"]));
  }
  if (j.contains("dir_cam")) {
    const Json& cams = j["dir_cam"];
    if (!cams.is_object()) throw Error(ErrorCode::kSchemaError, "dir_cam must be an object");
    for (auto it = cams.begin(); it != cams.end(); ++it) {
      f.camera_directions.emplace(it.key(),
                                  geometry::UnitVec3::FromUnit(ToVector3(it.value())));
    }
  }
  if (j.contains("instance")) f.instance_id = GetInt(j, "instance");
  if (j.contains("hand")) f.hand_position = ToVector3(j["hand"]);
  if (f.world_direction.has_value() != !f.camera_directions.empty() ||
      (f.world_direction && !f.is_pointing)) {
    throw Error(ErrorCode::kSchemaError, "inconsistent direction fields");
  }
  return f;
}

void ValidateSplits(const sim::SplitAssignment& splits,
                    const std::vector<sim::SessionInfo>& sessions) {
  std::map<std::string, int> frames;
  for (const auto& s : sessions) frames[s.session_id] = s.num_frames;
  for (const auto* list : {&splits.train, &splits.val, &splits.test}) {
    for (const auto& r : *list) {
      auto it = frames.find(r.session_id);
      if (it == frames.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "split references unknown session '" + r.session_id + "'");
      }
      if (r.begin < 0 || r.end < r.begin || r.end >= it->second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "split range outside session '" + r.session_id + "'");
      }
    }
  }
}

void ExportDataset(const fs::path& root,
                   const std::vector<AnnotatedSession>& sessions,
                   const sim::SplitAssignment& splits) {
  std::vector<sim::SessionInfo> infos;
  for (const auto& s : sessions) {
    const auto& t = s.session.truth;
    infos.push_back({t.session_id, t.room_id, t.actor_id, t.num_frames()});
  }
  ValidateSplits(splits, infos);
  for (const auto& s : sessions) {
    sim::WriteSession(root, s.session);
    std::vector<Json> lines;
    lines.reserve(s.annotation.frames.size());
    for (const auto& f : s.annotation.frames) lines.push_back(AnnotatedFrameToJson(f));
    WriteJsonLines(sim::SessionDir(root, s.id()) / "annotations.jsonl", lines);
  }
  WriteJsonFile(root / "splits.json", sim::SplitsToJson(splits));
}

Dataset LoadDataset(const fs::path& root) {
  Dataset ds;
  std::vector<sim::SessionInfo> infos;
  for (const std::string& id : sim::ListSessions(root)) {
    const fs::path dir = sim::SessionDir(root, id);
    AnnotatedSession as;
    as.session = sim::ReadSession(dir);
    if (as.id() != id) {
      throw Error(ErrorCode::kSchemaError,
                  dir.string() + ": session id disagrees with directory name");
    }
    SessionAnnotation& ann = as.annotation;
    SegmentResult seg = SegmentInstances(as.session.truth.events);
    ann.instances = std::move(seg.instances);
    ann.dropped_instances = seg.dropped;
    ann.warnings = std::move(seg.warnings);
    ForEachJsonLine(dir / "annotations.jsonl", [&](int, const Json& j) {
      AnnotatedFrame f = AnnotatedFrameFromJson(j);
      if (f.frame != static_cast<int>(ann.frames.size())) {
        throw Error(ErrorCode::kSchemaError, "frames out of order");
      }
      if (f.is_pointing && !f.world_direction) ++ann.excluded_frames;
      ann.frames.push_back(std::move(f));
    });
    const auto& t = as.session.truth;
    if (static_cast<int>(ann.frames.size()) != t.num_frames()) {
      throw Error(ErrorCode::kSchemaError,
                  (dir / "annotations.jsonl").string() +
                      ": frame count disagrees with events");
    }
    infos.push_back({t.session_id, t.room_id, t.actor_id, t.num_frames()});
    ds.sessions.push_back(std::move(as));
  }
  const fs::path split_path = root / "splits.json";
  try {
    ds.splits = sim::SplitsFromJson(ReadJsonFile(split_path));
    ValidateSplits(ds.splits, infos);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMissingFile) throw;
    throw Error(ErrorCode::kSchemaError, split_path.string() + ": " + e.what());
  }
  return ds;
}

}  // namespace deepoint::anno
