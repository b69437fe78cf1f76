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

#include "deepoint/anno/annotate.h"

#include "deepoint/common/error.h"

namespace deepoint::anno {

SegmentResult SegmentInstances(const sim::EventLog& events) {
  SegmentResult out;
  const auto& intervals = events.button_intervals;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const sim::Interval& iv = intervals[i];
    const sim::Utterance* found = nullptr;
    for (const auto& u : events.utterances) {
      if (u.frame >= iv.start && u.frame <= iv.end) {
        found = &u;
        break;
      }
    }
    if (found == nullptr) {
      ++out.dropped;
      out.warnings.push_back(
          std::string(ErrorCodeName(ErrorCode::kMissingUtterance)) +
          ": no utterance in interval [" + std::to_string(iv.start) + ", " +
          std::to_string(iv.end) + "]");
      continue;
    }
    out.instances.push_back(
        {static_cast<int>(i), iv.start, iv.end, found->marker_id});
  }
  return out;
}

HandEstimate TriangulateJoint(const std::vector<sim::PoseTrack>& tracks,
                              const geometry::CameraRig& cameras, int frame, int joint,
                              double min_confidence) {
  std::vector<geometry::Observation2D> obs;
  obs.reserve(tracks.size());
  for (const auto& t : tracks) {
    if (frame < 0 || frame >= static_cast<int>(t.frames.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame " + std::to_string(frame) + " outside track '" +
                      t.camera_id + "'");
    }
    obs.push_back(t.Observation(frame, joint));
  }
  const auto r = geometry::Triangulate(obs, cameras, min_confidence);
  return {r.point, r.mean_reprojection_px, r.views_used};
}

HandEstimate TriangulateHand(const std::vector<sim::PoseTrack>& tracks,
                             const geometry::CameraRig& cameras, int frame,
                             sim::Side side, double min_confidence) {
  return TriangulateJoint(tracks, cameras, frame, sim::WristOf(side), min_confidence);
}

SessionAnnotation AnnotateFrames(const sim::SessionBundle& session,
                                 const AnnotationOptions& options) {
  const sim::SessionTruth& truth = session.truth;
  if (truth.room_id != session.room.room_id) {
    throw Error(ErrorCode::kInvalidArgument, "session and room disagree");
  }
  const int n = truth.num_frames();
  for (const auto& t : session.tracks) {
    if (static_cast<int>(t.frames.size()) != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "track '" + t.camera_id + "' length differs from session");
    }
  }

  SessionAnnotation out;
  SegmentResult seg = SegmentInstances(truth.events);
  out.instances = std::move(seg.instances);
  out.dropped_instances = seg.dropped;
  out.warnings = std::move(seg.warnings);

  out.frames.resize(n);
  for (int f = 0; f < n; ++f) out.frames[f].frame = f;

  for (const PointingInstance& inst : out.instances) {
    const sim::Marker* marker = session.room.FindMarker(inst.marker_id);
    if (marker == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown marker '" + inst.marker_id + "'");
    }
    for (int f = std::max(0, inst.start_frame);
         f <= std::min(n - 1, inst.end_frame); ++f) {
      AnnotatedFrame& af = out.frames[f];
      af.is_pointing = true;
      af.instance_id = inst.instance_id;
      HandEstimate hand;
      try {
        hand = TriangulateHand(session.tracks, session.room.cameras, f,
                               session.actor.dominant_side,
                               options.min_confidence);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInsufficientViews &&
            e.code() != ErrorCode::kDegenerateGeometry) {
          throw;
        }
        ++out.excluded_frames;
        continue;
      }
      geometry::UnitVec3 dir;
      try {
        dir = geometry::DirBetween(hand.position, marker->position);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kCoincidentPoints) throw;
        ++out.excluded_frames;
        continue;
      }
      af.hand_position = hand.position;
      af.world_direction = dir;
      for (const auto& cam : session.room.cameras.cameras()) {
        af.camera_directions.emplace(cam.camera_id,
                                     geometry::WorldToCameraDir(cam, dir));
      }
    }
  }
  return out;
}

}  // namespace deepoint::anno
