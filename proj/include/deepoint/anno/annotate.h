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

#ifndef DEEPOINT_ANNO_ANNOTATE_H_
#define DEEPOINT_ANNO_ANNOTATE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/geometry/camera.h"
#include "deepoint/geometry/geometry.h"
#include "deepoint/geometry/unit_vec.h"
#include "deepoint/sim/observe.h"
#include "deepoint/sim/session.h"
#include "deepoint/sim/session_io.h"

namespace deepoint::anno {

struct PointingInstance {
  int instance_id = 0;  // index of the originating button interval
  int start_frame = 0;
  int end_frame = 0;  // inclusive
  std::string marker_id;
  bool operator==(const PointingInstance&) const = default;
};

struct SegmentResult {
  std::vector<PointingInstance> instances;
  // Intervals dropped for lack of an utterance (MissingUtterance).
  int dropped = 0;
  std::vector<std::string> warnings;
};

// One instance per button interval, labeled with the first utterance that
// falls inside it.
SegmentResult SegmentInstances(const sim::EventLog& events);

struct HandEstimate {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double mean_reprojection_px = 0.0;
  int views_used = 0;
};

// Triangulates `joint` at `frame` from every track whose keypoint confidence
// is at least min_confidence. Throws kInsufficientViews.
HandEstimate TriangulateJoint(const std::vector<sim::PoseTrack>& tracks,
                              const geometry::CameraRig& cameras, int frame, int joint,
                              double min_confidence = geometry::kDefaultMinConfidence);

// The dominant-side wrist case used by the annotator.
HandEstimate TriangulateHand(const std::vector<sim::PoseTrack>& tracks,
                             const geometry::CameraRig& cameras, int frame,
                             sim::Side side,
                             double min_confidence = geometry::kDefaultMinConfidence);

struct AnnotatedFrame {
  int frame = 0;
  bool is_pointing = false;
  std::optional<geometry::UnitVec3> world_direction;
  // Keyed by camera id; empty exactly when world_direction is absent.
  std::map<std::string, geometry::UnitVec3> camera_directions;
  std::optional<int> instance_id;
  std::optional<Eigen::Vector3d> hand_position;
};

struct AnnotationOptions {
  double min_confidence = geometry::kDefaultMinConfidence;
};

struct SessionAnnotation {
  std::vector<PointingInstance> instances;
  std::vector<AnnotatedFrame> frames;
  int dropped_instances = 0;
  // Pointing frames left without a direction (fewer than 2 confident views).
  int excluded_frames = 0;
  std::vector<std::string> warnings;
};

// Labels every frame of the session from its event log and pose tracks. The
// hand is the actor's dominant-side wrist, triangulated per frame; marker
// positions come from the room table.
SessionAnnotation AnnotateFrames(const sim::SessionBundle& session,
                                 const AnnotationOptions& options = {});

}  // namespace deepoint::anno

#endif  // DEEPOINT_ANNO_ANNOTATE_H_
