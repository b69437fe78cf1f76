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

#ifndef DEEPOINT_SIM_OBSERVE_H_
#define DEEPOINT_SIM_OBSERVE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/geometry/camera.h"
#include "deepoint/geometry/geometry.h"
#include "deepoint/sim/room.h"
#include "deepoint/sim/session.h"

namespace deepoint::sim {

// Maps visibility to detector confidence. Visible joints score
// max(min_visible, 1 - depth_falloff_per_m * max(0, depth - falloff_start_m));
// occluded joints score `occluded`.
struct ConfidenceDecay {
  double depth_falloff_per_m = 0.03;
  double falloff_start_m = 4.0;
  double min_visible = 0.7;
  double occluded = 0.2;
};

struct NoiseModel {
  double pixel_sigma = 2.0;
  double dropout_prob = 0.02;
  bool occlusion_enabled = true;
  ConfidenceDecay confidence_decay;

  // Exact projections, confidence 1 for every joint in view.
  static NoiseModel Noiseless();
  // Throws kInvalidArgument.
  void Validate() const;
};

struct Keypoint {
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double confidence = 0.0;  // 0 = undetected
};

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  Eigen::Vector2d Center() const { return {x + width / 2, y + height / 2}; }
  bool Empty() const { return width <= 0.0 || height <= 0.0; }
};

struct PoseFrame {
  std::array<Keypoint, kNumJoints> keypoints;
  BBox bbox;
};

// Per-camera 2D pose stream of the single tracked person.
struct PoseTrack {
  std::string camera_id;
  std::vector<PoseFrame> frames;

  geometry::Observation2D Observation(int frame, int joint) const;
};

// Projects every joint, adds isotropic Gaussian pixel noise, lowers the
// confidence of joints hidden behind an obstacle or behind the actor's torso,
// and zeroes confidence with probability dropout_prob. Joints behind the
// camera or outside the image are undetected (confidence 0). Deterministic
// in `seed`.
PoseTrack Observe(const SessionTruth& truth, const RoomSpec& room,
                  const geometry::CameraModel& camera, const NoiseModel& noise,
                  uint64_t seed);

// True if the segment from `eye` to `joint` crosses the torso quad spanned
// by the shoulders and hips of `skeleton`.
bool TorsoOccludes(const Skeleton& skeleton, const Eigen::Vector3d& eye,
                   int joint);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_OBSERVE_H_
