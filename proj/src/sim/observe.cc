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

#include "deepoint/sim/observe.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"

namespace deepoint::sim {
namespace {

using Eigen::Vector3d;

// Möller–Trumbore; true if segment p->q crosses the triangle strictly
// between its endpoints.
bool SegmentHitsTriangle(const Vector3d& p, const Vector3d& q,
                         const Vector3d& a, const Vector3d& b,
                         const Vector3d& c) {
  const Vector3d d = q - p;
  const Vector3d e1 = b - a;
  const Vector3d e2 = c - a;
  const Vector3d h = d.cross(e2);
  const double det = e1.dot(h);
  if (std::abs(det) < 1e-12) return false;
  const double inv = 1.0 / det;
  const Vector3d s = p - a;
  const double u = inv * s.dot(h);
  if (u < 0.0 || u > 1.0) return false;
  const Vector3d qv = s.cross(e1);
  const double v = inv * d.dot(qv);
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = inv * e2.dot(qv);
  return t > 1e-6 && t < 1.0 - 1e-6;
}

bool IsTorsoCorner(int joint) {
  return joint == kLeftShoulder || joint == kRightShoulder ||
         joint == kLeftHip || joint == kRightHip;
}

}  // namespace

NoiseModel NoiseModel::Noiseless() {
  NoiseModel m;
  m.pixel_sigma = 0.0;
  m.dropout_prob = 0.0;
  m.occlusion_enabled = false;
  m.confidence_decay.depth_falloff_per_m = 0.0;
  return m;
}

void NoiseModel::Validate() const {
  if (!(pixel_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pixel_sigma must be >= 0");
  }
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dropout_prob must lie in [0, 1]");
  }
  const auto& c = confidence_decay;
  if (!(c.occluded >= 0.0 && c.occluded <= 1.0 && c.min_visible >= 0.0 &&
        c.min_visible <= 1.0 && c.depth_falloff_per_m >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid confidence decay");
  }
}

geometry::Observation2D PoseTrack::Observation(int frame, int joint) const {
  const Keypoint& kp = frames.at(frame).keypoints.at(joint);
  return {camera_id, kp.pixel, kp.confidence};
}

bool TorsoOccludes(const Skeleton& s, const Vector3d& eye, int joint) {
  if (IsTorsoCorner(joint)) return false;
  const Vector3d& ls = s[kLeftShoulder];
  const Vector3d& rs = s[kRightShoulder];
  const Vector3d& lh = s[kLeftHip];
  const Vector3d& rh = s[kRightHip];
  return SegmentHitsTriangle(eye, s[joint], ls, rs, rh) ||
         SegmentHitsTriangle(eye, s[joint], ls, rh, lh);
}

PoseTrack Observe(const SessionTruth& truth, const RoomSpec& room,
                  const geometry::CameraModel& camera, const NoiseModel& noise,
                  uint64_t seed) {
  noise.Validate();
  if (room.cameras.Find(camera.camera_id) == nullptr ||
      truth.room_id != room.room_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera '" + camera.camera_id + "' does not belong to room '" +
                    truth.room_id + "'");
  }
  Rng rng(DeriveSeed(seed, truth.session_id, camera.camera_id));
  const Vector3d eye = camera.Center();
  const auto& decay = noise.confidence_decay;

  PoseTrack track;
  track.camera_id = camera.camera_id;
  track.frames.resize(truth.skeletons.size());
  for (std::size_t f = 0; f < truth.skeletons.size(); ++f) {
    const Skeleton& s = truth.skeletons[f];
    PoseFrame& out = track.frames[f];
    for (int j = 0; j < kNumJoints; ++j) {
      // Draw every random number unconditionally so streams stay aligned
      // across noise settings.
      const double nx = Normal(rng, 0.0, 1.0);
      const double ny = Normal(rng, 0.0, 1.0);
      const double drop = Uniform(rng, 0.0, 1.0);
      Keypoint& kp = out.keypoints[j];
      const Vector3d pc = camera.ToCamera(s[j]);
      if (pc.z() <= 0.05) {
        kp = Keypoint{};
        continue;
      }
      kp.pixel = geometry::Project(camera, s[j]);
      if (noise.pixel_sigma > 0.0) {
        kp.pixel += noise.pixel_sigma * Eigen::Vector2d(nx, ny);
      }
      if (kp.pixel.x() < 0.0 || kp.pixel.x() > camera.width - 1 ||
          kp.pixel.y() < 0.0 || kp.pixel.y() > camera.height - 1) {
        kp = Keypoint{};
        continue;
      }
      bool occluded = false;
      if (noise.occlusion_enabled) {
        for (const Box& b : room.obstacles) {
          if (b.SegmentIntersects(eye, s[j], 0.01)) occluded = true;
        }
        if (!occluded) occluded = TorsoOccludes(s, eye, j);
      }
      if (occluded) {
        kp.confidence = decay.occluded;
      } else {
        const double depth = pc.z();
        kp.confidence = std::max(
            decay.min_visible,
            1.0 - decay.depth_falloff_per_m *
                      std::max(0.0, depth - decay.falloff_start_m));
        kp.confidence = std::min(kp.confidence, 1.0);
      }
      if (drop < noise.dropout_prob) kp.confidence = 0.0;
    }

    // Box around the detected joints, grown by 10% (and upward for the head).
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Keypoint& kp : out.keypoints) {
      if (kp.confidence <= 0.0) continue;
      x0 = std::min(x0, kp.pixel.x());
      y0 = std::min(y0, kp.pixel.y());
      x1 = std::max(x1, kp.pixel.x());
      y1 = std::max(y1, kp.pixel.y());
    }
    if (x1 > x0 && y1 > y0) {
      const double w = x1 - x0, h = y1 - y0;
      const double bx0 = std::max(0.0, x0 - 0.1 * w);
      const double by0 = std::max(0.0, y0 - 0.15 * h);
      const double bx1 = std::min<double>(camera.width - 1, x1 + 0.1 * w);
      const double by1 = std::min<double>(camera.height - 1, y1 + 0.05 * h);
      out.bbox = BBox{bx0, by0, bx1 - bx0, by1 - by0};
    }
  }
  return track;
}

}  // namespace deepoint::sim
