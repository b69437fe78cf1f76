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

#include "deepoint/sim/skeleton.h"

#include <algorithm>
#include <cmath>

#include "deepoint/common/error.h"

namespace deepoint::sim {

const char* JointName(int joint) {
  static constexpr const char* kNames[kNumJoints] = {
      "nose",           "left_eye",    "right_eye",  "left_ear",
      "right_ear",      "left_shoulder", "right_shoulder", "left_elbow",
      "right_elbow",    "left_wrist",  "right_wrist", "left_hip",
      "right_hip",      "left_knee",   "right_knee", "left_ankle",
      "right_ankle"};
  return (joint >= 0 && joint < kNumJoints) ? kNames[joint] : "invalid";
}

const char* SideName(Side side) {
  return side == Side::kLeft ? "left" : "right";
}

Side SideFromName(const std::string& name) {
  if (name == "left") return Side::kLeft;
  if (name == "right") return Side::kRight;
  throw Error(ErrorCode::kSchemaError, "side must be 'left' or 'right'");
}

bool Box::Contains(const Eigen::Vector3d& p, double eps) const {
  return (p.array() >= min.array() - eps).all() &&
         (p.array() <= max.array() + eps).all();
}

// Slab test.
bool Box::SegmentIntersects(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                            double shrink) const {
  const Eigen::Vector3d lo = min.array() + shrink;
  const Eigen::Vector3d hi = max.array() - shrink;
  if ((lo.array() >= hi.array()).any()) return false;
  const Eigen::Vector3d d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d(i)) < 1e-15) {
      if (a(i) <= lo(i) || a(i) >= hi(i)) return false;
      continue;
    }
    double ta = (lo(i) - a(i)) / d(i);
    double tb = (hi(i) - a(i)) / d(i);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 >= t1) return false;
  }
  return true;
}

}  // namespace deepoint::sim
