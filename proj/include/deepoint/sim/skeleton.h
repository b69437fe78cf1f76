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

#ifndef DEEPOINT_SIM_SKELETON_H_
#define DEEPOINT_SIM_SKELETON_H_

#include <array>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace deepoint::sim {

// COCO keypoint order.
enum Joint : int {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

inline constexpr int kNumJoints = 17;

const char* JointName(int joint);

using Skeleton = std::array<Eigen::Vector3d, kNumJoints>;

// Standard COCO limb connectivity (used for rasterization).
inline constexpr std::array<std::pair<int, int>, 19> kCocoBones = {{
    {kLeftAnkle, kLeftKnee},       {kLeftKnee, kLeftHip},
    {kRightAnkle, kRightKnee},     {kRightKnee, kRightHip},
    {kLeftHip, kRightHip},         {kLeftShoulder, kLeftHip},
    {kRightShoulder, kRightHip},   {kLeftShoulder, kRightShoulder},
    {kLeftShoulder, kLeftElbow},   {kRightShoulder, kRightElbow},
    {kLeftElbow, kLeftWrist},      {kRightElbow, kRightWrist},
    {kLeftEye, kRightEye},         {kNose, kLeftEye},
    {kNose, kRightEye},            {kLeftEye, kLeftEar},
    {kRightEye, kRightEar},        {kLeftEar, kLeftShoulder},
    {kRightEar, kRightShoulder},
}};

enum class Side { kLeft, kRight };

const char* SideName(Side side);
// Accepts "left" / "right"; throws kSchemaError otherwise.
Side SideFromName(const std::string& name);

inline int WristOf(Side s) { return s == Side::kLeft ? kLeftWrist : kRightWrist; }
inline int ElbowOf(Side s) { return s == Side::kLeft ? kLeftElbow : kRightElbow; }
inline int ShoulderOf(Side s) {
  return s == Side::kLeft ? kLeftShoulder : kRightShoulder;
}

// Axis-aligned box.
struct Box {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();

  bool Contains(const Eigen::Vector3d& p, double eps = 1e-9) const;
  // True if the closed segment [a, b] passes through the box interior
  // shrunk by `shrink` on every side.
  bool SegmentIntersects(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         double shrink = 0.0) const;
};

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_SKELETON_H_
