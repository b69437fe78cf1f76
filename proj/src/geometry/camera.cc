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

#include "deepoint/geometry/camera.h"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "deepoint/common/error.h"

namespace deepoint::geometry {

void CameraModel::Validate() const {
  const Eigen::Matrix3d gram =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (gram.cwiseAbs().maxCoeff() >= 1e-9 ||
      std::abs(rotation.determinant() - 1.0) >= 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera '" + camera_id + "': rotation is not a proper rotation");
  }
  if (!(intrinsics.fx > 0.0) || !(intrinsics.fy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera '" + camera_id + "': focal lengths must be positive");
  }
  if (width <= 0 || height <= 0 || intrinsics.cx < 0.0 ||
      intrinsics.cx >= width || intrinsics.cy < 0.0 ||
      intrinsics.cy >= height) {
    std::ostringstream msg;
    msg << "camera '" << camera_id << "': principal point (" << intrinsics.cx
        << ", " << intrinsics.cy << ") outside image " << width << "x"
        << height;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  if (!translation.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "camera '" + camera_id + "': non-finite translation");
  }
}

Eigen::Matrix3d CameraModel::K() const {
  Eigen::Matrix3d k;
  k << intrinsics.fx, 0.0, intrinsics.cx,  //
      0.0, intrinsics.fy, intrinsics.cy,   //
      0.0, 0.0, 1.0;
  return k;
}

CameraModel CameraModel::LookAt(std::string id, const Eigen::Vector3d& center,
                                const Eigen::Vector3d& target,
                                const Intrinsics& intrinsics, int width,
                                int height) {
  const Eigen::Vector3d forward = (target - center).normalized();
  Eigen::Vector3d up(0.0, 0.0, 1.0);
  if (std::abs(forward.dot(up)) > 0.999) up = Eigen::Vector3d(0.0, 1.0, 0.0);
  const Eigen::Vector3d right = forward.cross(up).normalized();
  const Eigen::Vector3d down = forward.cross(right);
  CameraModel cam;
  cam.camera_id = std::move(id);
  cam.intrinsics = intrinsics;
  cam.rotation.row(0) = right.transpose();
  cam.rotation.row(1) = down.transpose();
  cam.rotation.row(2) = forward.transpose();
  cam.translation = -cam.rotation * center;
  cam.width = width;
  cam.height = height;
  return cam;
}

CameraRig::CameraRig(std::vector<CameraModel> cameras)
    : cameras_(std::move(cameras)) {
  for (std::size_t i = 0; i < cameras_.size(); ++i) {
    cameras_[i].Validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (cameras_[j].camera_id == cameras_[i].camera_id) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate camera id '" + cameras_[i].camera_id + "'");
      }
    }
  }
}

const CameraModel* CameraRig::Find(const std::string& camera_id) const {
  for (const auto& cam : cameras_) {
    if (cam.camera_id == camera_id) return &cam;
  }
  return nullptr;
}

const CameraModel& CameraRig::Get(const std::string& camera_id) const {
  const CameraModel* cam = Find(camera_id);
  if (cam == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown camera id '" + camera_id + "'");
  }
  return *cam;
}

}  // namespace deepoint::geometry
