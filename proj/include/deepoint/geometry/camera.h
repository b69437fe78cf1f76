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

#ifndef DEEPOINT_GEOMETRY_CAMERA_H_
#define DEEPOINT_GEOMETRY_CAMERA_H_

#include <string>
#include <vector>

#include <Eigen/Core>

namespace deepoint::geometry {

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Calibrated pinhole camera. Camera frame: x right, y down, z along the
// optical axis. A world point X maps to camera coordinates R * X + t.
struct CameraModel {
  std::string camera_id;
  Intrinsics intrinsics;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // world -> camera
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  int width = 1;
  int height = 1;

  // Throws kInvalidArgument when an invariant is violated: R orthonormal with
  // det +1 (‖RᵀR − I‖∞ < 1e-9), fx, fy > 0, principal point inside the image.
  void Validate() const;

  Eigen::Vector3d Center() const { return -rotation.transpose() * translation; }
  Eigen::Vector3d ToCamera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }
  Eigen::Matrix3d K() const;

  // Camera placed at `center` with its optical axis toward `target`. `up` is
  // the world up direction (+z); image y points away from it.
  static CameraModel LookAt(std::string id, const Eigen::Vector3d& center,
                            const Eigen::Vector3d& target,
                            const Intrinsics& intrinsics, int width,
                            int height);
};

// The set of cameras of one room, looked up by id.
class CameraRig {
 public:
  CameraRig() = default;
  explicit CameraRig(std::vector<CameraModel> cameras);

  // Throws kInvalidArgument for an unknown id.
  const CameraModel& Get(const std::string& camera_id) const;
  const CameraModel* Find(const std::string& camera_id) const;

  const std::vector<CameraModel>& cameras() const { return cameras_; }
  std::size_t size() const { return cameras_.size(); }

 private:
  std::vector<CameraModel> cameras_;
};

}  // namespace deepoint::geometry

#endif  // DEEPOINT_GEOMETRY_CAMERA_H_
