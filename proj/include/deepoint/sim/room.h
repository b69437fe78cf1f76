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

#ifndef DEEPOINT_SIM_ROOM_H_
#define DEEPOINT_SIM_ROOM_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/geometry/camera.h"
#include "deepoint/sim/skeleton.h"

namespace deepoint::sim {

struct Marker {
  std::string marker_id;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

struct RoomSpec {
  std::string room_id;
  Box bounds;
  std::vector<Marker> markers;
  geometry::CameraRig cameras;
  std::vector<Box> obstacles;

  // ≥2 cameras, ≥1 marker, markers and camera centers inside bounds, unique
  // marker ids. Throws kInvalidArgument.
  void Validate() const;
  // Throws kInvalidArgument for an unknown id.
  const Marker& GetMarker(const std::string& marker_id) const;
  const Marker* FindMarker(const std::string& marker_id) const;
};

enum class RoomLayout { kLivingRoom, kOffice };

struct RoomOptions {
  RoomLayout layout = RoomLayout::kLivingRoom;
  int num_cameras = 6;
  int num_markers = 40;
  int image_width = 960;
  int image_height = 540;
  double focal_px = 560.0;
};

// An 8 m x 8 m x 2.7 m room with furniture boxes, markers scattered over the
// walls, floor, ceiling, and furniture tops, and cameras spread over ceiling,
// mid-wall, and floor mounts looking toward the room center.
RoomSpec MakeRoom(const std::string& room_id, const RoomOptions& options,
                  uint64_t seed);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_ROOM_H_
