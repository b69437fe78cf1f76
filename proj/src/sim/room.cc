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

#include "deepoint/sim/room.h"

#include <cmath>
#include <set>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"

namespace deepoint::sim {
namespace {

constexpr double kRoomSize = 8.0;
constexpr double kRoomHeight = 2.7;

Box MakeBox(double x0, double y0, double z0, double x1, double y1, double z1) {
  return Box{Eigen::Vector3d(x0, y0, z0), Eigen::Vector3d(x1, y1, z1)};
}

std::vector<Box> Furniture(RoomLayout layout) {
  if (layout == RoomLayout::kLivingRoom) {
    return {
        MakeBox(0.3, 5.6, 0.0, 2.6, 6.5, 0.8),  // sofa
        MakeBox(3.2, 3.4, 0.0, 4.4, 4.2, 0.45), // coffee table
        MakeBox(5.8, 0.2, 0.0, 7.8, 0.8, 0.9),  // kitchen counter
        MakeBox(6.8, 5.0, 0.0, 7.6, 5.6, 1.8),  // shelf
    };
  }
  return {
      MakeBox(1.0, 1.0, 0.0, 2.6, 1.8, 0.72),  // desk
      MakeBox(5.2, 1.0, 0.0, 6.8, 1.8, 0.72),  // desk
      MakeBox(1.0, 5.6, 0.0, 2.6, 6.4, 0.72),  // desk
      MakeBox(3.4, 7.7, 0.6, 5.4, 7.8, 1.9),   // whiteboard
      MakeBox(6.9, 4.0, 0.0, 7.7, 5.2, 1.4),   // cabinet
  };
}

Marker RandomMarker(int index, Rng& rng, const std::vector<Box>& furniture) {
  Marker m;
  m.marker_id = "m" + std::to_string(index);
  const double u = Uniform(rng, 0.0, 1.0);
  const double a = Uniform(rng, 0.3, kRoomSize - 0.3);
  if (u < 0.55) {  // walls
    const int wall = static_cast<int>(Uniform(rng, 0.0, 4.0));
    const double z = Uniform(rng, 0.2, kRoomHeight - 0.2);
    switch (wall) {
      case 0: m.position = {a, 0.0, z}; break;
      case 1: m.position = {a, kRoomSize, z}; break;
      case 2: m.position = {0.0, a, z}; break;
      default: m.position = {kRoomSize, a, z}; break;
    }
  } else if (u < 0.7) {  // floor
    m.position = {a, Uniform(rng, 0.3, kRoomSize - 0.3), 0.0};
  } else if (u < 0.85) {  // ceiling
    m.position = {a, Uniform(rng, 0.3, kRoomSize - 0.3), kRoomHeight};
  } else {  // furniture top
    const Box& b = furniture[static_cast<std::size_t>(
        Uniform(rng, 0.0, static_cast<double>(furniture.size())))];
    m.position = {Uniform(rng, b.min.x() + 0.05, b.max.x() - 0.05),
                  Uniform(rng, b.min.y() + 0.05, b.max.y() - 0.05), b.max.z()};
  }
  return m;
}

}  // namespace

void RoomSpec::Validate() const {
  if (cameras.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "room '" + room_id + "' needs at least 2 cameras");
  }
  if (markers.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "room '" + room_id + "' needs at least 1 marker");
  }
  std::set<std::string> ids;
  for (const auto& m : markers) {
    if (!bounds.Contains(m.position)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "marker '" + m.marker_id + "' outside room bounds");
    }
    if (!ids.insert(m.marker_id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate marker id '" + m.marker_id + "'");
    }
  }
  for (const auto& cam : cameras.cameras()) {
    if (!bounds.Contains(cam.Center())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "camera '" + cam.camera_id + "' outside room bounds");
    }
  }
}

const Marker* RoomSpec::FindMarker(const std::string& marker_id) const {
  for (const auto& m : markers) {
    if (m.marker_id == marker_id) return &m;
  }
  return nullptr;
}

const Marker& RoomSpec::GetMarker(const std::string& marker_id) const {
  const Marker* m = FindMarker(marker_id);
  if (m == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown marker '" + marker_id + "' in room '" + room_id + "'");
  }
  return *m;
}

RoomSpec MakeRoom(const std::string& room_id, const RoomOptions& options,
                  uint64_t seed) {
  if (options.num_cameras < 2 || options.num_markers < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "room needs >= 2 cameras and >= 1 marker");
  }
  Rng rng(DeriveSeed(seed, "room", room_id));
  RoomSpec room;
  room.room_id = room_id;
  room.bounds = MakeBox(0, 0, 0, kRoomSize, kRoomSize, kRoomHeight);
  room.obstacles = Furniture(options.layout);
  for (int i = 0; i < options.num_markers; ++i) {
    room.markers.push_back(RandomMarker(i, rng, room.obstacles));
  }

  // Mount heights cycle ceiling / mid-wall / floor; azimuths are spread
  // evenly around the room with a random phase so both layouts differ.
  const double mounts[3] = {kRoomHeight - 0.1, 1.3, 0.15};
  const double phase = Uniform(rng, 0.0, 2.0 * M_PI);
  const Eigen::Vector3d center(kRoomSize / 2, kRoomSize / 2, 1.0);
  const geometry::Intrinsics k{options.focal_px, options.focal_px,
                               options.image_width / 2.0,
                               options.image_height / 2.0};
  std::vector<geometry::CameraModel> cams;
  for (int i = 0; i < options.num_cameras; ++i) {
    const double a = phase + 2.0 * M_PI * i / options.num_cameras +
                     Uniform(rng, -0.15, 0.15);
    // Project the azimuth ray onto the room boundary, 0.1 m inside.
    const double dx = std::cos(a);
    const double dy = std::sin(a);
    const double half = kRoomSize / 2 - 0.1;
    const double s = half / std::max(std::abs(dx), std::abs(dy));
    Eigen::Vector3d c(center.x() + s * dx, center.y() + s * dy,
                      mounts[i % 3]);
    const Eigen::Vector3d target(center.x() + Uniform(rng, -0.5, 0.5),
                                 center.y() + Uniform(rng, -0.5, 0.5), 1.0);
    cams.push_back(geometry::CameraModel::LookAt(
        "cam" + std::to_string(i), c, target, k, options.image_width,
        options.image_height));
  }
  room.cameras = geometry::CameraRig(std::move(cams));
  room.Validate();
  return room;
}

}  // namespace deepoint::sim
