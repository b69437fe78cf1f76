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

#ifndef DEEPOINT_GEOMETRY_CALIBRATION_IO_H_
#define DEEPOINT_GEOMETRY_CALIBRATION_IO_H_

#include <json.hpp>

#include "deepoint/geometry/camera.h"

namespace deepoint::geometry {

// Calibration document entry, one per camera:
//   {"id": str, "image_size": [w, h],
//    "intrinsics": {"fx": .., "fy": .., "cx": .., "cy": ..},
//    "rotation": [9 numbers, row-major, world->camera],
//    "translation": [3 numbers, meters]}
nlohmann::json CameraToJson(const CameraModel& camera);
// Throws kSchemaError on missing/ill-typed fields; validates the camera.
CameraModel CameraFromJson(const nlohmann::json& j);

// {"cameras": [camera...]}
nlohmann::json RigToJson(const CameraRig& rig);
CameraRig RigFromJson(const nlohmann::json& j);

}  // namespace deepoint::geometry

#endif  // DEEPOINT_GEOMETRY_CALIBRATION_IO_H_
