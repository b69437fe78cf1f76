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

#include "deepoint/geometry/calibration_io.h"

#include "deepoint/common/error.h"

namespace deepoint::geometry {

using nlohmann::json;

json CameraToJson(const CameraModel& camera) {
  json j;
  j["id"] = camera.camera_id;
  j["image_size"] = {camera.width, camera.height};
  j["intrinsics"] = {{"fx", camera.intrinsics.fx},
                     {"fy", camera.intrinsics.fy},
                     {"cx", camera.intrinsics.cx},
                     {"cy", camera.intrinsics.cy}};
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(camera.rotation(r, c));
  }
  j["rotation"] = rot;
  j["translation"] = {camera.translation.x(), camera.translation.y(),
                      camera.translation.z()};
  return j;
}

CameraModel CameraFromJson(const json& j) {
  CameraModel cam;
  try {
    cam.camera_id = j.at("id").get<std::string>();
    const auto& size = j.at("image_size");
    if (!size.is_array() || size.size() != 2) {
      throw Error(ErrorCode::kSchemaError, "image_size must be [w, h]");
    }
    cam.width = size[0].get<int>();
    cam.height = size[1].get<int>();
    const auto& k = j.at("intrinsics");
    cam.intrinsics.fx = k.at("fx").get<double>();
    cam.intrinsics.fy = k.at("fy").get<double>();
    cam.intrinsics.cx = k.at("cx").get<double>();
    cam.intrinsics.cy = k.at("cy").get<double>();
    const auto& rot = j.at("rotation");
    if (!rot.is_array() || rot.size() != 9) {
      throw Error(ErrorCode::kSchemaError, "rotation must have 9 numbers");
    }
    for (int i = 0; i < 9; ++i) cam.rotation(i / 3, i % 3) = rot[i].get<double>();
    const auto& t = j.at("translation");
    if (!t.is_array() || t.size() != 3) {
      throw Error(ErrorCode::kSchemaError, "translation must have 3 numbers");
    }
    for (int i = 0; i < 3; ++i) cam.translation(i) = t[i].get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("camera: ") + e.what());
  }
  cam.Validate();
  return cam;
}

json RigToJson(const CameraRig& rig) {
  json cams = json::array();
  for (const auto& cam : rig.cameras()) cams.push_back(CameraToJson(cam));
  return json{{"cameras", cams}};
}

CameraRig RigFromJson(const json& j) {
  if (!j.contains("cameras") || !j["cameras"].is_array()) {
    throw Error(ErrorCode::kSchemaError, "missing 'cameras' array");
  }
  std::vector<CameraModel> cams;
  for (const auto& c : j["cameras"]) cams.push_back(CameraFromJson(c));
  return CameraRig(std::move(cams));
}

}  // namespace deepoint::geometry
