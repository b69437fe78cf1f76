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

#ifndef DEEPOINT_GEOMETRY_GEOMETRY_H_
#define DEEPOINT_GEOMETRY_GEOMETRY_H_

#include <span>
#include <string>

#include <Eigen/Core>

#include "deepoint/geometry/camera.h"
#include "deepoint/geometry/unit_vec.h"

// World frame convention used throughout the library: right-handed, z up,
// yaw measured about +z starting at +x (counter-clockwise seen from above),
// pitch positive upward.
namespace deepoint::geometry {

struct Observation2D {
  std::string camera_id;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  double confidence = 0.0;  // in [0, 1]; 0 means undetected
};

inline constexpr double kDefaultMinConfidence = 0.5;

// Pinhole projection. Throws kNonPositiveDepth when the camera-frame depth is
// at most 1e-9.
Eigen::Vector2d Project(const CameraModel& camera,
                        const Eigen::Vector3d& point);

struct TriangulationResult {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  double mean_reprojection_px = 0.0;
  int views_used = 0;
};

// Confidence-weighted linear (DLT) triangulation. Observations below
// `min_confidence` are dropped first. Rows are formed in normalized image
// coordinates and scaled by the observation confidence.
//
// Throws kInsufficientViews when fewer than two observations survive the
// filter and kDegenerateGeometry when the system is rank deficient
// (condition number > 1e12) or the solution lies at infinity.
TriangulationResult Triangulate(std::span<const Observation2D> observations,
                                const CameraRig& rig,
                                double min_confidence = kDefaultMinConfidence);

// Angle between two directions in degrees, in [0, 180].
double AngularErrorDeg(const UnitVec3& u, const UnitVec3& v);

// Throws kCoincidentPoints when ‖to − from‖ ≤ 1e-9.
UnitVec3 DirBetween(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

UnitVec3 WorldToCameraDir(const CameraModel& camera, const UnitVec3& d);
UnitVec3 CameraToWorldDir(const CameraModel& camera, const UnitVec3& d);

struct YawPitch {
  double yaw_deg = 0.0;    // (-180, 180]
  double pitch_deg = 0.0;  // [-90, 90]
};

// Yaw is 0 at the poles by convention.
YawPitch DirToYawPitch(const UnitVec3& d);
UnitVec3 YawPitchToDir(double yaw_deg, double pitch_deg);

struct MollweidePoint {
  double x = 0.0;
  double y = 0.0;
  bool converged = true;
  int iterations = 0;
};

// Unit-radius Mollweide projection of (yaw, pitch) given in radians. The
// auxiliary angle is found by Newton iteration (tolerance 1e-12, at most 50
// steps, started at the pitch); within 0.1° of a pole, where the Newton
// derivative vanishes, bisection is used instead. A non-converged solve
// returns the best iterate with converged = false.
MollweidePoint Mollweide(double yaw_rad, double pitch_rad);

}  // namespace deepoint::geometry

#endif  // DEEPOINT_GEOMETRY_GEOMETRY_H_
