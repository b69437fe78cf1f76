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

#include "deepoint/geometry/geometry.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "deepoint/common/error.h"

namespace deepoint::geometry {
namespace {

constexpr double kRadToDeg = 180.0 / M_PI;
constexpr double kDegToRad = M_PI / 180.0;

double MollweideResidual(double theta, double pitch) {
  return 2.0 * theta + std::sin(2.0 * theta) - M_PI * std::sin(pitch);
}

}  // namespace

UnitVec3 UnitVec3::Normalize(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot normalize a zero or non-finite vector");
  }
  return UnitVec3(v / n);
}

UnitVec3 UnitVec3::FromUnit(const Eigen::Vector3d& v) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) >= kNormTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "vector is not unit length");
  }
  return UnitVec3(v);
}

Eigen::Vector2d Project(const CameraModel& camera,
                        const Eigen::Vector3d& point) {
  const Eigen::Vector3d pc = camera.ToCamera(point);
  if (!(pc.z() > 1e-9)) {
    throw Error(ErrorCode::kNonPositiveDepth,
                "point behind camera '" + camera.camera_id + "'");
  }
  const auto& k = camera.intrinsics;
  return {k.fx * pc.x() / pc.z() + k.cx, k.fy * pc.y() / pc.z() + k.cy};
}

TriangulationResult Triangulate(std::span<const Observation2D> observations,
                                const CameraRig& rig, double min_confidence) {
  std::vector<const Observation2D*> used;
  used.reserve(observations.size());
  for (const auto& obs : observations) {
    if (obs.confidence >= min_confidence && obs.confidence > 0.0) {
      used.push_back(&obs);
    }
  }
  if (used.size() < 2) {
    throw Error(ErrorCode::kInsufficientViews,
                std::to_string(used.size()) + " confident view(s), need 2");
  }

  Eigen::MatrixXd design(2 * used.size(), 4);
  for (std::size_t i = 0; i < used.size(); ++i) {
    const CameraModel& cam = rig.Get(used[i]->camera_id);
    const auto& k = cam.intrinsics;
    const double xn = (used[i]->pixel.x() - k.cx) / k.fx;
    const double yn = (used[i]->pixel.y() - k.cy) / k.fy;
    Eigen::Matrix<double, 3, 4> pose;
    pose.leftCols<3>() = cam.rotation;
    pose.col(3) = cam.translation;
    const double w = used[i]->confidence;
    design.row(2 * i) = w * (xn * pose.row(2) - pose.row(0));
    design.row(2 * i + 1) = w * (yn * pose.row(2) - pose.row(1));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  // The null direction is the solution; the system is well posed only if the
  // remaining three directions are well determined.
  if (!(s(2) > 0.0) || s(0) / s(2) > 1e12) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "rank-deficient triangulation system");
  }
  const Eigen::Vector4d x = svd.matrixV().col(3);
  if (std::abs(x(3)) < 1e-12 * x.head<3>().norm()) {
    throw Error(ErrorCode::kDegenerateGeometry, "point at infinity");
  }

  TriangulationResult result;
  result.point = x.head<3>() / x(3);
  result.views_used = static_cast<int>(used.size());
  double total = 0.0;
  for (const auto* obs : used) {
    const CameraModel& cam = rig.Get(obs->camera_id);
    const Eigen::Vector3d pc = cam.ToCamera(result.point);
    if (pc.z() <= 1e-9) {
      throw Error(ErrorCode::kDegenerateGeometry,
                  "triangulated point behind camera '" + cam.camera_id + "'");
    }
    total += (Project(cam, result.point) - obs->pixel).norm();
  }
  result.mean_reprojection_px = total / static_cast<double>(used.size());
  return result;
}

// Same angle as arccos(clamp(u·v)); the atan2 form keeps full precision
// near 0° and 180° and is exactly 0 for identical inputs.
// Arguments are put in a canonical order so the result is bitwise symmetric.
double AngularErrorDeg(const UnitVec3& u, const UnitVec3& v) {
  const auto less = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(),
                                        b.data() + 3);
  };
  const Eigen::Vector3d& a = less(u.vec(), v.vec()) ? u.vec() : v.vec();
  const Eigen::Vector3d& b = less(u.vec(), v.vec()) ? v.vec() : u.vec();
  return std::atan2(a.cross(b).norm(), a.dot(b)) * kRadToDeg;
}

UnitVec3 DirBetween(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d d = to - from;
  const double n = d.norm();
  if (!(n > 1e-9)) {
    throw Error(ErrorCode::kCoincidentPoints,
                "direction endpoints coincide");
  }
  return UnitVec3::Normalize(d / n);
}

UnitVec3 WorldToCameraDir(const CameraModel& camera, const UnitVec3& d) {
  return UnitVec3::FromUnit(camera.rotation * d.vec());
}

UnitVec3 CameraToWorldDir(const CameraModel& camera, const UnitVec3& d) {
  return UnitVec3::FromUnit(camera.rotation.transpose() * d.vec());
}

YawPitch DirToYawPitch(const UnitVec3& d) {
  YawPitch yp;
  yp.pitch_deg = std::asin(std::clamp(d.z(), -1.0, 1.0)) * kRadToDeg;
  const double horizontal = std::hypot(d.x(), d.y());
  if (horizontal < 1e-12) {
    yp.yaw_deg = 0.0;
    return yp;
  }
  yp.yaw_deg = std::atan2(d.y(), d.x()) * kRadToDeg;
  if (yp.yaw_deg <= -180.0) yp.yaw_deg = 180.0;
  return yp;
}

UnitVec3 YawPitchToDir(double yaw_deg, double pitch_deg) {
  const double yaw = yaw_deg * kDegToRad;
  const double pitch = pitch_deg * kDegToRad;
  return UnitVec3::Normalize(Eigen::Vector3d(std::cos(pitch) * std::cos(yaw),
                                             std::cos(pitch) * std::sin(yaw),
                                             std::sin(pitch)));
}

MollweidePoint Mollweide(double yaw_rad, double pitch_rad) {
  MollweidePoint out;
  double theta = pitch_rad;
  if (std::abs(pitch_rad) > 89.9 * kDegToRad) {
    // The residual is increasing in theta on [-pi/2, pi/2].
    double lo = -M_PI / 2.0;
    double hi = M_PI / 2.0;
    for (out.iterations = 0; out.iterations < 200 && hi - lo > 1e-15;
         ++out.iterations) {
      const double mid = 0.5 * (lo + hi);
      if (MollweideResidual(mid, pitch_rad) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    theta = 0.5 * (lo + hi);
  } else {
    out.converged = false;
    for (out.iterations = 0; out.iterations < 50; ++out.iterations) {
      const double f = MollweideResidual(theta, pitch_rad);
      const double df = 2.0 + 2.0 * std::cos(2.0 * theta);
      const double step = f / df;
      theta -= step;
      if (std::abs(step) < 1e-12) {
        out.converged = true;
        ++out.iterations;
        break;
      }
    }
  }
  out.x = (2.0 * std::sqrt(2.0) / M_PI) * yaw_rad * std::cos(theta);
  out.y = std::sqrt(2.0) * std::sin(theta);
  return out;
}

}  // namespace deepoint::geometry
