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

#ifndef DEEPOINT_GEOMETRY_UNIT_VEC_H_
#define DEEPOINT_GEOMETRY_UNIT_VEC_H_

#include <Eigen/Core>

namespace deepoint::geometry {

// A direction in R^3. Construction enforces |‖v‖ - 1| < 1e-9.
class UnitVec3 {
 public:
  static constexpr double kNormTolerance = 1e-9;

  // +z; a valid default so containers of directions are easy to build.
  UnitVec3() : v_(0.0, 0.0, 1.0) {}

  // Normalizes v. Throws kInvalidArgument if ‖v‖ < 1e-12 or v is not finite.
  static UnitVec3 Normalize(const Eigen::Vector3d& v);
  // Accepts v as-is. Throws kInvalidArgument unless v is already unit length.
  static UnitVec3 FromUnit(const Eigen::Vector3d& v);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double Dot(const UnitVec3& o) const { return v_.dot(o.v_); }

  bool operator==(const UnitVec3& o) const { return v_ == o.v_; }

 private:
  explicit UnitVec3(const Eigen::Vector3d& v) : v_(v) {}

  Eigen::Vector3d v_;
};

}  // namespace deepoint::geometry

#endif  // DEEPOINT_GEOMETRY_UNIT_VEC_H_
