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

#ifndef DEEPOINT_EVAL_METRICS_H_
#define DEEPOINT_EVAL_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "deepoint/anno/annotate.h"
#include "deepoint/common/json_io.h"
#include "deepoint/geometry/unit_vec.h"
#include "deepoint/sim/skeleton.h"

namespace deepoint::eval {

inline constexpr double kDecisionThreshold = 0.5;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
  // No predicted positives: precision is reported as 0 and flagged.
  bool precision_undefined = false;
  bool recall_undefined = false;  // no ground-truth positives
};

// Decision rule p >= threshold. Throws kEmptyInput on empty input and
// kInvalidArgument on length mismatch.
Prf FramePrf(const std::vector<double>& p, const std::vector<bool>& gt,
             double threshold = kDecisionThreshold);

// An instance counts as detected when any frame in [start, end] clears the
// threshold. p is indexed by frame. Throws kNoInstances.
double InstanceRecall(const std::vector<double>& p,
                      const std::vector<anno::PointingInstance>& instances,
                      double threshold = kDecisionThreshold);

// Mean of AngularErrorDeg over matched pairs. Throws kNoEvaluableFrames.
double MeanAngularError(const std::vector<geometry::UnitVec3>& pred,
                        const std::vector<geometry::UnitVec3>& gt);

struct ErrorBin {
  double yaw_deg = 0.0;    // bin center
  double pitch_deg = 0.0;  // bin center
  long count = 0;
  double sum = 0.0;
  bool empty() const { return count == 0; }
  double mean() const;  // NaN when empty
};

// Mean error per ground-truth (yaw, pitch) cell. Yaw spans [-180, 180),
// pitch [-90, 90]; the top pitch edge belongs to the last row.
class DirectionErrorMap {
 public:
  explicit DirectionErrorMap(double bin_deg = 15.0);
  void Add(const geometry::UnitVec3& gt, double error_deg);
  static DirectionErrorMap Build(const std::vector<geometry::UnitVec3>& gt,
                                 const std::vector<double>& errors,
                                 double bin_deg = 15.0);

  int yaw_bins() const { return yaw_bins_; }
  int pitch_bins() const { return pitch_bins_; }
  double bin_deg() const { return bin_deg_; }
  const ErrorBin& bin(int pitch_index, int yaw_index) const;
  long total() const;
  int non_empty() const;

  // {bin_deg, bins: [{yaw, pitch, count, mean|null, x, y}]}, with (x, y)
  // the Mollweide position of the bin center.
  Json ToJson() const;

 private:
  double bin_deg_;
  int yaw_bins_, pitch_bins_;
  std::vector<ErrorBin> bins_;  // row-major: pitch, yaw
};

enum class BaselineKind { kElbowHand, kNoseHand };
const char* BaselineName(BaselineKind k);  // "elbow_hand", "nose_hand"
BaselineKind BaselineFromName(const std::string& name);

// Joint positions with per-joint availability (triangulated or truth).
struct Skeleton3D {
  sim::Skeleton joints{};
  std::array<bool, sim::kNumJoints> valid{};
  static Skeleton3D FromTruth(const sim::Skeleton& s);
};

// Elbow->wrist or nose->wrist on the given side. Throws kMissingJoint.
geometry::UnitVec3 BaselineDirection(const Skeleton3D& skeleton, sim::Side side,
                                     BaselineKind kind);

// Formats an angle as a table cell, e.g. "14.05".
std::string FormatDeg(double deg);

}  // namespace deepoint::eval

#endif  // DEEPOINT_EVAL_METRICS_H_
