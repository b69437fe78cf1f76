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

#include "deepoint/eval/metrics.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"

namespace deepoint::eval {

Prf FramePrf(const std::vector<double>& p, const std::vector<bool>& gt,
             double threshold) {
  if (p.empty()) throw Error(ErrorCode::kEmptyInput, "no frames to score");
  if (p.size() != gt.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and label counts differ");
  }
  Prf r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool pos = p[i] >= threshold;
    if (pos && gt[i]) ++r.tp;
    else if (pos) ++r.fp;
    else if (gt[i]) ++r.fn;
    else ++r.tn;
  }
  r.precision_undefined = r.tp + r.fp == 0;
  r.recall_undefined = r.tp + r.fn == 0;
  r.precision = r.precision_undefined ? 0.0 : double(r.tp) / double(r.tp + r.fp);
  r.recall = r.recall_undefined ? 0.0 : double(r.tp) / double(r.tp + r.fn);
  const double s = r.precision + r.recall;
  r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
  return r;
}

double InstanceRecall(const std::vector<double>& p,
                      const std::vector<anno::PointingInstance>& instances,
                      double threshold) {
  if (instances.empty()) throw Error(ErrorCode::kNoInstances, "no pointing instances");
  int hit = 0;
  for (const auto& inst : instances) {
    if (inst.start_frame < 0 || inst.end_frame >= static_cast<int>(p.size()) ||
        inst.start_frame > inst.end_frame) {
      throw Error(ErrorCode::kInvalidArgument, "instance outside the sequence");
    }
    for (int f = inst.start_frame; f <= inst.end_frame; ++f) {
      if (p[f] >= threshold) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(instances.size());
}

double MeanAngularError(const std::vector<geometry::UnitVec3>& pred,
                        const std::vector<geometry::UnitVec3>& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and label counts differ");
  }
  if (pred.empty()) throw Error(ErrorCode::kNoEvaluableFrames, "no evaluable frames");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += geometry::AngularErrorDeg(pred[i], gt[i]);
  }
  return sum / static_cast<double>(pred.size());
}

double ErrorBin::mean() const {
  return count > 0 ? sum / static_cast<double>(count)
                   : std::numeric_limits<double>::quiet_NaN();
}

DirectionErrorMap::DirectionErrorMap(double bin_deg) : bin_deg_(bin_deg) {
  if (!(bin_deg > 0.0) || bin_deg > 90.0) {
    throw Error(ErrorCode::kInvalidArgument, "bin size must be in (0, 90] degrees");
  }
  yaw_bins_ = static_cast<int>(std::ceil(360.0 / bin_deg - 1e-9));
  pitch_bins_ = static_cast<int>(std::ceil(180.0 / bin_deg - 1e-9));
  bins_.resize(static_cast<std::size_t>(yaw_bins_) * pitch_bins_);
  for (int p = 0; p < pitch_bins_; ++p) {
    for (int y = 0; y < yaw_bins_; ++y) {
      ErrorBin& b = bins_[static_cast<std::size_t>(p) * yaw_bins_ + y];
      b.yaw_deg = std::min(-180.0 + (y + 0.5) * bin_deg, 180.0);
      b.pitch_deg = std::min(-90.0 + (p + 0.5) * bin_deg, 90.0);
    }
  }
}

void DirectionErrorMap::Add(const geometry::UnitVec3& gt, double error_deg) {
  const geometry::YawPitch yp = geometry::DirToYawPitch(gt);
  // Yaw 180 wraps onto -180.
  double yaw = yp.yaw_deg >= 180.0 ? yp.yaw_deg - 360.0 : yp.yaw_deg;
  int y = static_cast<int>(std::floor((yaw + 180.0) / bin_deg_));
  int p = static_cast<int>(std::floor((yp.pitch_deg + 90.0) / bin_deg_));
  y = std::clamp(y, 0, yaw_bins_ - 1);
  p = std::clamp(p, 0, pitch_bins_ - 1);
  ErrorBin& b = bins_[static_cast<std::size_t>(p) * yaw_bins_ + y];
  ++b.count;
  b.sum += error_deg;
}

DirectionErrorMap DirectionErrorMap::Build(const std::vector<geometry::UnitVec3>& gt,
                                           const std::vector<double>& errors,
                                           double bin_deg) {
  if (gt.size() != errors.size()) {
    throw Error(ErrorCode::kInvalidArgument, "direction and error counts differ");
  }
  DirectionErrorMap m(bin_deg);
  for (std::size_t i = 0; i < gt.size(); ++i) m.Add(gt[i], errors[i]);
  return m;
}

const ErrorBin& DirectionErrorMap::bin(int pitch_index, int yaw_index) const {
  if (pitch_index < 0 || pitch_index >= pitch_bins_ || yaw_index < 0 ||
      yaw_index >= yaw_bins_) {
    throw Error(ErrorCode::kInvalidArgument, "bin index out of range");
  }
  return bins_[static_cast<std::size_t>(pitch_index) * yaw_bins_ + yaw_index];
}

long DirectionErrorMap::total() const {
  long n = 0;
  for (const auto& b : bins_) n += b.count;
  return n;
}

int DirectionErrorMap::non_empty() const {
  int n = 0;
  for (const auto& b : bins_) n += !b.empty();
  return n;
}

Json DirectionErrorMap::ToJson() const {
  Json bins = Json::array();
  constexpr double kRad = std::numbers::pi / 180.0;
  for (const auto& b : bins_) {
    const geometry::MollweidePoint mp =
        geometry::Mollweide(b.yaw_deg * kRad, b.pitch_deg * kRad);
    Json j = {{"yaw", b.yaw_deg}, {"pitch", b.pitch_deg}, {"count", b.count},
              {"x", mp.x}, {"y", mp.y}};
    j["mean"] = b.empty() ? Json(nullptr) : Json(b.mean());
    bins.push_back(std::move(j));
  }
  return {{"bin_deg", bin_deg_}, {"yaw_bins", yaw_bins_}, {"pitch_bins", pitch_bins_},
          {"bins", std::move(bins)}};
}

const char* BaselineName(BaselineKind k) {
  return k == BaselineKind::kElbowHand ? "elbow_hand" : "nose_hand";
}

BaselineKind BaselineFromName(const std::string& name) {
  if (name == "elbow_hand") return BaselineKind::kElbowHand;
  if (name == "nose_hand") return BaselineKind::kNoseHand;
  throw Error(ErrorCode::kInvalidArgument, "unknown baseline '" + name + "'");
}

Skeleton3D Skeleton3D::FromTruth(const sim::Skeleton& s) {
  Skeleton3D k;
  k.joints = s;
  k.valid.fill(true);
  return k;
}

geometry::UnitVec3 BaselineDirection(const Skeleton3D& skeleton, sim::Side side,
                                     BaselineKind kind) {
  const int wrist = sim::WristOf(side);
  const int from = kind == BaselineKind::kElbowHand ? sim::ElbowOf(side) : sim::kNose;
  for (int j : {from, wrist}) {
    if (!skeleton.valid[j]) {
      throw Error(ErrorCode::kMissingJoint,
                  std::string(sim::JointName(j)) + " unavailable for " + BaselineName(kind));
    }
  }
  return geometry::DirBetween(skeleton.joints[from], skeleton.joints[wrist]);
}

std::string FormatDeg(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", deg);
  return buf;
}

}  // namespace deepoint::eval
