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

#include "deepoint/tokenizer/features.h"

#include <cmath>

#include "deepoint/common/error.h"
#include "deepoint/tokenizer/raster.h"

namespace deepoint::tokenizer {
namespace {

using sim::Joint;

bool Detected(const sim::PoseFrame& f, int j, double threshold) {
  return f.keypoints[j].confidence >= threshold;
}

double BoxHeight(const sim::PoseFrame& f, int image_height) {
  return f.bbox.height > 0.0 ? f.bbox.height : static_cast<double>(image_height);
}

Eigen::Vector2d UnitOffset(const sim::PoseFrame& f, int from, int to,
                           double threshold) {
  if (!Detected(f, to, threshold)) return Eigen::Vector2d::Zero();
  const Eigen::Vector2d d = f.keypoints[to].pixel - f.keypoints[from].pixel;
  const double n = d.norm();
  return n > 1e-9 ? Eigen::Vector2d(d / n) : Eigen::Vector2d::Zero();
}

}  // namespace

const char* VariantName(Variant v) {
  switch (v) {
    case Variant::kDP: return "DP";
    case Variant::kDPB: return "DP-B";
    case Variant::kDPBI: return "DP-BI";
  }
  return "?";
}

Variant VariantFromName(const std::string& name) {
  if (name == "DP") return Variant::kDP;
  if (name == "DP-B") return Variant::kDPB;
  if (name == "DP-BI") return Variant::kDPBI;
  throw Error(ErrorCode::kInvalidArgument, "unknown variant '" + name + "'");
}

const char* FeatureModeName(FeatureMode m) {
  return m == FeatureMode::kOracle ? "oracle" : "raster";
}

FeatureMode FeatureModeFromName(const std::string& name) {
  if (name == "oracle") return FeatureMode::kOracle;
  if (name == "raster") return FeatureMode::kRaster;
  throw Error(ErrorCode::kInvalidArgument, "unknown feature mode '" + name + "'");
}

void FeatureConfig::Validate() const {
  if (embed_dim <= 0 || joint_patch <= 0 || context_patch <= 0 ||
      backbone_channels <= 0 || !(joint_box_scale > 0.0) || raster_size < 8 ||
      raster_size % RasterBackbone::kStride != 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid feature config");
  }
}

int FeatureConfig::joint_feature_dim() const {
  return mode == FeatureMode::kOracle
             ? kDescriptorDim
             : joint_patch * joint_patch * backbone_channels;
}

int FeatureConfig::context_feature_dim() const {
  return mode == FeatureMode::kOracle ? kDescriptorDim : backbone_channels;
}

std::array<int, 2> AdjacentJoints(int joint) {
  switch (joint) {
    case sim::kNose: return {sim::kLeftEye, sim::kRightEye};
    case sim::kLeftEye: return {sim::kNose, sim::kLeftEar};
    case sim::kRightEye: return {sim::kNose, sim::kRightEar};
    case sim::kLeftEar: return {sim::kLeftEye, sim::kLeftShoulder};
    case sim::kRightEar: return {sim::kRightEye, sim::kRightShoulder};
    case sim::kLeftShoulder: return {sim::kLeftElbow, sim::kLeftHip};
    case sim::kRightShoulder: return {sim::kRightElbow, sim::kRightHip};
    case sim::kLeftElbow: return {sim::kLeftShoulder, sim::kLeftWrist};
    case sim::kRightElbow: return {sim::kRightShoulder, sim::kRightWrist};
    case sim::kLeftWrist: return {sim::kLeftElbow, sim::kLeftShoulder};
    case sim::kRightWrist: return {sim::kRightElbow, sim::kRightShoulder};
    case sim::kLeftHip: return {sim::kLeftKnee, sim::kLeftShoulder};
    case sim::kRightHip: return {sim::kRightKnee, sim::kRightShoulder};
    case sim::kLeftKnee: return {sim::kLeftHip, sim::kLeftAnkle};
    case sim::kRightKnee: return {sim::kRightHip, sim::kRightAnkle};
    case sim::kLeftAnkle: return {sim::kLeftKnee, sim::kLeftHip};
    case sim::kRightAnkle: return {sim::kRightKnee, sim::kRightHip};
  }
  throw Error(ErrorCode::kInvalidArgument, "joint index out of range");
}

Eigen::VectorXd OracleDescriptor(const sim::PoseTrack& track, int frame,
                                 int joint, int image_width, int image_height,
                                 double threshold) {
  const sim::PoseFrame& f = track.frames.at(frame);
  if (!Detected(f, joint, threshold)) {
    throw Error(ErrorCode::kUndetectedJoint,
                "joint " + std::to_string(joint) + " undetected at frame " +
                    std::to_string(frame));
  }
  const Eigen::Vector2d p = f.keypoints[joint].pixel;
  Eigen::VectorXd d(kDescriptorDim);
  d[0] = p.x() / image_width;
  d[1] = p.y() / image_height;
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  if (frame > 0 && Detected(track.frames[frame - 1], joint, threshold)) {
    vel = (p - track.frames[frame - 1].keypoints[joint].pixel) /
          BoxHeight(f, image_height);
  }
  d.segment<2>(2) = vel;
  const auto adj = AdjacentJoints(joint);
  d.segment<2>(4) = UnitOffset(f, joint, adj[0], threshold);
  d.segment<2>(6) = UnitOffset(f, joint, adj[1], threshold);
  d[8] = f.keypoints[joint].confidence;
  return d;
}

Eigen::Vector2d RelativePosition(const sim::PoseFrame& f, int joint,
                                 double threshold) {
  Eigen::Vector2d origin = f.bbox.Center();
  if (Detected(f, sim::kLeftShoulder, threshold) &&
      Detected(f, sim::kRightShoulder, threshold)) {
    origin = 0.5 * (f.keypoints[sim::kLeftShoulder].pixel +
                    f.keypoints[sim::kRightShoulder].pixel);
  }
  const double w = f.bbox.width > 0.0 ? f.bbox.width : 1.0;
  const double h = f.bbox.height > 0.0 ? f.bbox.height : 1.0;
  const Eigen::Vector2d off = f.keypoints[joint].pixel - origin;
  return {off.x() / w, off.y() / h};
}

Eigen::VectorXd OracleBodyContext(const sim::PoseTrack& track, int frame,
                                  int image_width, int image_height,
                                  double threshold) {
  const sim::PoseFrame& f = track.frames.at(frame);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kDescriptorDim);
  if (f.bbox.Empty()) return c;
  const Eigen::Vector2d center = f.bbox.Center();
  c[0] = center.x() / image_width;
  c[1] = center.y() / image_height;
  c[2] = f.bbox.width / image_width;
  c[3] = f.bbox.height / image_height;
  if (frame > 0 && !track.frames[frame - 1].bbox.Empty()) {
    c.segment<2>(4) =
        (center - track.frames[frame - 1].bbox.Center()) / f.bbox.height;
  }
  c[6] = f.bbox.width / f.bbox.height;
  int detected = 0;
  double conf = 0.0;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!Detected(f, j, threshold)) continue;
    ++detected;
    conf += f.keypoints[j].confidence;
  }
  c[7] = static_cast<double>(detected) / kNumJoints;
  c[8] = detected > 0 ? conf / detected : 0.0;
  return c;
}

Eigen::VectorXd OracleImageContext(const sim::PoseTrack& track, int frame,
                                   int image_width, int image_height,
                                   double threshold) {
  const sim::PoseFrame& f = track.frames.at(frame);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kDescriptorDim);
  // Spread and motion of the detected keypoints as seen by the whole image.
  Eigen::Vector2d mean = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
  Eigen::Vector2d motion = Eigen::Vector2d::Zero();
  int n = 0, moving = 0, confident = 0;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!Detected(f, j, threshold)) continue;
    const Eigen::Vector2d p(f.keypoints[j].pixel.x() / image_width,
                            f.keypoints[j].pixel.y() / image_height);
    mean += p;
    sq += p.cwiseProduct(p);
    ++n;
    confident += f.keypoints[j].confidence >= 0.5;
    if (frame > 0 && Detected(track.frames[frame - 1], j, threshold)) {
      motion += (f.keypoints[j].pixel - track.frames[frame - 1].keypoints[j].pixel) /
                BoxHeight(f, image_height);
      ++moving;
    }
  }
  if (n == 0) return c;
  mean /= n;
  c.segment<2>(0) = mean;
  c.segment<2>(2) = (sq / n - mean.cwiseProduct(mean)).cwiseMax(0.0).cwiseSqrt();
  if (moving > 0) c.segment<2>(4) = motion / moving;
  c[6] = static_cast<double>(confident) / kNumJoints;
  c[7] = f.bbox.width * f.bbox.height / (static_cast<double>(image_width) * image_height);
  c[8] = 1.0;
  return c;
}

FrameFeatures ExtractFeatures(const sim::PoseTrack& track, int frame,
                              const geometry::CameraModel& camera,
                              const FeatureConfig& config,
                              const RasterBackbone* backbone) {
  const sim::PoseFrame& f = track.frames.at(frame);
  const double thr = config.detection_threshold;
  FrameFeatures out;
  out.frame_index = frame;
  out.joints = Eigen::MatrixXd::Zero(kNumJoints, config.joint_feature_dim());
  for (int j = 0; j < kNumJoints; ++j) {
    out.mask[j] = Detected(f, j, thr) && !f.bbox.Empty();
  }
  for (int j = 0; j < kNumJoints; ++j) {
    if (out.mask[j]) out.relpos.row(j) = RelativePosition(f, j, thr).transpose();
  }

  if (config.mode == FeatureMode::kOracle) {
    for (int j = 0; j < kNumJoints; ++j) {
      if (!out.mask[j]) continue;
      out.joints.row(j) =
          OracleDescriptor(track, frame, j, camera.width, camera.height, thr)
              .transpose();
    }
    out.body_context =
        OracleBodyContext(track, frame, camera.width, camera.height, thr);
    out.image_context =
        OracleImageContext(track, frame, camera.width, camera.height, thr);
    return out;
  }

  if (backbone == nullptr ||
      backbone->out_channels() != config.backbone_channels) {
    throw Error(ErrorCode::kInvalidArgument,
                "raster mode needs a backbone matching the config");
  }
  out.body_context = Eigen::VectorXd::Zero(config.context_feature_dim());
  out.image_context = Eigen::VectorXd::Zero(config.context_feature_dim());
  if (f.bbox.Empty()) return out;
  const CropTransform crop = CropFor(f.bbox, config.raster_size);
  const FeatureMap fmap =
      backbone->Forward(RasterizePose(f, crop, config.raster_size, thr));
  const double to_map = 1.0 / RasterBackbone::kStride;
  const double side = config.joint_box_scale * f.bbox.height * crop.scale * to_map;
  for (int j = 0; j < kNumJoints; ++j) {
    if (!out.mask[j]) continue;
    const Eigen::Vector2d c = crop.ToCrop(f.keypoints[j].pixel) * to_map;
    const Eigen::MatrixXd patch =
        RoiAlign(fmap, c, {side, side}, config.joint_patch);
    out.joints.row(j) = Eigen::Map<const Eigen::RowVectorXd>(
        Eigen::MatrixXd(patch.transpose()).data(), patch.size());
  }
  // Whole body: ROI over the bbox, averaged. Whole image: the full map mean.
  const Eigen::Vector2d bc = crop.ToCrop(f.bbox.Center()) * to_map;
  const Eigen::Vector2d bs =
      Eigen::Vector2d(f.bbox.width, f.bbox.height) * crop.scale * to_map;
  out.body_context =
      RoiAlign(fmap, bc, bs, config.context_patch).colwise().mean().transpose();
  Eigen::VectorXd img(config.backbone_channels);
  const std::size_t plane = static_cast<std::size_t>(fmap.height) * fmap.width;
  for (int c = 0; c < fmap.channels; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += fmap.data[c * plane + i];
    img[c] = s / plane;
  }
  out.image_context = img;
  return out;
}

std::vector<FrameFeatures> ExtractTrack(const sim::PoseTrack& track,
                                        const geometry::CameraModel& camera,
                                        const FeatureConfig& config,
                                        const RasterBackbone* backbone) {
  std::vector<FrameFeatures> out;
  out.reserve(track.frames.size());
  for (std::size_t f = 0; f < track.frames.size(); ++f) {
    out.push_back(ExtractFeatures(track, static_cast<int>(f), camera, config, backbone));
  }
  return out;
}

}  // namespace deepoint::tokenizer
