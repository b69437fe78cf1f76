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

#ifndef DEEPOINT_TOKENIZER_FEATURES_H_
#define DEEPOINT_TOKENIZER_FEATURES_H_

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/geometry/camera.h"
#include "deepoint/sim/observe.h"
#include "deepoint/sim/skeleton.h"

namespace deepoint::tokenizer {

inline constexpr int kNumJoints = sim::kNumJoints;
// Oracle descriptor length; the layout is documented in docs/formats.md.
inline constexpr int kDescriptorDim = 9;
// Joints below this confidence are treated as undetected and masked.
inline constexpr double kDetectionThreshold = 0.3;

enum class FeatureMode { kOracle, kRaster };
// DP: plain class token. DP-B adds the whole-body feature to the class
// token, DP-BI also the whole-image feature.
enum class Variant { kDP, kDPB, kDPBI };

const char* VariantName(Variant v);  // "DP", "DP-B", "DP-BI"
Variant VariantFromName(const std::string& name);
const char* FeatureModeName(FeatureMode m);
FeatureMode FeatureModeFromName(const std::string& name);

struct FeatureConfig {
  FeatureMode mode = FeatureMode::kOracle;
  int embed_dim = 192;
  int joint_patch = 3;
  int context_patch = 16;
  int backbone_channels = 256;
  double joint_box_scale = 0.2;  // ROI side as a fraction of bbox height
  int raster_size = 256;
  double detection_threshold = kDetectionThreshold;
  uint64_t backbone_seed = 1;

  void Validate() const;  // throws kInvalidArgument
  // Raw per-joint feature length before the learned projection.
  int joint_feature_dim() const;
  // Raw length of each context (whole-body, whole-image) feature.
  int context_feature_dim() const;
};

// Non-learned inputs of one frame, ready for the learned projection.
struct FrameFeatures {
  int frame_index = 0;
  Eigen::MatrixXd joints;  // kNumJoints x joint_feature_dim, zero when masked
  std::array<bool, kNumJoints> mask{};  // true = valid
  Eigen::Matrix<double, kNumJoints, 2> relpos =
      Eigen::Matrix<double, kNumJoints, 2>::Zero();
  Eigen::VectorXd body_context;   // context_feature_dim
  Eigen::VectorXd image_context;  // context_feature_dim
};

// The two joints each descriptor measures unit offsets towards.
std::array<int, 2> AdjacentJoints(int joint);

// [u / width, v / height, vx, vy, ax, ay, bx, by, confidence]: image
// position, velocity since the previous frame divided by the bbox height
// (zero at frame 0 or when the joint was undetected there), unit offsets to
// the two adjacent joints (zero when undetected or coincident), confidence.
// Throws kUndetectedJoint when the joint's confidence is below `threshold`.
Eigen::VectorXd OracleDescriptor(const sim::PoseTrack& track, int frame,
                                 int joint, int image_width, int image_height,
                                 double threshold = kDetectionThreshold);

// (keypoint - shoulder midpoint) / (bbox width, bbox height). Falls back to
// the bbox center as origin when either shoulder is undetected.
Eigen::Vector2d RelativePosition(const sim::PoseFrame& frame, int joint,
                                 double threshold = kDetectionThreshold);

// Whole-body and whole-image descriptors for oracle mode (documented in
// docs/formats.md); both have length kDescriptorDim.
Eigen::VectorXd OracleBodyContext(const sim::PoseTrack& track, int frame,
                                  int image_width, int image_height,
                                  double threshold = kDetectionThreshold);
Eigen::VectorXd OracleImageContext(const sim::PoseTrack& track, int frame,
                                   int image_width, int image_height,
                                   double threshold = kDetectionThreshold);

class RasterBackbone;

// Features of one frame. Raster mode needs a backbone built from the same
// config.
FrameFeatures ExtractFeatures(const sim::PoseTrack& track, int frame,
                              const geometry::CameraModel& camera,
                              const FeatureConfig& config,
                              const RasterBackbone* backbone = nullptr);

// Every frame of a track.
std::vector<FrameFeatures> ExtractTrack(const sim::PoseTrack& track,
                                        const geometry::CameraModel& camera,
                                        const FeatureConfig& config,
                                        const RasterBackbone* backbone = nullptr);

}  // namespace deepoint::tokenizer

#endif  // DEEPOINT_TOKENIZER_FEATURES_H_
