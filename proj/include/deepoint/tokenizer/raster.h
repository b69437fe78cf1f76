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

#ifndef DEEPOINT_TOKENIZER_RASTER_H_
#define DEEPOINT_TOKENIZER_RASTER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "deepoint/sim/observe.h"
#include "deepoint/tokenizer/features.h"

namespace deepoint::tokenizer {

// Channel-major C x H x W map.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w) : channels(c), height(h), width(w),
                                    data(static_cast<std::size_t>(c) * h * w, 0.0) {}
  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

// Bilinear value at continuous (x, y) in map coordinates (integer = cell
// center), with coordinates clamped to the border.
double SampleBilinear(const FeatureMap& map, int channel, double x, double y);

// Samples an out_size x out_size grid of points spread evenly over the box
// of size `box` centered at `center` (cell i at offset (i + 0.5) / out_size
// of the side). Row r = iy * out_size + ix holds the channel vector.
Eigen::MatrixXd RoiAlign(const FeatureMap& map, const Eigen::Vector2d& center,
                         const Eigen::Vector2d& box, int out_size);

// Square crop around the bbox, scaled to size x size.
struct CropTransform {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  // image px of crop (0,0)
  double scale = 1.0;                                // crop px per image px

  Eigen::Vector2d ToCrop(const Eigen::Vector2d& px) const {
    return (px - origin) * scale;
  }
};
CropTransform CropFor(const sim::BBox& bbox, int size);

// Three-channel stick figure (left limbs, right limbs, head and torso) drawn
// with anti-aliased 2 px lines; undetected joints drop their bones.
FeatureMap RasterizePose(const sim::PoseFrame& frame, const CropTransform& crop,
                         int size, double threshold = kDetectionThreshold);

// Frozen three-block convolutional stack (3x3 conv, stride 2, ReLU) with
// He-initialized weights drawn from a fixed seed. Output stride 8.
class RasterBackbone {
 public:
  RasterBackbone(int out_channels, uint64_t seed);
  FeatureMap Forward(const FeatureMap& image) const;
  int out_channels() const { return out_channels_; }
  static constexpr int kStride = 8;

 private:
  struct Conv {
    int in = 0, out = 0;
    std::vector<double> weight;  // out x in x 3 x 3
    std::vector<double> bias;
  };
  static FeatureMap Apply(const Conv& conv, const FeatureMap& in);

  int out_channels_;
  std::vector<Conv> blocks_;
};

}  // namespace deepoint::tokenizer

#endif  // DEEPOINT_TOKENIZER_RASTER_H_
