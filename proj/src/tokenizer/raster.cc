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

#include "deepoint/tokenizer/raster.h"

#include <algorithm>
#include <cmath>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"

namespace deepoint::tokenizer {

double SampleBilinear(const FeatureMap& map, int channel, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(map.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(map.height - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, map.width - 1);
  const int y1 = std::min(y0 + 1, map.height - 1);
  const double ax = x - x0, ay = y - y0;
  const double top = (1 - ax) * map.at(channel, y0, x0) + ax * map.at(channel, y0, x1);
  const double bot = (1 - ax) * map.at(channel, y1, x0) + ax * map.at(channel, y1, x1);
  return (1 - ay) * top + ay * bot;
}

Eigen::MatrixXd RoiAlign(const FeatureMap& map, const Eigen::Vector2d& center,
                         const Eigen::Vector2d& box, int out_size) {
  if (map.channels <= 0 || map.width <= 0 || map.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "RoiAlign: empty feature map");
  }
  if (out_size <= 0 || !(box.x() > 0.0) || !(box.y() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "RoiAlign: box must be positive");
  }
  Eigen::MatrixXd out(out_size * out_size, map.channels);
  const Eigen::Vector2d corner = center - 0.5 * box;
  for (int iy = 0; iy < out_size; ++iy) {
    const double y = corner.y() + (iy + 0.5) * box.y() / out_size;
    for (int ix = 0; ix < out_size; ++ix) {
      const double x = corner.x() + (ix + 0.5) * box.x() / out_size;
      for (int c = 0; c < map.channels; ++c) {
        out(iy * out_size + ix, c) = SampleBilinear(map, c, x, y);
      }
    }
  }
  return out;
}

CropTransform CropFor(const sim::BBox& bbox, int size) {
  CropTransform t;
  const double side = 1.2 * std::max(bbox.width, bbox.height);
  if (!(side > 0.0)) return t;
  t.scale = size / side;
  t.origin = bbox.Center() - Eigen::Vector2d::Constant(side / 2);
  return t;
}

namespace {

int BoneChannel(int a, int b) {
  const auto side = [](int j) {
    if (j >= sim::kLeftShoulder) return (j - sim::kLeftShoulder) % 2 == 0 ? 0 : 1;
    return 2;
  };
  const int sa = side(a), sb = side(b);
  return sa == sb ? sa : 2;
}

void DrawSegment(FeatureMap& img, int channel, const Eigen::Vector2d& a,
                 const Eigen::Vector2d& b, double half_width) {
  const Eigen::Vector2d lo = a.cwiseMin(b).array() - half_width - 1;
  const Eigen::Vector2d hi = a.cwiseMax(b).array() + half_width + 1;
  const int x0 = std::max(0, static_cast<int>(std::floor(lo.x())));
  const int y0 = std::max(0, static_cast<int>(std::floor(lo.y())));
  const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(hi.x())));
  const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(hi.y())));
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector2d p(x, y);
      const double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      const double dist = (a + t * d - p).norm();
      const double v = std::clamp(half_width + 0.5 - dist, 0.0, 1.0);
      img.at(channel, y, x) = std::max(img.at(channel, y, x), v);
    }
  }
}

}  // namespace

FeatureMap RasterizePose(const sim::PoseFrame& frame, const CropTransform& crop,
                         int size, double threshold) {
  FeatureMap img(3, size, size);
  for (const auto& [a, b] : sim::kCocoBones) {
    if (frame.keypoints[a].confidence < threshold ||
        frame.keypoints[b].confidence < threshold) {
      continue;
    }
    DrawSegment(img, BoneChannel(a, b), crop.ToCrop(frame.keypoints[a].pixel),
                crop.ToCrop(frame.keypoints[b].pixel), 1.0);
  }
  return img;
}

RasterBackbone::RasterBackbone(int out_channels, uint64_t seed)
    : out_channels_(out_channels) {
  if (out_channels <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "backbone channels must be positive");
  }
  Rng rng(DeriveSeed(seed, "raster_backbone"));
  const int widths[4] = {3, 16, 32, out_channels};
  for (int i = 0; i < 3; ++i) {
    Conv c;
    c.in = widths[i];
    c.out = widths[i + 1];
    const double sigma = std::sqrt(2.0 / (9.0 * c.in));
    c.weight.resize(static_cast<std::size_t>(c.out) * c.in * 9);
    for (double& w : c.weight) w = Normal(rng, 0.0, sigma);
    c.bias.assign(c.out, 0.01);
    blocks_.push_back(std::move(c));
  }
}

FeatureMap RasterBackbone::Apply(const Conv& conv, const FeatureMap& in) {
  const int oh = (in.height + 1) / 2, ow = (in.width + 1) / 2;
  FeatureMap out(conv.out, oh, ow);
  for (int o = 0; o < conv.out; ++o) {
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        double s = conv.bias[o];
        for (int i = 0; i < conv.in; ++i) {
          const double* w = &conv.weight[(static_cast<std::size_t>(o) * conv.in + i) * 9];
          for (int ky = 0; ky < 3; ++ky) {
            const int iy = 2 * y + ky - 1;
            if (iy < 0 || iy >= in.height) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int ix = 2 * x + kx - 1;
              if (ix < 0 || ix >= in.width) continue;
              s += w[ky * 3 + kx] * in.at(i, iy, ix);
            }
          }
        }
        out.at(o, y, x) = std::max(0.0, s);
      }
    }
  }
  return out;
}

FeatureMap RasterBackbone::Forward(const FeatureMap& image) const {
  if (image.channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "backbone expects 3 channels");
  }
  FeatureMap x = image;
  for (const Conv& c : blocks_) x = Apply(c, x);
  return x;
}

}  // namespace deepoint::tokenizer
