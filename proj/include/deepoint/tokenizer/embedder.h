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

#ifndef DEEPOINT_TOKENIZER_EMBEDDER_H_
#define DEEPOINT_TOKENIZER_EMBEDDER_H_

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/nn/parameters.h"
#include "deepoint/nn/tape.h"
#include "deepoint/tokenizer/features.h"

namespace deepoint::tokenizer {

// Joint tokens of one frame after the learned projection.
struct FrameTokens {
  int frame_index = 0;
  Eigen::MatrixXd tokens;  // kNumJoints x d; masked rows are exactly zero
  std::array<bool, kNumJoints> mask{};
  Eigen::VectorXd class_extras;  // d; zero for DP
  Eigen::Matrix<double, kNumJoints, 2> relpos =
      Eigen::Matrix<double, kNumJoints, 2>::Zero();
};

using JointSet = std::array<bool, kNumJoints>;
inline JointSet AllJoints() {
  JointSet s;
  s.fill(true);
  return s;
}

// Learned part of tokenization: token_j = W f_j + b + E[j] + (R relpos_j + c)
// for valid joints, zero otherwise. The class-token extras are the projected
// whole-body (DP-B) plus whole-image (DP-BI) features.
class TokenEmbedder {
 public:
  TokenEmbedder(nn::ParameterStore& store, const FeatureConfig& config,
                Variant variant, Rng& rng);

  struct Output {
    nn::Var tokens;        // (frames * 17) x d
    nn::Var class_extras;  // frames x d
    std::vector<uint8_t> mask;  // frames * 17
  };
  // `allowed` removes joints regardless of confidence (body-part ablations).
  Output Build(nn::Tape& tape, const std::vector<const FrameFeatures*>& frames,
               const JointSet& allowed = AllJoints()) const;

  Eigen::VectorXd PositionalCode(int joint, const Eigen::Vector2d& relpos) const;
  FrameTokens Assemble(const FrameFeatures& frame,
                       const JointSet& allowed = AllJoints()) const;

  const FeatureConfig& config() const { return config_; }
  Variant variant() const { return variant_; }

 private:
  FeatureConfig config_;
  Variant variant_;
  nn::Parameter* proj_w_;
  nn::Parameter* proj_b_;
  nn::Parameter* joint_embed_;
  nn::Parameter* relpos_w_;
  nn::Parameter* relpos_b_;
  nn::Parameter* body_w_ = nullptr;
  nn::Parameter* body_b_ = nullptr;
  nn::Parameter* image_w_ = nullptr;
  nn::Parameter* image_b_ = nullptr;
};

}  // namespace deepoint::tokenizer

#endif  // DEEPOINT_TOKENIZER_EMBEDDER_H_
