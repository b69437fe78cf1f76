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

#include "deepoint/tokenizer/embedder.h"

#include "deepoint/common/error.h"

namespace deepoint::tokenizer {

using nn::Init;
using nn::Mat;

TokenEmbedder::TokenEmbedder(nn::ParameterStore& store,
                             const FeatureConfig& config, Variant variant,
                             Rng& rng)
    : config_(config), variant_(variant) {
  config_.Validate();
  const int d = config_.embed_dim;
  const int fj = config_.joint_feature_dim();
  const int fc = config_.context_feature_dim();
  proj_w_ = &store.Add("tok.proj.w", fj, d, Init::kXavier, rng);
  proj_b_ = &store.Add("tok.proj.b", 1, d, Init::kZeros, rng);
  joint_embed_ = &store.Add("tok.joint_embed", kNumJoints, d, Init::kNormal, rng);
  relpos_w_ = &store.Add("tok.relpos.w", 2, d, Init::kXavier, rng);
  relpos_b_ = &store.Add("tok.relpos.b", 1, d, Init::kZeros, rng);
  if (variant_ != Variant::kDP) {
    body_w_ = &store.Add("tok.body.w", fc, d, Init::kXavier, rng);
    body_b_ = &store.Add("tok.body.b", 1, d, Init::kZeros, rng);
  }
  if (variant_ == Variant::kDPBI) {
    image_w_ = &store.Add("tok.image.w", fc, d, Init::kXavier, rng);
    image_b_ = &store.Add("tok.image.b", 1, d, Init::kZeros, rng);
  }
}

TokenEmbedder::Output TokenEmbedder::Build(
    nn::Tape& tape, const std::vector<const FrameFeatures*>& frames,
    const JointSet& allowed) const {
  const int n = static_cast<int>(frames.size());
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no frames to tokenize");
  const int fj = config_.joint_feature_dim();
  const int fc = config_.context_feature_dim();
  Mat feats(n * kNumJoints, fj);
  Mat rel(n * kNumJoints, 2);
  Output out;
  out.mask.resize(static_cast<std::size_t>(n) * kNumJoints);
  for (int i = 0; i < n; ++i) {
    const FrameFeatures& f = *frames[i];
    if (f.joints.rows() != kNumJoints || f.joints.cols() != fj) {
      throw Error(ErrorCode::kInvalidArgument, "frame features do not match config");
    }
    feats.middleRows(i * kNumJoints, kNumJoints) = f.joints;
    rel.middleRows(i * kNumJoints, kNumJoints) = f.relpos;
    for (int j = 0; j < kNumJoints; ++j) {
      out.mask[i * kNumJoints + j] = f.mask[j] && allowed[j];
    }
  }
  nn::Var t = tape.Linear(tape.Constant(std::move(feats)), *proj_w_, *proj_b_);
  t = tape.AddTiled(t, tape.Param(*joint_embed_));
  t = tape.Add(t, tape.Linear(tape.Constant(std::move(rel)), *relpos_w_, *relpos_b_));
  out.tokens = tape.MaskRows(t, out.mask);

  if (variant_ == Variant::kDP) {
    out.class_extras = tape.Constant(Mat::Zero(n, config_.embed_dim));
    return out;
  }
  Mat body(n, fc), image(n, fc);
  for (int i = 0; i < n; ++i) {
    if (frames[i]->body_context.size() != fc || frames[i]->image_context.size() != fc) {
      throw Error(ErrorCode::kInvalidArgument, "context features do not match config");
    }
    body.row(i) = frames[i]->body_context.transpose();
    image.row(i) = frames[i]->image_context.transpose();
  }
  out.class_extras = tape.Linear(tape.Constant(std::move(body)), *body_w_, *body_b_);
  if (variant_ == Variant::kDPBI) {
    out.class_extras = tape.Add(
        out.class_extras, tape.Linear(tape.Constant(std::move(image)), *image_w_, *image_b_));
  }
  return out;
}

Eigen::VectorXd TokenEmbedder::PositionalCode(int joint,
                                              const Eigen::Vector2d& relpos) const {
  if (joint < 0 || joint >= kNumJoints) {
    throw Error(ErrorCode::kInvalidArgument, "joint index out of range");
  }
  Eigen::RowVectorXd code = joint_embed_->value.row(joint) + relpos_b_->value.row(0);
  code += relpos.transpose() * relpos_w_->value;
  return code.transpose();
}

FrameTokens TokenEmbedder::Assemble(const FrameFeatures& frame,
                                    const JointSet& allowed) const {
  nn::Tape tape;
  const Output o = Build(tape, {&frame}, allowed);
  FrameTokens ft;
  ft.frame_index = frame.frame_index;
  ft.tokens = tape.value(o.tokens);
  ft.class_extras = tape.value(o.class_extras).row(0).transpose();
  ft.relpos = frame.relpos;
  for (int j = 0; j < kNumJoints; ++j) ft.mask[j] = o.mask[j] != 0;
  return ft;
}

}  // namespace deepoint::tokenizer
