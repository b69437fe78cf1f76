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

#ifndef DEEPOINT_MODEL_MODEL_H_
#define DEEPOINT_MODEL_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/common/json_io.h"
#include "deepoint/geometry/unit_vec.h"
#include "deepoint/nn/parameters.h"
#include "deepoint/nn/tape.h"
#include "deepoint/tokenizer/embedder.h"
#include "deepoint/tokenizer/features.h"

namespace deepoint::model {

using tokenizer::FrameFeatures;
using tokenizer::FrameTokens;
using tokenizer::JointSet;

// Named joint groups for body-part ablations: "head" (nose, eyes, ears),
// "left_hand", "right_hand", "hand" (both wrists).
JointSet JointsForParts(const std::string& parts);

struct ModelConfig {
  int embed_dim = 32;
  int joint_layers = 2;
  int temporal_layers = 2;
  int heads = 4;
  int ffn_dim = 0;  // 0 selects 4 * embed_dim
  int window = 5;   // N
  // W = N (current frame plus N - 1 past) when true, N + 1 otherwise.
  bool window_includes_current = true;
  tokenizer::Variant variant = tokenizer::Variant::kDP;
  // Ablation: replace the Temporal Encoder by an MLP over the concatenated
  // window; hidden widths default to (5d, 5d, d).
  bool temporal_encoder = true;
  std::vector<int> mlp_hidden;
  // Comma-separated part names; empty keeps every joint.
  std::string body_parts;
  tokenizer::FeatureConfig features;
  uint64_t init_seed = 1;

  int window_size() const;
  int ffn() const { return ffn_dim > 0 ? ffn_dim : 4 * embed_dim; }
  std::vector<int> mlp_widths() const;
  JointSet allowed_joints() const;
  // Throws kInvalidArgument.
  void Validate() const;

  Json ToJson() const;
  static ModelConfig FromJson(const Json& j);

  // d = 32, 2 + 2 layers, 4 heads, FFN 4d, N = 5, oracle features.
  static ModelConfig Toy();
  // d = 192, 6 + 6 layers, 8 heads, FFN 960, N = 15.
  static ModelConfig FullScale();
};

struct PointingOutput {
  double p = 0.0;  // probability of the pointing class
  geometry::UnitVec3 nu;
  Eigen::Vector2d logits = Eigen::Vector2d::Zero();  // (pointing, not pointing)
  Eigen::Vector3d raw_direction = Eigen::Vector3d::Zero();
  bool zero_direction = false;  // raw below 1e-12; nu is +z
};

// p = softmax(logits)[0]; nu = raw / |raw|.
PointingOutput MakeOutput(const Eigen::Vector2d& logits,
                          const Eigen::Vector3d& raw);

// One training or inference batch. `windows` holds batch_size rows of W
// indices into `frames`, oldest first; -1 marks a padded slot. The last slot
// (the current frame) must be valid.
struct BatchInput {
  std::vector<const FrameFeatures*> frames;
  std::vector<int> windows;
  int batch_size = 0;
};

class DeePointModel {
 public:
  explicit DeePointModel(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore& params() { return params_; }
  const nn::ParameterStore& params() const { return params_; }
  const tokenizer::TokenEmbedder& embedder() const { return *embedder_; }

  struct Outputs {
    nn::Var logits;  // batch x 2
    nn::Var raw;     // batch x 3
    int frames_without_joints = 0;
  };

  Outputs Forward(nn::Tape& tape, const BatchInput& batch) const;

  // Joint Encoder over assembled tokens: tokens (F*17 x d), key mask
  // (F*17), extras (F x d). Returns F x d class-token embeddings.
  nn::Var JointEncoder(nn::Tape& tape, nn::Var tokens,
                       const std::vector<uint8_t>& mask, nn::Var extras,
                       int* frames_without_joints = nullptr) const;
  nn::Var EncodeFrames(nn::Tape& tape,
                       const std::vector<const FrameFeatures*>& frames,
                       int* frames_without_joints = nullptr) const;
  // Temporal Encoder (or its MLP ablation) plus head over windows of
  // per-frame embeddings (rows of `embeddings`).
  Outputs TemporalAndHead(nn::Tape& tape, nn::Var embeddings,
                          const std::vector<int>& windows, int batch_size) const;

  // Inference helpers (no gradient use).
  Eigen::MatrixXd EmbedFrames(const std::vector<const FrameFeatures*>& frames) const;
  std::vector<PointingOutput> PredictFromEmbeddings(const Eigen::MatrixXd& embeddings,
                                                    const std::vector<int>& windows,
                                                    int batch_size) const;
  // Window given oldest first; nullptr marks padding; the last entry must be
  // present. Size must equal the window size.
  PointingOutput Predict(const std::vector<const FrameFeatures*>& window) const;
  PointingOutput PredictFromTokens(const std::vector<const FrameTokens*>& window) const;

  // Checkpoint document: {"model_config": ..., "parameters": ...}.
  Json ToJson() const;
  static std::unique_ptr<DeePointModel> FromJson(const Json& j);

 private:
  struct Block {
    nn::Parameter *ln1_g, *ln1_b, *qkv_w, *qkv_b, *out_w, *out_b;
    nn::Parameter *ln2_g, *ln2_b, *ff1_w, *ff1_b, *ff2_w, *ff2_b;
  };
  struct Mlp {
    std::vector<nn::Parameter*> w, b;  // GELU between layers
  };

  Block AddBlock(const std::string& prefix, Rng& rng);
  Mlp AddMlp(const std::string& prefix, int in, const std::vector<int>& widths, Rng& rng);
  // Pre-norm transformer encoder over G sequences of `seq` rows. When
  // `readout` >= 0 the last layer only computes that row of each sequence,
  // and the result has G rows.
  nn::Var Encode(nn::Tape& tape, nn::Var x, const std::vector<Block>& blocks,
                 int seq, const std::vector<uint8_t>& key_valid, int readout) const;
  nn::Var ApplyMlp(nn::Tape& tape, nn::Var x, const Mlp& mlp, bool final_activation) const;
  Outputs Head(nn::Tape& tape, nn::Var e) const;
  nn::Var FinalNorm(nn::Tape& tape, nn::Var x, const std::string& prefix) const;

  ModelConfig config_;
  nn::ParameterStore params_;
  std::unique_ptr<tokenizer::TokenEmbedder> embedder_;
  JointSet allowed_;
  nn::Parameter* cls_seed_;
  std::vector<Block> joint_blocks_;
  std::vector<Block> temporal_blocks_;
  nn::Parameter* temporal_pos_ = nullptr;
  Mlp window_mlp_;
  Mlp head_cls_;
  Mlp head_dir_;
};

// Learnable parameters of a whole model or of one component:
// "all", "tokenizer", "joint_encoder", "temporal_encoder" (or the MLP that
// replaces it), "head".
int64_t CountParameters(const ModelConfig& config, const std::string& component = "all");

void SaveCheckpoint(const std::filesystem::path& path, const DeePointModel& model,
                    const Json& extra = Json::object());
std::unique_ptr<DeePointModel> LoadCheckpoint(const std::filesystem::path& path,
                                              Json* extra = nullptr);

}  // namespace deepoint::model

#endif  // DEEPOINT_MODEL_MODEL_H_
