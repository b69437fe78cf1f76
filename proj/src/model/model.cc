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

#include "deepoint/model/model.h"

#include <cmath>
#include <sstream>

#include "deepoint/common/error.h"

namespace deepoint::model {

using nn::Init;
using nn::Mat;
using nn::Var;
using tokenizer::kNumJoints;

namespace {

constexpr int kInferenceChunk = 256;

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

JointSet JointsForParts(const std::string& parts) {
  JointSet s{};
  if (parts.empty()) return tokenizer::AllJoints();
  std::stringstream ss(parts);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "head") {
      for (int j : {sim::kNose, sim::kLeftEye, sim::kRightEye, sim::kLeftEar,
                    sim::kRightEar}) {
        s[j] = true;
      }
    } else if (part == "left_hand") {
      s[sim::kLeftWrist] = true;
    } else if (part == "right_hand") {
      s[sim::kRightWrist] = true;
    } else if (part == "hand") {
      s[sim::kLeftWrist] = s[sim::kRightWrist] = true;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown body part '" + part + "'");
    }
  }
  return s;
}

int ModelConfig::window_size() const {
  return window_includes_current ? window : window + 1;
}

std::vector<int> ModelConfig::mlp_widths() const {
  if (!mlp_hidden.empty()) return mlp_hidden;
  return {5 * embed_dim, 5 * embed_dim, embed_dim};
}

JointSet ModelConfig::allowed_joints() const { return JointsForParts(body_parts); }

void ModelConfig::Validate() const {
  Require(embed_dim > 0, "embed_dim must be positive");
  Require(heads > 0 && embed_dim % heads == 0, "embed_dim must be divisible by heads");
  Require(joint_layers >= 1 && temporal_layers >= 1, "layers must be >= 1");
  Require(window >= 1, "window N must be >= 1");
  Require(ffn() > 0, "ffn width must be positive");
  Require(features.embed_dim == embed_dim, "feature embed_dim must equal embed_dim");
  for (int w : mlp_widths()) Require(w > 0, "MLP widths must be positive");
  Require(mlp_widths().back() == embed_dim, "last MLP width must equal embed_dim");
  features.Validate();
  allowed_joints();
}

Json ModelConfig::ToJson() const {
  return {{"embed_dim", embed_dim},
          {"joint_layers", joint_layers},
          {"temporal_layers", temporal_layers},
          {"heads", heads},
          {"ffn_dim", ffn()},
          {"window", window},
          {"window_includes_current", window_includes_current},
          {"variant", tokenizer::VariantName(variant)},
          {"temporal_encoder", temporal_encoder},
          {"mlp_hidden", mlp_widths()},
          {"body_parts", body_parts},
          {"init_seed", init_seed},
          {"features",
           {{"mode", tokenizer::FeatureModeName(features.mode)},
            {"joint_patch", features.joint_patch},
            {"context_patch", features.context_patch},
            {"backbone_channels", features.backbone_channels},
            {"joint_box_scale", features.joint_box_scale},
            {"raster_size", features.raster_size},
            {"detection_threshold", features.detection_threshold},
            {"backbone_seed", features.backbone_seed}}}};
}

ModelConfig ModelConfig::FromJson(const Json& j) {
  ModelConfig c;
  try {
    c.embed_dim = GetInt(j, "embed_dim");
    c.joint_layers = GetInt(j, "joint_layers");
    c.temporal_layers = GetInt(j, "temporal_layers");
    c.heads = GetInt(j, "heads");
    c.ffn_dim = GetInt(j, "ffn_dim");
    c.window = GetInt(j, "window");
    c.window_includes_current = GetBool(j, "window_includes_current");
    c.variant = tokenizer::VariantFromName(GetString(j, "variant"));
    c.temporal_encoder = GetBool(j, "temporal_encoder");
    c.mlp_hidden = Field(j, "mlp_hidden").get<std::vector<int>>();
    c.body_parts = GetString(j, "body_parts");
    c.init_seed = Field(j, "init_seed").get<uint64_t>();
    const Json& f = Field(j, "features");
    c.features.mode = tokenizer::FeatureModeFromName(GetString(f, "mode"));
    c.features.embed_dim = c.embed_dim;
    c.features.joint_patch = GetInt(f, "joint_patch");
    c.features.context_patch = GetInt(f, "context_patch");
    c.features.backbone_channels = GetInt(f, "backbone_channels");
    c.features.joint_box_scale = GetNumber(f, "joint_box_scale");
    c.features.raster_size = GetInt(f, "raster_size");
    c.features.detection_threshold = GetNumber(f, "detection_threshold");
    c.features.backbone_seed = Field(f, "backbone_seed").get<uint64_t>();
    c.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, std::string("model config: ") + e.what());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("model config: ") + e.what());
  }
  return c;
}

ModelConfig ModelConfig::Toy() {
  ModelConfig c;
  c.embed_dim = 32;
  c.joint_layers = 2;
  c.temporal_layers = 2;
  c.heads = 4;
  c.window = 5;
  c.features.embed_dim = 32;
  return c;
}

ModelConfig ModelConfig::FullScale() {
  ModelConfig c;
  c.embed_dim = 192;
  c.joint_layers = 6;
  c.temporal_layers = 6;
  c.heads = 8;
  c.ffn_dim = 960;
  c.window = 15;
  c.features.embed_dim = 192;
  return c;
}

PointingOutput MakeOutput(const Eigen::Vector2d& logits, const Eigen::Vector3d& raw) {
  PointingOutput o;
  o.logits = logits;
  o.raw_direction = raw;
  // Two-class softmax written as a logistic of the logit gap.
  o.p = 1.0 / (1.0 + std::exp(logits[1] - logits[0]));
  if (raw.allFinite() && raw.norm() >= 1e-12) {
    o.nu = geometry::UnitVec3::Normalize(raw);
  } else {
    o.zero_direction = true;
  }
  return o;
}

DeePointModel::DeePointModel(const ModelConfig& config) : config_(config) {
  config_.features.embed_dim = config_.embed_dim;
  config_.Validate();
  allowed_ = config_.allowed_joints();
  Rng rng(DeriveSeed(config_.init_seed, "model_init"));
  const int d = config_.embed_dim;
  embedder_ = std::make_unique<tokenizer::TokenEmbedder>(
      params_, config_.features, config_.variant, rng);
  cls_seed_ = &params_.Add("je.cls", 1, d, Init::kNormal, rng);
  for (int l = 0; l < config_.joint_layers; ++l) {
    joint_blocks_.push_back(AddBlock("je.l" + std::to_string(l), rng));
  }
  params_.Add("je.ln_f.g", 1, d, Init::kOnes, rng);
  params_.Add("je.ln_f.b", 1, d, Init::kZeros, rng);
  const int w = config_.window_size();
  if (config_.temporal_encoder) {
    temporal_pos_ = &params_.Add("te.pos", w, d, Init::kNormal, rng);
    for (int l = 0; l < config_.temporal_layers; ++l) {
      temporal_blocks_.push_back(AddBlock("te.l" + std::to_string(l), rng));
    }
    params_.Add("te.ln_f.g", 1, d, Init::kOnes, rng);
    params_.Add("te.ln_f.b", 1, d, Init::kZeros, rng);
  } else {
    window_mlp_ = AddMlp("te.mlp", w * d, config_.mlp_widths(), rng);
  }
  head_cls_ = AddMlp("head.cls", d, {d, 2}, rng);
  head_dir_ = AddMlp("head.dir", d, {d, 3}, rng);
}

DeePointModel::Block DeePointModel::AddBlock(const std::string& p, Rng& rng) {
  const int d = config_.embed_dim, f = config_.ffn();
  Block b;
  b.ln1_g = &params_.Add(p + ".ln1.g", 1, d, Init::kOnes, rng);
  b.ln1_b = &params_.Add(p + ".ln1.b", 1, d, Init::kZeros, rng);
  b.qkv_w = &params_.Add(p + ".attn.qkv.w", d, 3 * d, Init::kXavier, rng);
  b.qkv_b = &params_.Add(p + ".attn.qkv.b", 1, 3 * d, Init::kZeros, rng);
  b.out_w = &params_.Add(p + ".attn.out.w", d, d, Init::kXavier, rng);
  b.out_b = &params_.Add(p + ".attn.out.b", 1, d, Init::kZeros, rng);
  b.ln2_g = &params_.Add(p + ".ln2.g", 1, d, Init::kOnes, rng);
  b.ln2_b = &params_.Add(p + ".ln2.b", 1, d, Init::kZeros, rng);
  b.ff1_w = &params_.Add(p + ".ff1.w", d, f, Init::kXavier, rng);
  b.ff1_b = &params_.Add(p + ".ff1.b", 1, f, Init::kZeros, rng);
  b.ff2_w = &params_.Add(p + ".ff2.w", f, d, Init::kXavier, rng);
  b.ff2_b = &params_.Add(p + ".ff2.b", 1, d, Init::kZeros, rng);
  return b;
}

DeePointModel::Mlp DeePointModel::AddMlp(const std::string& p, int in,
                                         const std::vector<int>& widths, Rng& rng) {
  Mlp m;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const std::string name = p + "." + std::to_string(i);
    m.w.push_back(&params_.Add(name + ".w", in, widths[i], Init::kXavier, rng));
    m.b.push_back(&params_.Add(name + ".b", 1, widths[i], Init::kZeros, rng));
    in = widths[i];
  }
  return m;
}

Var DeePointModel::Encode(nn::Tape& tape, Var x, const std::vector<Block>& blocks,
                          int seq, const std::vector<uint8_t>& key_valid,
                          int readout) const {
  const int d = config_.embed_dim;
  const int groups = static_cast<int>(tape.value(x).rows() / seq);
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const Block& b = blocks[l];
    const Var h = tape.LayerNorm(x, *b.ln1_g, *b.ln1_b);
    const Var qkv = tape.Linear(h, *b.qkv_w, *b.qkv_b);
    Var q = tape.SliceCols(qkv, 0, d);
    const Var k = tape.SliceCols(qkv, d, d);
    const Var v = tape.SliceCols(qkv, 2 * d, d);
    int sq = seq;
    if (readout >= 0 && l + 1 == blocks.size()) {
      // Only the read-out row is consumed downstream.
      std::vector<int> rows(groups);
      for (int g = 0; g < groups; ++g) rows[g] = g * seq + readout;
      q = tape.GatherRows(q, rows);
      x = tape.GatherRows(x, rows);
      sq = 1;
    }
    const Var a = tape.Attention(q, k, v, config_.heads, sq, seq, key_valid);
    x = tape.Add(x, tape.Linear(a, *b.out_w, *b.out_b));
    const Var h2 = tape.LayerNorm(x, *b.ln2_g, *b.ln2_b);
    const Var ff = tape.Linear(tape.Gelu(tape.Linear(h2, *b.ff1_w, *b.ff1_b)),
                               *b.ff2_w, *b.ff2_b);
    x = tape.Add(x, ff);
  }
  return x;
}

Var DeePointModel::ApplyMlp(nn::Tape& tape, Var x, const Mlp& mlp,
                            bool final_activation) const {
  for (std::size_t i = 0; i < mlp.w.size(); ++i) {
    x = tape.Linear(x, *mlp.w[i], *mlp.b[i]);
    if (i + 1 < mlp.w.size() || final_activation) x = tape.Gelu(x);
  }
  return x;
}

Var DeePointModel::FinalNorm(nn::Tape& tape, Var x, const std::string& prefix) const {
  // const_cast: parameters are only read here; gradients flow through the
  // tape into Parameter::grad, which is mutable state by design.
  auto& store = const_cast<nn::ParameterStore&>(params_);
  return tape.LayerNorm(x, store.Get(prefix + ".g"), store.Get(prefix + ".b"));
}

Var DeePointModel::JointEncoder(nn::Tape& tape, Var tokens,
                                const std::vector<uint8_t>& mask, Var extras,
                                int* frames_without_joints) const {
  const int frames = static_cast<int>(tape.value(extras).rows());
  Require(tape.value(tokens).rows() == static_cast<Eigen::Index>(frames) * kNumJoints &&
              mask.size() == static_cast<std::size_t>(frames) * kNumJoints,
          "JointEncoder: token/mask shapes");
  constexpr int kSeq = kNumJoints + 1;
  std::vector<uint8_t> key_valid(static_cast<std::size_t>(frames) * kSeq);
  int empty = 0;
  for (int f = 0; f < frames; ++f) {
    key_valid[f * kSeq] = 1;  // class token
    bool any = false;
    for (int j = 0; j < kNumJoints; ++j) {
      key_valid[f * kSeq + 1 + j] = mask[f * kNumJoints + j];
      any = any || mask[f * kNumJoints + j];
    }
    empty += !any;
  }
  if (frames_without_joints != nullptr) *frames_without_joints += empty;
  const Var cls = tape.AddTiled(extras, tape.Param(*cls_seed_));
  const Var x = tape.Interleave(cls, 1, tokens, kNumJoints);
  return FinalNorm(tape, Encode(tape, x, joint_blocks_, kSeq, key_valid, 0), "je.ln_f");
}

Var DeePointModel::EncodeFrames(nn::Tape& tape,
                                const std::vector<const FrameFeatures*>& frames,
                                int* frames_without_joints) const {
  const auto tok = embedder_->Build(tape, frames, allowed_);
  return JointEncoder(tape, tok.tokens, tok.mask, tok.class_extras, frames_without_joints);
}

DeePointModel::Outputs DeePointModel::Head(nn::Tape& tape, Var e) const {
  Outputs o;
  o.logits = ApplyMlp(tape, e, head_cls_, false);
  o.raw = ApplyMlp(tape, e, head_dir_, false);
  return o;
}

DeePointModel::Outputs DeePointModel::TemporalAndHead(nn::Tape& tape, Var embeddings,
                                                      const std::vector<int>& windows,
                                                      int batch_size) const {
  const int w = config_.window_size();
  const int d = config_.embed_dim;
  if (batch_size <= 0) throw Error(ErrorCode::kEmptyWindow, "empty batch");
  Require(windows.size() == static_cast<std::size_t>(batch_size) * w,
          "window table must hold batch_size x W entries");
  const Eigen::Index frames = tape.value(embeddings).rows();
  std::vector<uint8_t> valid(windows.size());
  for (int b = 0; b < batch_size; ++b) {
    for (int i = 0; i < w; ++i) {
      const int idx = windows[static_cast<std::size_t>(b) * w + i];
      Require(idx < frames, "window index out of range");
      valid[static_cast<std::size_t>(b) * w + i] = idx >= 0;
    }
    if (windows[static_cast<std::size_t>(b) * w + w - 1] < 0) {
      throw Error(ErrorCode::kEmptyWindow, "window without a current frame");
    }
  }
  Var seq = tape.GatherRows(embeddings, windows);
  Var e;
  if (config_.temporal_encoder) {
    seq = tape.AddTiled(seq, tape.Param(*temporal_pos_));
    e = FinalNorm(tape, Encode(tape, seq, temporal_blocks_, w, valid, w - 1), "te.ln_f");
  } else {
    e = ApplyMlp(tape, tape.Reshape(seq, batch_size, w * d), window_mlp_, false);
  }
  return Head(tape, e);
}

DeePointModel::Outputs DeePointModel::Forward(nn::Tape& tape,
                                              const BatchInput& batch) const {
  int empty = 0;
  const Var emb = EncodeFrames(tape, batch.frames, &empty);
  Outputs o = TemporalAndHead(tape, emb, batch.windows, batch.batch_size);
  o.frames_without_joints = empty;
  return o;
}

Eigen::MatrixXd DeePointModel::EmbedFrames(
    const std::vector<const FrameFeatures*>& frames) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(frames.size()), config_.embed_dim);
  for (std::size_t begin = 0; begin < frames.size(); begin += kInferenceChunk) {
    const std::size_t end = std::min(frames.size(), begin + kInferenceChunk);
    std::vector<const FrameFeatures*> chunk(frames.begin() + begin, frames.begin() + end);
    nn::Tape tape;
    out.middleRows(begin, end - begin) = tape.value(EncodeFrames(tape, chunk));
  }
  return out;
}

std::vector<PointingOutput> DeePointModel::PredictFromEmbeddings(
    const Eigen::MatrixXd& embeddings, const std::vector<int>& windows,
    int batch_size) const {
  const int w = config_.window_size();
  Require(windows.size() == static_cast<std::size_t>(batch_size) * w,
          "window table must hold batch_size x W entries");
  std::vector<PointingOutput> out;
  out.reserve(batch_size);
  const Mat emb = embeddings;
  for (int begin = 0; begin < batch_size; begin += kInferenceChunk) {
    const int n = std::min(kInferenceChunk, batch_size - begin);
    std::vector<int> chunk(windows.begin() + static_cast<std::size_t>(begin) * w,
                           windows.begin() + static_cast<std::size_t>(begin + n) * w);
    nn::Tape tape;
    const Outputs o = TemporalAndHead(tape, tape.Constant(emb), chunk, n);
    const Mat& lg = tape.value(o.logits);
    const Mat& raw = tape.value(o.raw);
    for (int i = 0; i < n; ++i) {
      out.push_back(MakeOutput(lg.row(i).transpose(), raw.row(i).transpose()));
    }
  }
  return out;
}

PointingOutput DeePointModel::Predict(
    const std::vector<const FrameFeatures*>& window) const {
  const int w = config_.window_size();
  Require(static_cast<int>(window.size()) == w, "window has the wrong size");
  std::vector<const FrameFeatures*> frames;
  std::vector<int> idx(w, -1);
  for (int i = 0; i < w; ++i) {
    if (window[i] == nullptr) continue;
    idx[i] = static_cast<int>(frames.size());
    frames.push_back(window[i]);
  }
  if (idx[w - 1] < 0) throw Error(ErrorCode::kEmptyWindow, "missing current frame");
  nn::Tape tape;
  const Outputs o = TemporalAndHead(tape, EncodeFrames(tape, frames), idx, 1);
  return MakeOutput(tape.value(o.logits).row(0).transpose(),
                    tape.value(o.raw).row(0).transpose());
}

PointingOutput DeePointModel::PredictFromTokens(
    const std::vector<const FrameTokens*>& window) const {
  const int w = config_.window_size();
  const int d = config_.embed_dim;
  Require(static_cast<int>(window.size()) == w, "window has the wrong size");
  std::vector<const FrameTokens*> frames;
  std::vector<int> idx(w, -1);
  for (int i = 0; i < w; ++i) {
    if (window[i] == nullptr) continue;
    idx[i] = static_cast<int>(frames.size());
    frames.push_back(window[i]);
  }
  if (idx[w - 1] < 0) throw Error(ErrorCode::kEmptyWindow, "missing current frame");
  const int n = static_cast<int>(frames.size());
  Mat tokens(n * kNumJoints, d), extras(n, d);
  std::vector<uint8_t> mask(static_cast<std::size_t>(n) * kNumJoints);
  for (int i = 0; i < n; ++i) {
    Require(frames[i]->tokens.rows() == kNumJoints && frames[i]->tokens.cols() == d &&
                frames[i]->class_extras.size() == d,
            "frame tokens do not match the model width");
    tokens.middleRows(i * kNumJoints, kNumJoints) = frames[i]->tokens;
    extras.row(i) = frames[i]->class_extras.transpose();
    for (int j = 0; j < kNumJoints; ++j) {
      mask[i * kNumJoints + j] = frames[i]->mask[j] && allowed_[j];
    }
  }
  nn::Tape tape;
  const Var emb =
      JointEncoder(tape, tape.Constant(std::move(tokens)), mask, tape.Constant(std::move(extras)));
  const Outputs o = TemporalAndHead(tape, emb, idx, 1);
  return MakeOutput(tape.value(o.logits).row(0).transpose(),
                    tape.value(o.raw).row(0).transpose());
}

Json DeePointModel::ToJson() const {
  return {{"model_config", config_.ToJson()}, {"parameters", params_.ToJson()}};
}

std::unique_ptr<DeePointModel> DeePointModel::FromJson(const Json& j) {
  auto m = std::make_unique<DeePointModel>(ModelConfig::FromJson(Field(j, "model_config")));
  m->params_.LoadJson(Field(j, "parameters"));
  return m;
}

int64_t CountParameters(const ModelConfig& config, const std::string& component) {
  static const std::map<std::string, std::string> kPrefix = {
      {"all", ""}, {"tokenizer", "tok."}, {"joint_encoder", "je."},
      {"temporal_encoder", "te."}, {"head", "head."}};
  auto it = kPrefix.find(component);
  Require(it != kPrefix.end(), "unknown component '" + component + "'");
  const DeePointModel model(config);
  int64_t n = 0;
  for (const nn::Parameter* p : model.params().All()) {
    if (p->name.rfind(it->second, 0) == 0) n += p->value.size();
  }
  return n;
}

void SaveCheckpoint(const std::filesystem::path& path, const DeePointModel& model,
                    const Json& extra) {
  Json j = model.ToJson();
  j["format"] = "deepoint-checkpoint-v1";
  j["extra"] = extra;
  WriteJsonFile(path, j, -1);
}

std::unique_ptr<DeePointModel> LoadCheckpoint(const std::filesystem::path& path,
                                              Json* extra) {
  const Json j = ReadJsonFile(path);
  try {
    if (GetString(j, "format") != "deepoint-checkpoint-v1") {
      throw Error(ErrorCode::kSchemaError, "unknown checkpoint format");
    }
    if (extra != nullptr) *extra = j.value("extra", Json::object());
    return DeePointModel::FromJson(j);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) {
      throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
    }
    throw;
  }
}

}  // namespace deepoint::model
