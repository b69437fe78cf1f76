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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"
#include "deepoint/geometry/geometry.h"
#include "deepoint/model/model.h"

namespace deepoint::model {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nn::Mat;
using tokenizer::kNumJoints;

FrameFeatures RandomFrame(Rng& rng, int index, double drop = 0.2) {
  FrameFeatures f;
  f.frame_index = index;
  f.joints = MatrixXd::Zero(kNumJoints, tokenizer::kDescriptorDim);
  for (int j = 0; j < kNumJoints; ++j) {
    f.mask[j] = Uniform(rng, 0, 1) >= drop;
    for (int k = 0; k < tokenizer::kDescriptorDim; ++k) {
      const double v = Normal(rng, 0, 1);
      if (f.mask[j]) f.joints(j, k) = v;
    }
    const Eigen::Vector2d r(Normal(rng, 0, 0.5), Normal(rng, 0, 0.5));
    if (f.mask[j]) f.relpos.row(j) = r.transpose();
  }
  f.body_context = VectorXd::Zero(tokenizer::kDescriptorDim);
  f.image_context = VectorXd::Zero(tokenizer::kDescriptorDim);
  for (int k = 0; k < tokenizer::kDescriptorDim; ++k) {
    f.body_context[k] = Normal(rng, 0, 1);
    f.image_context[k] = Normal(rng, 0, 1);
  }
  return f;
}

std::vector<FrameFeatures> RandomFrames(int n, uint64_t seed, double drop = 0.2) {
  Rng rng(seed);
  std::vector<FrameFeatures> out;
  for (int i = 0; i < n; ++i) out.push_back(RandomFrame(rng, i, drop));
  return out;
}

ModelConfig Tiny(int d = 8, int heads = 1, int layers = 1, int window = 3) {
  ModelConfig c;
  c.embed_dim = d;
  c.features.embed_dim = d;
  c.heads = heads;
  c.joint_layers = layers;
  c.temporal_layers = layers;
  c.window = window;
  c.init_seed = 42;
  return c;
}

// Non-trivial norms and biases so the oracle comparison exercises them.
void Jitter(DeePointModel& m, uint64_t seed) {
  Rng rng(seed);
  for (nn::Parameter* p : m.params().All()) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      p->value.data()[i] += Normal(rng, 0, 0.1);
    }
  }
}

// ---------------------------------------------------------------------------
// Hand-unrolled reference transformer layer, written against plain Eigen
// without the tape.

MatrixXd P(const DeePointModel& m, const std::string& name) {
  return MatrixXd(m.params().Get(name).value);
}

MatrixXd RefLayerNorm(const MatrixXd& x, const MatrixXd& g, const MatrixXd& b) {
  MatrixXd y(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    double mean = 0;
    for (int c = 0; c < x.cols(); ++c) mean += x(r, c);
    mean /= x.cols();
    double var = 0;
    for (int c = 0; c < x.cols(); ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= x.cols();
    for (int c = 0; c < x.cols(); ++c) {
      y(r, c) = (x(r, c) - mean) / std::sqrt(var + 1e-5) * g(0, c) + b(0, c);
    }
  }
  return y;
}

double RefGelu(double z) {
  return 0.5 * z * (1 + std::tanh(std::sqrt(2 / std::numbers::pi) * (z + 0.044715 * z * z * z)));
}

MatrixXd AddRow(MatrixXd x, const MatrixXd& b) {
  for (int r = 0; r < x.rows(); ++r) x.row(r) += b.row(0);
  return x;
}

MatrixXd RefBlock(const DeePointModel& m, const std::string& p, const MatrixXd& x,
                  const std::vector<bool>& valid, int heads) {
  const int n = static_cast<int>(x.rows()), d = static_cast<int>(x.cols());
  const MatrixXd h = RefLayerNorm(x, P(m, p + ".ln1.g"), P(m, p + ".ln1.b"));
  const MatrixXd qkv = AddRow(h * P(m, p + ".attn.qkv.w"), P(m, p + ".attn.qkv.b"));
  const int dh = d / heads;
  MatrixXd att = MatrixXd::Zero(n, d);
  for (int hd = 0; hd < heads; ++hd) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> s(n, 0.0);
      double mx = -1e300;
      for (int j = 0; j < n; ++j) {
        if (!valid[j]) continue;
        double dot = 0;
        for (int c = 0; c < dh; ++c) dot += qkv(i, hd * dh + c) * qkv(j, d + hd * dh + c);
        s[j] = dot / std::sqrt(static_cast<double>(dh));
        mx = std::max(mx, s[j]);
      }
      double z = 0;
      for (int j = 0; j < n; ++j) z += valid[j] ? std::exp(s[j] - mx) : 0.0;
      for (int j = 0; j < n; ++j) {
        if (!valid[j]) continue;
        const double w = std::exp(s[j] - mx) / z;
        for (int c = 0; c < dh; ++c) att(i, hd * dh + c) += w * qkv(j, 2 * d + hd * dh + c);
      }
    }
  }
  MatrixXd y = x + AddRow(att * P(m, p + ".attn.out.w"), P(m, p + ".attn.out.b"));
  MatrixXd f = AddRow(RefLayerNorm(y, P(m, p + ".ln2.g"), P(m, p + ".ln2.b")) *
                          P(m, p + ".ff1.w"),
                      P(m, p + ".ff1.b"));
  f = f.unaryExpr(&RefGelu);
  return y + AddRow(f * P(m, p + ".ff2.w"), P(m, p + ".ff2.b"));
}

VectorXd RefJointEncoder(const DeePointModel& m, const MatrixXd& tokens,
                         const std::array<bool, kNumJoints>& mask, const VectorXd& extras) {
  const int d = m.config().embed_dim;
  MatrixXd x(kNumJoints + 1, d);
  x.row(0) = P(m, "je.cls").row(0) + extras.transpose();
  x.bottomRows(kNumJoints) = tokens;
  std::vector<bool> valid(kNumJoints + 1, true);
  for (int j = 0; j < kNumJoints; ++j) valid[j + 1] = mask[j];
  for (int l = 0; l < m.config().joint_layers; ++l) {
    x = RefBlock(m, "je.l" + std::to_string(l), x, valid, m.config().heads);
  }
  return RefLayerNorm(x.topRows(1), P(m, "je.ln_f.g"), P(m, "je.ln_f.b")).row(0).transpose();
}

VectorXd RefTemporalEncoder(const DeePointModel& m, const MatrixXd& seq,
                            const std::vector<bool>& valid) {
  MatrixXd x = seq + P(m, "te.pos");
  for (int l = 0; l < m.config().temporal_layers; ++l) {
    x = RefBlock(m, "te.l" + std::to_string(l), x, valid, m.config().heads);
  }
  return RefLayerNorm(x.bottomRows(1), P(m, "te.ln_f.g"), P(m, "te.ln_f.b")).row(0).transpose();
}

MatrixXd RunJointEncoder(const DeePointModel& m, const std::vector<const FrameFeatures*>& fr) {
  nn::Tape tape;
  return MatrixXd(tape.value(m.EncodeFrames(tape, fr)));
}

std::vector<const FrameFeatures*> Ptrs(const std::vector<FrameFeatures>& v) {
  std::vector<const FrameFeatures*> out;
  for (const auto& f : v) out.push_back(&f);
  return out;
}

TEST_CASE("joint encoder matches the hand-unrolled oracle (d=8, one layer, one head)") {
  for (int heads : {1, 2}) {
    DeePointModel m(Tiny(8, heads, 1));
    Jitter(m, 3);
    const auto frames = RandomFrames(4, 9);
    const MatrixXd got = RunJointEncoder(m, Ptrs(frames));
    for (int i = 0; i < 4; ++i) {
      const tokenizer::FrameTokens t = m.embedder().Assemble(frames[i]);
      const VectorXd ref = RefJointEncoder(m, t.tokens, t.mask, t.class_extras);
      CHECK((got.row(i).transpose() - ref).norm() < 1e-6);
    }
  }
}

TEST_CASE("temporal encoder matches the hand-unrolled oracle, with padding") {
  for (int heads : {1, 2}) {
    DeePointModel m(Tiny(8, heads, 1, 4));
    Jitter(m, 4);
    Rng rng(10);
    MatrixXd emb(6, 8);
    for (int i = 0; i < emb.size(); ++i) emb.data()[i] = Normal(rng, 0, 1);
    const std::vector<int> windows = {-1, -1, 0, 1, 2, 3, 4, 5};
    nn::Tape tape;
    const auto out = m.TemporalAndHead(tape, tape.Constant(emb), windows, 2);
    // Reconstruct the encoder output by running the reference and head by hand.
    for (int b = 0; b < 2; ++b) {
      MatrixXd seq = MatrixXd::Zero(4, 8);
      std::vector<bool> valid(4);
      for (int i = 0; i < 4; ++i) {
        const int idx = windows[b * 4 + i];
        valid[i] = idx >= 0;
        if (idx >= 0) seq.row(i) = emb.row(idx);
      }
      const VectorXd e = RefTemporalEncoder(m, seq, valid);
      MatrixXd hcls = AddRow(e.transpose() * P(m, "head.cls.0.w"), P(m, "head.cls.0.b"));
      hcls = AddRow(hcls.unaryExpr(&RefGelu) * P(m, "head.cls.1.w"), P(m, "head.cls.1.b"));
      MatrixXd hdir = AddRow(e.transpose() * P(m, "head.dir.0.w"), P(m, "head.dir.0.b"));
      hdir = AddRow(hdir.unaryExpr(&RefGelu) * P(m, "head.dir.1.w"), P(m, "head.dir.1.b"));
      CHECK((MatrixXd(tape.value(out.logits).row(b)) - hcls).norm() < 1e-6);
      CHECK((MatrixXd(tape.value(out.raw).row(b)) - hdir).norm() < 1e-6);
    }
  }
}

TEST_CASE("joint encoder: masked token rows do not influence the output") {
  DeePointModel m(Tiny(16, 4, 2));
  Jitter(m, 5);
  const auto frames = RandomFrames(3, 11, 0.4);
  const MatrixXd base = RunJointEncoder(m, Ptrs(frames));
  // Perturb the masked rows of the token matrix directly.
  nn::Tape tape;
  const auto tok = m.embedder().Build(tape, Ptrs(frames));
  Mat tokens = tape.value(tok.tokens);
  Rng rng(12);
  int perturbed = 0;
  for (int r = 0; r < tokens.rows(); ++r) {
    if (tok.mask[r]) continue;
    for (int c = 0; c < tokens.cols(); ++c) tokens(r, c) = Normal(rng, 0, 100);
    ++perturbed;
  }
  REQUIRE(perturbed > 0);
  const MatrixXd got(tape.value(m.JointEncoder(tape, tape.Constant(tokens), tok.mask,
                                               tok.class_extras)));
  CHECK((got - base).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("joint encoder: swapping two valid joint tokens leaves the class readout unchanged") {
  DeePointModel m(Tiny(16, 4, 2));
  Jitter(m, 6);
  const auto frames = RandomFrames(1, 13, 0.0);
  nn::Tape tape;
  const auto tok = m.embedder().Build(tape, Ptrs(frames));
  const Mat tokens = tape.value(tok.tokens);
  const MatrixXd base(tape.value(m.JointEncoder(tape, tok.tokens, tok.mask, tok.class_extras)));
  for (auto [a, b] : {std::pair{2, 9}, std::pair{0, 16}, std::pair{5, 6}}) {
    Mat swapped = tokens;
    swapped.row(a).swap(swapped.row(b));
    std::vector<uint8_t> mask = tok.mask;
    std::swap(mask[a], mask[b]);
    nn::Tape t2;
    const MatrixXd got(t2.value(m.JointEncoder(t2, t2.Constant(swapped), mask,
                                               t2.Constant(tape.value(tok.class_extras)))));
    CHECK((got - base).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("all joints masked: class pathway only, flagged") {
  DeePointModel m(Tiny(16, 4, 2));
  auto frames = RandomFrames(2, 14, 1.1);
  for (const auto& f : frames) {
    for (bool v : f.mask) REQUIRE_FALSE(v);
  }
  nn::Tape tape;
  int flagged = 0;
  const MatrixXd out(tape.value(m.EncodeFrames(tape, Ptrs(frames), &flagged)));
  CHECK(flagged == 2);
  CHECK(out.allFinite());
  // Same class token and extras (DP: zero) for both frames -> same output.
  CHECK((out.row(0) - out.row(1)).norm() < 1e-12);
}

TEST_CASE("temporal encoder: padded positions are ignored") {
  DeePointModel m(Tiny(16, 4, 2, 5));
  Jitter(m, 7);
  const auto frames = RandomFrames(8, 15);
  const MatrixXd emb = m.EmbedFrames(Ptrs(frames));
  const std::vector<int> windows = {-1, -1, 0, 1, 2, -1, 3, 4, 5, 6};
  const auto base = m.PredictFromEmbeddings(emb, windows, 2);

  // Rewriting the positional rows at padded slots and the unreferenced
  // embedding rows changes nothing.
  Rng rng(16);
  for (int c = 0; c < 16; ++c) {
    m.params().Get("te.pos").value(0, c) += Normal(rng, 0, 50);
    m.params().Get("te.pos").value(1, c) += Normal(rng, 0, 50);
  }
  MatrixXd emb2 = emb;
  emb2.row(7).setConstant(1e3);
  const auto got = m.PredictFromEmbeddings(emb2, {-1, -1, 0, 1, 2, -1, 3, 4, 5, 6}, 2);
  CHECK((got[0].logits - base[0].logits).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((got[0].raw_direction - base[0].raw_direction).cwiseAbs().maxCoeff() < 1e-12);
  // The second window has a pad at slot 0 only, so moving pos[1] matters there.
  CHECK((got[1].logits - base[1].logits).norm() > 0);
}

TEST_CASE("window of one frame: output depends only on that frame") {
  DeePointModel m(Tiny(16, 4, 2, 1));
  const auto frames = RandomFrames(3, 17);
  const auto a = m.Predict({&frames[1]});
  const auto b = m.PredictFromEmbeddings(m.EmbedFrames(Ptrs(frames)), {1}, 1);
  CHECK((a.logits - b[0].logits).norm() < 1e-12);
  CHECK(a.nu.Dot(b[0].nu) > 1 - 1e-12);
  CHECK_THROWS_AS(m.PredictFromEmbeddings(m.EmbedFrames(Ptrs(frames)), {-1}, 1), Error);
}

TEST_CASE("batched forward agrees with per-window prediction and token path") {
  ModelConfig c = Tiny(16, 4, 2, 3);
  c.variant = tokenizer::Variant::kDPBI;
  DeePointModel m(c);
  Jitter(m, 8);
  const auto frames = RandomFrames(5, 18);
  BatchInput batch{Ptrs(frames), {-1, 0, 1, 1, 2, 3, 2, 3, 4}, 3};
  nn::Tape tape;
  const auto out = m.Forward(tape, batch);
  for (int b = 0; b < 3; ++b) {
    std::vector<const FrameFeatures*> w;
    std::vector<tokenizer::FrameTokens> toks;
    for (int i = 0; i < 3; ++i) {
      const int idx = batch.windows[b * 3 + i];
      w.push_back(idx < 0 ? nullptr : &frames[idx]);
    }
    toks.reserve(3);
    std::vector<const tokenizer::FrameTokens*> tw;
    for (const auto* f : w) {
      if (f == nullptr) {
        tw.push_back(nullptr);
        continue;
      }
      toks.push_back(m.embedder().Assemble(*f));
      tw.push_back(&toks.back());
    }
    const PointingOutput p = m.Predict(w);
    const PointingOutput q = m.PredictFromTokens(tw);
    const Eigen::Vector2d lg = tape.value(out.logits).row(b).transpose();
    CHECK((p.logits - lg).norm() < 1e-10);
    CHECK((q.logits - lg).norm() < 1e-10);
    CHECK((p.raw_direction - q.raw_direction).norm() < 1e-10);
  }
}

TEST_CASE("output contract over random inputs") {
  DeePointModel m(ModelConfig::Toy());
  const auto frames = RandomFrames(40, 19);
  const MatrixXd emb = m.EmbedFrames(Ptrs(frames));
  std::vector<int> windows;
  for (int t = 0; t < 40; ++t) {
    for (int i = 4; i >= 0; --i) windows.push_back(t - i);
  }
  for (const auto& o : m.PredictFromEmbeddings(emb, windows, 40)) {
    CHECK(o.p >= 0.0);
    CHECK(o.p <= 1.0);
    CHECK(std::abs(o.nu.vec().norm() - 1.0) < 1e-9);
    CHECK((o.nu.vec() - o.raw_direction.normalized()).norm() < 1e-12);
  }
}

TEST_CASE("head examples") {
  const auto sat = MakeOutput({10, -10}, {1, 0, 0});
  CHECK(sat.p > 0.9999);
  CHECK(sat.p + (1 - sat.p) == 1.0);
  const auto n = MakeOutput({0, 0}, {0, 0, 5});
  CHECK(n.nu.vec() == Eigen::Vector3d(0, 0, 1));
  CHECK(n.p == 0.5);
  CHECK_FALSE(n.zero_direction);
  const auto z = MakeOutput({1, 2}, {0, 0, 1e-13});
  CHECK(z.zero_direction);
  CHECK(z.nu.vec() == Eigen::Vector3d(0, 0, 1));
  const auto big = MakeOutput({-800, 800}, {3, 4, 0});
  CHECK(big.p == 0.0);
  CHECK(std::abs(big.nu.x() - 0.6) < 1e-15);
}

TEST_CASE("untrained model: mean angle to uniform random directions is 90 deg") {
  DeePointModel m(ModelConfig::Toy());
  const auto frames = RandomFrames(200, 20);
  const MatrixXd emb = m.EmbedFrames(Ptrs(frames));
  std::vector<int> windows;
  for (int t = 0; t < 200; ++t) {
    for (int i = 4; i >= 0; --i) windows.push_back(t - i >= 0 ? t - i : -1);
  }
  const auto outs = m.PredictFromEmbeddings(emb, windows, 200);
  Rng rng(21);
  double sum = 0;
  int n = 0;
  for (const auto& o : outs) {
    for (int k = 0; k < 60; ++k) {
      const Eigen::Vector3d g(Normal(rng, 0, 1), Normal(rng, 0, 1), Normal(rng, 0, 1));
      sum += geometry::AngularErrorDeg(o.nu, geometry::UnitVec3::Normalize(g));
      ++n;
    }
  }
  REQUIRE(n >= 10000);
  CHECK(std::abs(sum / n - 90.0) < 3.0);
}

TEST_CASE("forward gradients agree with central differences") {
  ModelConfig c = Tiny(8, 2, 2, 3);
  c.variant = tokenizer::Variant::kDPB;
  DeePointModel m(c);
  Jitter(m, 22);
  const auto frames = RandomFrames(4, 23);
  const BatchInput batch{Ptrs(frames), {-1, 0, 1, 1, 2, 3}, 2};
  Rng rng(24);
  Mat sl(2, 2), sr(2, 3);
  for (int i = 0; i < 4; ++i) sl.data()[i] = Normal(rng, 0, 1);
  for (int i = 0; i < 6; ++i) sr.data()[i] = Normal(rng, 0, 1);
  auto loss = [&] {
    nn::Tape t;
    const auto o = m.Forward(t, batch);
    return t.value(o.logits).cwiseProduct(sl).sum() + t.value(o.raw).cwiseProduct(sr).sum();
  };
  m.params().ZeroGrad();
  {
    nn::Tape t;
    const auto o = m.Forward(t, batch);
    t.Backward({{o.logits, sl}, {o.raw, sr}});
  }
  auto params = m.params().All();
  for (int k = 0; k < 100; ++k) {
    nn::Parameter* p = params[static_cast<std::size_t>(rng() % params.size())];
    const Eigen::Index i = static_cast<Eigen::Index>(rng() % p->value.size());
    const double x0 = p->value.data()[i];
    p->value.data()[i] = x0 + 1e-4;
    const double up = loss();
    p->value.data()[i] = x0 - 1e-4;
    const double down = loss();
    p->value.data()[i] = x0;
    const double numeric = (up - down) / 2e-4;
    const double analytic = p->grad.data()[i];
    INFO(p->name << "[" << i << "] " << analytic << " vs " << numeric);
    if (std::abs(analytic) < 1e-10 && std::abs(numeric) < 1e-10) continue;
    CHECK(std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric)) < 1e-4);
  }
}

// Closed-form learnable-parameter count; see docs/formats.md.
int64_t ClosedFormCount(int64_t d, int64_t f, int64_t lj, int64_t lt, int64_t w,
                        int64_t feat) {
  const int64_t block = (3 * d * d + 3 * d) + (d * d + d) + 4 * d + (d * f + f) + (f * d + d);
  const int64_t tok = (feat * d + d) + 17 * d + (2 * d + d);
  const int64_t je = d + lj * block + 2 * d;
  const int64_t te = w * d + lt * block + 2 * d;
  const int64_t head = (d * d + d) + (d * 2 + 2) + (d * d + d) + (d * 3 + 3);
  return tok + je + te + head;
}

TEST_CASE("parameter counts: closed form under doubling d, and full-scale anchors") {
  for (int d : {16, 32, 64}) {
    ModelConfig c = Tiny(d, 4, 1, 5);
    CHECK(CountParameters(c) == ClosedFormCount(d, 4 * d, 1, 1, 5, 9));
  }
  const ModelConfig full = ModelConfig::FullScale();
  const int64_t te = CountParameters(full, "temporal_encoder");
  CHECK(te == 3115968);
  CHECK(std::abs(te - 3.1e6) / 3.1e6 < 0.10);

  ModelConfig mlp = full;
  mlp.temporal_encoder = false;
  const DeePointModel ablation(mlp);
  CHECK(ablation.params().Get("te.mlp.0.w").value.rows() == 2880);
  CHECK(ablation.params().Get("te.mlp.0.w").value.cols() == 960);
  CHECK(ablation.params().Get("te.mlp.1.w").value.cols() == 960);
  CHECK(ablation.params().Get("te.mlp.2.w").value.cols() == 192);
  const int64_t m = CountParameters(mlp, "temporal_encoder");
  CHECK(m == 3872832);
  CHECK(std::abs(m - 3.8e6) / 3.8e6 < 0.05);
  CHECK(CountParameters(full) == CountParameters(full, "tokenizer") +
                                      CountParameters(full, "joint_encoder") + te +
                                      CountParameters(full, "head"));
}

TEST_CASE("body-part masks") {
  const JointSet hands = JointsForParts("left_hand,right_hand");
  for (int j = 0; j < kNumJoints; ++j) {
    CHECK(hands[j] == (j == sim::kLeftWrist || j == sim::kRightWrist));
  }
  const JointSet hh = JointsForParts("hand,head");
  int n = 0;
  for (int j = 0; j < kNumJoints; ++j) n += hh[j];
  CHECK(n == 7);
  for (int j : {sim::kNose, sim::kLeftEye, sim::kRightEye, sim::kLeftEar, sim::kRightEar,
                sim::kLeftWrist, sim::kRightWrist}) {
    CHECK(hh[j]);
  }
  CHECK_THROWS_AS(JointsForParts("tail"), Error);

  ModelConfig c = Tiny(16, 4, 2, 2);
  c.body_parts = "left_hand,right_hand";
  DeePointModel m(c);
  auto frames = RandomFrames(2, 25, 0.0);
  const auto base = m.Predict({&frames[0], &frames[1]});
  // Non-hand joints are invisible regardless of confidence.
  frames[1].joints.row(sim::kNose).setConstant(50);
  frames[1].joints.row(sim::kLeftKnee).setConstant(-50);
  const auto got = m.Predict({&frames[0], &frames[1]});
  CHECK((got.logits - base.logits).cwiseAbs().maxCoeff() < 1e-12);
  frames[1].joints.row(sim::kLeftWrist).setConstant(5);
  CHECK((m.Predict({&frames[0], &frames[1]}).logits - base.logits).norm() > 0);
}

TEST_CASE("no-temporal-encoder ablation runs and keeps the output contract") {
  ModelConfig c = Tiny(16, 4, 2, 4);
  c.temporal_encoder = false;
  DeePointModel m(c);
  CHECK_FALSE(m.params().Contains("te.pos"));
  const auto frames = RandomFrames(4, 26);
  const auto o = m.Predict({nullptr, &frames[0], &frames[1], &frames[2]});
  CHECK(std::abs(o.nu.vec().norm() - 1) < 1e-9);
}

TEST_CASE("config validation and json round trip") {
  ModelConfig c = ModelConfig::Toy();
  c.window_includes_current = false;
  c.body_parts = "hand,head";
  const ModelConfig r = ModelConfig::FromJson(c.ToJson());
  CHECK(r.ToJson() == c.ToJson());
  CHECK(r.window_size() == 6);
  ModelConfig bad = ModelConfig::Toy();
  bad.heads = 5;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = ModelConfig::Toy();
  bad.window = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = ModelConfig::Toy();
  bad.joint_layers = 0;
  CHECK_THROWS_AS(DeePointModel{bad}, Error);
}

TEST_CASE("checkpoint round trip reproduces predictions") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "deepoint_model_test";
  fs::remove_all(dir);
  ModelConfig c = Tiny(16, 4, 2, 3);
  c.variant = tokenizer::Variant::kDPB;
  DeePointModel m(c);
  Jitter(m, 27);
  SaveCheckpoint(dir / "ckpt.json", m, {{"epoch", 4}});
  Json extra;
  const auto loaded = LoadCheckpoint(dir / "ckpt.json", &extra);
  CHECK(extra["epoch"] == 4);
  const auto frames = RandomFrames(3, 28);
  const auto a = m.Predict({&frames[0], &frames[1], &frames[2]});
  const auto b = loaded->Predict({&frames[0], &frames[1], &frames[2]});
  CHECK(a.logits == b.logits);
  CHECK(a.raw_direction == b.raw_direction);

  CHECK_THROWS_AS(LoadCheckpoint(dir / "missing.json"), Error);
  std::ofstream(dir / "bad.json") << "{\"format\": \"deepoint-checkpoint-v1\"}";
  try {
    LoadCheckpoint(dir / "bad.json");
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace deepoint::model
