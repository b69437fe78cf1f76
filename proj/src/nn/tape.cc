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

#include "deepoint/nn/tape.h"

#include <cmath>
#include <memory>

#include "deepoint/common/error.h"

namespace deepoint::nn {
namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

Var Tape::Push(Mat value, bool needs_grad,
               std::function<void(Tape&, Node&)> backward) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Mat& Tape::GradOf(Var v) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

Var Tape::Constant(Mat value) { return Push(std::move(value), false, nullptr); }

Var Tape::Param(Parameter& p) {
  Var v = Push(p.value, true, [](Tape&, Node& self) {
    self.param->grad += self.grad;
  });
  nodes_[v.id].param = &p;
  return v;
}

Var Tape::MatMul(Var a, Var b) {
  const Mat& va = value(a);
  const Mat& vb = value(b);
  Require(va.cols() == vb.rows(), "MatMul: inner dimensions differ");
  Mat out(va.rows(), vb.cols());
  out.noalias() = va * vb;
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(b),
              [a, b](Tape& t, Node& self) {
                if (t.NeedsGrad(a)) {
                  t.GradOf(a).noalias() += self.grad * t.value(b).transpose();
                }
                if (t.NeedsGrad(b)) {
                  t.GradOf(b).noalias() += t.value(a).transpose() * self.grad;
                }
              });
}

Var Tape::Add(Var a, Var b) {
  Require(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
          "Add: shapes differ");
  return Push(value(a) + value(b), NeedsGrad(a) || NeedsGrad(b),
              [a, b](Tape& t, Node& self) {
                if (t.NeedsGrad(a)) t.GradOf(a) += self.grad;
                if (t.NeedsGrad(b)) t.GradOf(b) += self.grad;
              });
}

Var Tape::AddTiled(Var a, Var tile) {
  const Mat& va = value(a);
  const Mat& vt = value(tile);
  Require(va.cols() == vt.cols(), "AddTiled: column counts differ");
  Require(vt.rows() > 0 && va.rows() % vt.rows() == 0,
          "AddTiled: rows must be a multiple of the tile height");
  const Eigen::Index h = vt.rows();
  Mat out = va;
  for (Eigen::Index r = 0; r < out.rows(); r += h) out.middleRows(r, h) += vt;
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(tile),
              [a, tile, h](Tape& t, Node& self) {
                if (t.NeedsGrad(a)) t.GradOf(a) += self.grad;
                if (t.NeedsGrad(tile)) {
                  Mat& g = t.GradOf(tile);
                  for (Eigen::Index r = 0; r < self.grad.rows(); r += h) {
                    g += self.grad.middleRows(r, h);
                  }
                }
              });
}

Var Tape::Gelu(Var x) {
  const Mat& vx = value(x);
  Mat out(vx.rows(), vx.cols());
  for (Eigen::Index i = 0; i < vx.size(); ++i) {
    const double z = vx.data()[i];
    out.data()[i] = 0.5 * z * (1.0 + std::tanh(kGeluC * (z + kGeluA * z * z * z)));
  }
  return Push(std::move(out), NeedsGrad(x), [x](Tape& t, Node& self) {
    const Mat& vx = t.value(x);
    Mat& g = t.GradOf(x);
    for (Eigen::Index i = 0; i < vx.size(); ++i) {
      const double z = vx.data()[i];
      const double th = std::tanh(kGeluC * (z + kGeluA * z * z * z));
      const double d = 0.5 * (1.0 + th) + 0.5 * z * (1.0 - th * th) * kGeluC *
                                              (1.0 + 3.0 * kGeluA * z * z);
      g.data()[i] += d * self.grad.data()[i];
    }
  });
}

Var Tape::LayerNorm(Var x, Parameter& gamma, Parameter& beta) {
  const Var g = Param(gamma);
  const Var b = Param(beta);
  const Mat& vx = value(x);
  const Eigen::Index rows = vx.rows(), cols = vx.cols();
  Require(gamma.value.cols() == cols && gamma.value.rows() == 1 &&
              beta.value.cols() == cols && beta.value.rows() == 1,
          "LayerNorm: parameter shape");
  auto xhat = std::make_shared<Mat>(rows, cols);
  auto inv_std = std::make_shared<Eigen::VectorXd>(rows);
  Mat out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double mean = vx.row(r).mean();
    const double var = (vx.row(r).array() - mean).square().mean();
    const double is = 1.0 / std::sqrt(var + kLayerNormEps);
    (*inv_std)[r] = is;
    xhat->row(r) = (vx.row(r).array() - mean) * is;
    out.row(r) = xhat->row(r).cwiseProduct(gamma.value.row(0)) + beta.value.row(0);
  }
  return Push(std::move(out), true, [x, g, b, xhat, inv_std](Tape& t, Node& self) {
    const Mat& dy = self.grad;
    const Eigen::Index cols = dy.cols();
    t.GradOf(b) += dy.colwise().sum();
    t.GradOf(g) += dy.cwiseProduct(*xhat).colwise().sum();
    if (!t.NeedsGrad(x)) return;
    Mat& dx = t.GradOf(x);
    const auto gamma_row = t.value(g).row(0);
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
      const Eigen::RowVectorXd dxhat = dy.row(r).cwiseProduct(gamma_row);
      const double m1 = dxhat.sum() / cols;
      const double m2 = dxhat.dot(xhat->row(r)) / cols;
      dx.row(r).array() +=
          (*inv_std)[r] * (dxhat.array() - m1 - xhat->row(r).array() * m2);
    }
  });
}

Var Tape::Attention(Var q, Var k, Var v, int heads, int sq, int sk,
                    std::vector<uint8_t> key_valid) {
  const Mat& vq = value(q);
  const Mat& vk = value(k);
  const Mat& vv = value(v);
  const int d = static_cast<int>(vq.cols());
  Require(heads > 0 && d % heads == 0, "Attention: heads must divide width");
  Require(sq > 0 && sk > 0 && vq.rows() % sq == 0, "Attention: query blocks");
  const int groups = static_cast<int>(vq.rows() / sq);
  Require(vk.rows() == static_cast<Eigen::Index>(groups) * sk &&
              vv.rows() == vk.rows() && vk.cols() == d && vv.cols() == d,
          "Attention: key/value shapes");
  Require(key_valid.size() == static_cast<std::size_t>(groups) * sk,
          "Attention: key mask size");
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  // Per (group, head): softmax weights over the valid keys.
  auto probs = std::make_shared<std::vector<Mat>>(static_cast<std::size_t>(groups) * heads);
  auto valid_idx = std::make_shared<std::vector<std::vector<int>>>(groups);
  Mat out = Mat::Zero(vq.rows(), d);
  Mat kv, vvv, s;
  for (int g = 0; g < groups; ++g) {
    auto& idx = (*valid_idx)[g];
    for (int j = 0; j < sk; ++j) {
      if (key_valid[static_cast<std::size_t>(g) * sk + j]) idx.push_back(g * sk + j);
    }
    const int nv = static_cast<int>(idx.size());
    if (nv == 0) continue;
    kv.resize(nv, d);
    vvv.resize(nv, d);
    for (int j = 0; j < nv; ++j) {
      kv.row(j) = vk.row(idx[j]);
      vvv.row(j) = vv.row(idx[j]);
    }
    for (int h = 0; h < heads; ++h) {
      s.noalias() = vq.block(static_cast<Eigen::Index>(g) * sq, h * dh, sq, dh) *
                    kv.middleCols(h * dh, dh).transpose();
      s *= scale;
      for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const double mx = s.row(r).maxCoeff();
        s.row(r) = (s.row(r).array() - mx).exp();
        s.row(r) /= s.row(r).sum();
      }
      out.block(static_cast<Eigen::Index>(g) * sq, h * dh, sq, dh).noalias() =
          s * vvv.middleCols(h * dh, dh);
      (*probs)[static_cast<std::size_t>(g) * heads + h] = s;
    }
  }
  const bool needs = NeedsGrad(q) || NeedsGrad(k) || NeedsGrad(v);
  return Push(std::move(out), needs,
              [q, k, v, heads, sq, groups, dh, scale, probs, valid_idx](
                  Tape& t, Node& self) {
                const Mat& vq = t.value(q);
                const Mat& vk = t.value(k);
                const Mat& vv = t.value(v);
                Mat& dq = t.GradOf(q);
                Mat& dk = t.GradOf(k);
                Mat& dv = t.GradOf(v);
                Mat kv, vvv, dkv, dvv, dp, ds;
                const Eigen::Index d = vq.cols();
                for (int g = 0; g < groups; ++g) {
                  const auto& idx = (*valid_idx)[g];
                  const int nv = static_cast<int>(idx.size());
                  if (nv == 0) continue;
                  kv.resize(nv, d);
                  vvv.resize(nv, d);
                  for (int j = 0; j < nv; ++j) {
                    kv.row(j) = vk.row(idx[j]);
                    vvv.row(j) = vv.row(idx[j]);
                  }
                  dkv = Mat::Zero(nv, d);
                  dvv = Mat::Zero(nv, d);
                  for (int h = 0; h < heads; ++h) {
                    const Mat& p = (*probs)[static_cast<std::size_t>(g) * heads + h];
                    const auto dout = self.grad.block(
                        static_cast<Eigen::Index>(g) * sq, h * dh, sq, dh);
                    dvv.middleCols(h * dh, dh).noalias() += p.transpose() * dout;
                    dp.noalias() = dout * vvv.middleCols(h * dh, dh).transpose();
                    ds = p.cwiseProduct(dp);
                    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
                      const double rs = ds.row(r).sum();
                      ds.row(r) -= p.row(r) * rs;
                    }
                    ds *= scale;
                    dq.block(static_cast<Eigen::Index>(g) * sq, h * dh, sq, dh)
                        .noalias() += ds * kv.middleCols(h * dh, dh);
                    dkv.middleCols(h * dh, dh).noalias() +=
                        ds.transpose() *
                        vq.block(static_cast<Eigen::Index>(g) * sq, h * dh, sq, dh);
                  }
                  for (int j = 0; j < nv; ++j) {
                    dk.row(idx[j]) += dkv.row(j);
                    dv.row(idx[j]) += dvv.row(j);
                  }
                }
              });
}

Var Tape::GatherRows(Var x, std::vector<int> idx) {
  const Mat& vx = value(x);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(idx.size()), vx.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Require(idx[i] < vx.rows(), "GatherRows: index out of range");
    if (idx[i] >= 0) out.row(i) = vx.row(idx[i]);
  }
  return Push(std::move(out), NeedsGrad(x),
              [x, idx = std::move(idx)](Tape& t, Node& self) {
                Mat& g = t.GradOf(x);
                for (std::size_t i = 0; i < idx.size(); ++i) {
                  if (idx[i] >= 0) g.row(idx[i]) += self.grad.row(i);
                }
              });
}

Var Tape::Interleave(Var a, int ga, Var b, int gb) {
  const Mat& va = value(a);
  const Mat& vb = value(b);
  Require(ga > 0 && gb > 0 && va.rows() % ga == 0 && vb.rows() % gb == 0 &&
              va.rows() / ga == vb.rows() / gb && va.cols() == vb.cols(),
          "Interleave: block shapes");
  const Eigen::Index blocks = va.rows() / ga;
  Mat out(va.rows() + vb.rows(), va.cols());
  for (Eigen::Index i = 0; i < blocks; ++i) {
    out.middleRows(i * (ga + gb), ga) = va.middleRows(i * ga, ga);
    out.middleRows(i * (ga + gb) + ga, gb) = vb.middleRows(i * gb, gb);
  }
  return Push(std::move(out), NeedsGrad(a) || NeedsGrad(b),
              [a, ga, b, gb, blocks](Tape& t, Node& self) {
                if (t.NeedsGrad(a)) {
                  Mat& g = t.GradOf(a);
                  for (Eigen::Index i = 0; i < blocks; ++i) {
                    g.middleRows(i * ga, ga) += self.grad.middleRows(i * (ga + gb), ga);
                  }
                }
                if (t.NeedsGrad(b)) {
                  Mat& g = t.GradOf(b);
                  for (Eigen::Index i = 0; i < blocks; ++i) {
                    g.middleRows(i * gb, gb) +=
                        self.grad.middleRows(i * (ga + gb) + ga, gb);
                  }
                }
              });
}

Var Tape::MaskRows(Var x, std::vector<uint8_t> keep) {
  const Mat& vx = value(x);
  Require(keep.size() == static_cast<std::size_t>(vx.rows()), "MaskRows: size");
  Mat out = vx;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    if (!keep[r]) out.row(r).setZero();
  }
  return Push(std::move(out), NeedsGrad(x),
              [x, keep = std::move(keep)](Tape& t, Node& self) {
                Mat& g = t.GradOf(x);
                for (std::size_t r = 0; r < keep.size(); ++r) {
                  if (keep[r]) g.row(r) += self.grad.row(r);
                }
              });
}

Var Tape::Reshape(Var x, int rows, int cols) {
  const Mat& vx = value(x);
  Require(static_cast<Eigen::Index>(rows) * cols == vx.size(), "Reshape: size");
  Mat out = Eigen::Map<const Mat>(vx.data(), rows, cols);
  return Push(std::move(out), NeedsGrad(x), [x](Tape& t, Node& self) {
    Mat& g = t.GradOf(x);
    g += Eigen::Map<const Mat>(self.grad.data(), g.rows(), g.cols());
  });
}

Var Tape::SliceCols(Var x, int begin, int count) {
  const Mat& vx = value(x);
  Require(begin >= 0 && count > 0 && begin + count <= vx.cols(), "SliceCols: range");
  Mat out = vx.middleCols(begin, count);
  return Push(std::move(out), NeedsGrad(x), [x, begin, count](Tape& t, Node& self) {
    t.GradOf(x).middleCols(begin, count) += self.grad;
  });
}

void Tape::Backward(const std::vector<std::pair<Var, Mat>>& seeds) {
  if (backward_done_) {
    throw Error(ErrorCode::kInvalidArgument, "Backward already ran on this tape");
  }
  backward_done_ = true;
  int last = -1;
  for (const auto& [v, g] : seeds) {
    const Mat& val = value(v);
    Require(g.rows() == val.rows() && g.cols() == val.cols(), "Backward: seed shape");
    if (!NeedsGrad(v)) continue;
    GradOf(v) += g;
    last = std::max(last, v.id);
  }
  for (int i = last; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    n.backward(*this, n);
  }
}

}  // namespace deepoint::nn
