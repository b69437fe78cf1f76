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

#ifndef DEEPOINT_NN_TAPE_H_
#define DEEPOINT_NN_TAPE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/nn/parameters.h"

namespace deepoint::nn {

// Handle to a node on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode automatic differentiation over row-major matrices. Every op
// appends a node; Backward() walks the nodes in reverse and accumulates
// gradients into the Parameters bound with Param().
//
// Row conventions: a "sequence" is a contiguous block of rows. Ops that work
// per sequence (Attention, Interleave) take the block sizes explicitly.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that receives no gradient.
  Var Constant(Mat value);
  // Leaf bound to a parameter; its gradient is added to p.grad.
  Var Param(Parameter& p);

  Var MatMul(Var a, Var b);
  Var Add(Var a, Var b);
  // out[r] = a[r] + t[r % t.rows()]. A 1-row t is a broadcast bias.
  Var AddTiled(Var a, Var t);
  Var Linear(Var x, Parameter& w, Parameter& b) {
    return AddTiled(MatMul(x, Param(w)), Param(b));
  }
  // tanh approximation.
  Var Gelu(Var x);
  // Per-row normalization with eps = 1e-5; gamma and beta are 1 x cols.
  Var LayerNorm(Var x, Parameter& gamma, Parameter& beta);

  // Multi-head scaled dot-product attention. q holds G * sq rows, k and v
  // hold G * sk rows; sequence g attends only within its own block. Keys with
  // key_valid[g * sk + j] == 0 are skipped entirely (weight exactly 0, no
  // contribution from their contents). A query whose sequence has no valid
  // key yields a zero row.
  Var Attention(Var q, Var k, Var v, int heads, int sq, int sk,
                std::vector<uint8_t> key_valid);

  // out[i] = x[idx[i]], or a zero row when idx[i] < 0.
  Var GatherRows(Var x, std::vector<int> idx);
  // Alternates blocks: ga rows of a, gb rows of b, ga rows of a, ...
  // a.rows() / ga must equal b.rows() / gb.
  Var Interleave(Var a, int ga, Var b, int gb);
  // Rows with keep[r] == 0 become exactly zero.
  Var MaskRows(Var x, std::vector<uint8_t> keep);
  // Row-major reinterpretation with the same number of entries.
  Var Reshape(Var x, int rows, int cols);
  // Columns [begin, begin + count).
  Var SliceCols(Var x, int begin, int count);

  const Mat& value(Var v) const { return nodes_.at(v.id).value; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Seeds d(objective)/d(output) for each listed output and propagates to
  // every parameter leaf. Can be called once per tape.
  void Backward(const std::vector<std::pair<Var, Mat>>& seeds);

 private:
  struct Node {
    Mat value;
    Mat grad;  // allocated on demand
    bool needs_grad = false;
    Parameter* param = nullptr;
    std::function<void(Tape&, Node&)> backward;
  };

  Var Push(Mat value, bool needs_grad,
           std::function<void(Tape&, Node&)> backward);
  bool NeedsGrad(Var v) const { return nodes_[v.id].needs_grad; }
  // Gradient buffer of v, zero-initialized on first use.
  Mat& GradOf(Var v);

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace deepoint::nn

#endif  // DEEPOINT_NN_TAPE_H_
