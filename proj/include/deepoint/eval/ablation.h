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

#ifndef DEEPOINT_EVAL_ABLATION_H_
#define DEEPOINT_EVAL_ABLATION_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deepoint/eval/evaluate.h"
#include "deepoint/model/model.h"
#include "deepoint/train/trainer.h"

namespace deepoint::eval {

// Full-scale figures printed beside ours for context; never compared.
struct ReferenceCell {
  double angular_deg = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct AblationGrid {
  std::vector<int> windows;                // rows of the window table
  bool no_temporal_encoder = false;        // adds "DP w/o TE"
  std::vector<std::string> body_parts;     // JointsForParts specs
  std::vector<tokenizer::Variant> variants;
  std::vector<double> lambdas;             // loss-weight sweep

  // N in {1, 5, 15, 30}, w/o TE, Hand&Head and Hand.
  static AblationGrid Standard();
  static AblationGrid FromJson(const Json& j);
};

struct AblationCell {
  std::string table;  // "window", "temporal_encoder", "body_parts", "variant", "lambda"
  std::string label;  // row label, e.g. "N=15", "DP w/o TE"
  model::ModelConfig model;
  train::TrainConfig train;
  std::optional<ReferenceCell> reference;
};

// Cells in table order. Each non-window table starts with the base "DP" row;
// identical configurations are trained once.
std::vector<AblationCell> ExpandGrid(const AblationGrid& grid, const model::ModelConfig& base,
                                     const train::TrainConfig& base_train);

struct AblationRow {
  AblationCell cell;
  bool ok = false;
  std::string error;  // set when the cell failed; the run continues
  MetricsReport report;
  int best_epoch = 0;
  double seconds = 0.0;
  int64_t parameters = 0;
};

struct AblationOptions {
  EvaluationOptions eval;
  std::filesystem::path out_dir;  // per-cell logs and checkpoints when set
  std::function<void(const AblationRow&)> on_row;
};

std::vector<AblationRow> RunAblation(const train::PreparedData& data,
                                     const std::vector<AblationCell>& cells,
                                     const AblationOptions& options = {});

// One markdown table per `table` value, rows in cell order.
std::string FormatAblationTables(const std::vector<AblationRow>& rows);
Json AblationToJson(const std::vector<AblationRow>& rows);

}  // namespace deepoint::eval

#endif  // DEEPOINT_EVAL_ABLATION_H_
