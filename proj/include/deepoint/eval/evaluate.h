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

#ifndef DEEPOINT_EVAL_EVALUATE_H_
#define DEEPOINT_EVAL_EVALUATE_H_

#include <string>
#include <vector>

#include "deepoint/anno/dataset.h"
#include "deepoint/eval/metrics.h"
#include "deepoint/model/model.h"
#include "deepoint/train/data.h"

namespace deepoint::eval {

struct EvaluationOptions {
  train::SplitPart part = train::SplitPart::kTest;
  double threshold = kDecisionThreshold;
  double bin_deg = 15.0;
  int workers = 1;
};

struct MetricsReport {
  double angular_error = 0.0;  // degrees, over pointing samples
  Prf prf;
  double instance_recall = 0.0;
  long instances = 0;
  long samples = 0;
  long pointing_samples = 0;
  DirectionErrorMap error_map;  // binned by world-frame ground truth

  Json ToJson() const;
  std::string ToText() const;
};

// One sample per (frame, camera) of the chosen split. Each camera view is
// its own sequence for instance recall; instances must lie inside the split
// range to count.
MetricsReport Evaluate(const model::DeePointModel& model, const train::PreparedData& data,
                       const EvaluationOptions& options = {});

struct BaselineReport {
  double elbow_hand = 0.0;  // mean degrees vs simulator truth
  double nose_hand = 0.0;
  double annotation = 0.0;  // annotated direction vs truth, same frames
  long frames = 0;
  long skipped = 0;  // pointing frames lacking a joint or a direction
  Json ToJson() const;
};

// Geometric baselines from triangulated joints on pointing frames that carry
// a simulator-truth direction; all three errors use the same frames.
BaselineReport EvaluateBaselines(const std::vector<anno::AnnotatedSession>& sessions,
                                 double min_confidence = geometry::kDefaultMinConfidence);

}  // namespace deepoint::eval

#endif  // DEEPOINT_EVAL_EVALUATE_H_
