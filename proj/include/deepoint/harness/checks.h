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

#ifndef DEEPOINT_HARNESS_CHECKS_H_
#define DEEPOINT_HARNESS_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "deepoint/model/model.h"
#include "deepoint/train/data.h"

namespace deepoint::harness {

// One pass/fail property check with a human-readable summary.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string FormatCheck(const CheckResult& r);  // "PASS  name: detail (1.2 s)"

struct GradientCheck {
  int checked = 0;
  int skipped_zero = 0;  // analytic and numeric both below 1e-10
  double worst_relative = 0.0;
};

// Mean PointingLoss over `batch`; analytic parameter gradients vs central
// differences at `coordinates` random parameter entries.
GradientCheck CheckFullLossGradient(model::DeePointModel& model, const train::PreparedData& data,
                                    const std::vector<train::Sample>& batch, int coordinates,
                                    double step, uint64_t seed, double lambda = 1.0);

// Noiseless project -> triangulate over random rigs of 2..7 cameras.
CheckResult CheckTriangulationRoundTrip(int configurations, uint64_t seed);

// Noiseless sessions: every annotated direction within 0.1 deg of truth.
// Noisy benchmark (2 rooms x 5 actors, 60 s, 6 cameras): mean error below
// `noisy_bound_deg`.
CheckResult CheckAnnotationEquivalence(double noisy_bound_deg, uint64_t noisy_seed,
                                       int noiseless_sessions = 10);

// End-to-end forward on simulated frames is unchanged when masked joint
// rows, padded positional slots and unreferenced frames are rewritten.
CheckResult CheckMaskedInvariance(int trials, uint64_t seed);

// Toy model on simulated windows, 100 coordinates at step 1e-4.
CheckResult CheckLossGradient(int coordinates, uint64_t seed);

// Untrained toy model against uniform random directions.
CheckResult CheckUntrainedBaseline(int windows, uint64_t seed);

// Full-scale Temporal Encoder and MLP ablation sizes.
CheckResult CheckParameterAnchors();

// Geometric baselines on the noisy benchmark.
CheckResult CheckBaselineOrdering(uint64_t seed);

}  // namespace deepoint::harness

#endif  // DEEPOINT_HARNESS_CHECKS_H_
