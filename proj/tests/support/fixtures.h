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

#ifndef DEEPOINT_TESTS_SUPPORT_FIXTURES_H_
#define DEEPOINT_TESTS_SUPPORT_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "deepoint/anno/dataset.h"
#include "deepoint/harness/checks.h"
#include "deepoint/model/model.h"
#include "deepoint/sim/benchmark.h"
#include "deepoint/train/trainer.h"

namespace deepoint::testing {

// Simulated, annotated benchmark held in memory.
inline anno::Dataset MakeDataset(const sim::BenchmarkOptions& options, uint64_t seed,
                                 sim::SplitMode mode = sim::SplitMode::kTime) {
  const auto sessions = sim::MakeBenchmark(options, seed);
  anno::Dataset ds;
  for (const auto& b : sessions) ds.sessions.push_back({b, anno::AnnotateFrames(b)});
  ds.splits = sim::MakeSplits(sim::Describe(sessions), mode);
  return ds;
}

inline anno::Dataset SmallDataset(int rooms = 1, int actors = 2, double duration_s = 30.0,
                                  uint64_t seed = 5) {
  sim::BenchmarkOptions o;
  o.num_rooms = rooms;
  o.num_actors = actors;
  o.duration_s = duration_s;
  return MakeDataset(o, seed);
}

using harness::CheckFullLossGradient;
using harness::GradientCheck;

}  // namespace deepoint::testing

#endif  // DEEPOINT_TESTS_SUPPORT_FIXTURES_H_
