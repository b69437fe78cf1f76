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

#ifndef DEEPOINT_SIM_BENCHMARK_H_
#define DEEPOINT_SIM_BENCHMARK_H_

#include <cstdint>
#include <vector>

#include "deepoint/sim/observe.h"
#include "deepoint/sim/session.h"
#include "deepoint/sim/session_io.h"

namespace deepoint::sim {

struct BenchmarkOptions {
  int num_rooms = 2;
  int num_actors = 8;
  int cameras_per_room = 6;
  int markers_per_room = 40;
  double duration_s = 120.0;
  NoiseModel noise;
  SessionOptions session;
  int workers = 1;
};

// Room i is "living_room", "office", then "room_<i>"; layouts alternate.
std::vector<RoomSpec> MakeRooms(const BenchmarkOptions& options, uint64_t seed);

// Every actor records one session in every room. Sessions are ordered by
// session id; streams are derived from (seed, session id, camera id), so
// the result does not depend on `workers`.
std::vector<SessionBundle> MakeBenchmark(const BenchmarkOptions& options,
                                         uint64_t seed);

std::vector<SessionInfo> Describe(const std::vector<SessionBundle>& sessions);

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_BENCHMARK_H_
