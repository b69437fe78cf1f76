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

#ifndef DEEPOINT_SIM_SPLITS_H_
#define DEEPOINT_SIM_SPLITS_H_

#include <array>
#include <string>
#include <vector>

namespace deepoint::sim {

enum class SplitMode { kTime, kScene, kPerson };

const char* SplitModeName(SplitMode mode);  // "T", "S", "P"
SplitMode SplitModeFromName(const std::string& name);

struct SessionInfo {
  std::string session_id;
  std::string room_id;
  std::string actor_id;
  int num_frames = 0;
};

// Inclusive frame range of one session.
struct SessionRange {
  std::string session_id;
  int begin = 0;
  int end = 0;
  bool operator==(const SessionRange&) const = default;
};

struct SplitAssignment {
  SplitMode mode = SplitMode::kTime;
  std::vector<SessionRange> train;
  std::vector<SessionRange> val;
  std::vector<SessionRange> test;
  bool operator==(const SplitAssignment&) const = default;
};

struct SplitOptions {
  // Time split fractions (train, val, test).
  std::array<double, 3> time_fractions = {0.70, 0.15, 0.15};
  // Person split subject ratio, apportioned to the available actor count.
  std::array<int, 3> person_ratio = {25, 4, 4};
  // Scene split training room; empty picks the lexicographically first room.
  std::string train_room = "living_room";
};

// Largest-remainder apportionment of `total` items by `weights`. Any empty
// bucket takes one item from the currently largest one.
std::array<int, 3> Apportion(int total, const std::array<int, 3>& weights);

// Throws kInsufficientDiversity (S: fewer than 2 rooms; P: fewer than 3
// actors) or kInvalidArgument.
SplitAssignment MakeSplits(const std::vector<SessionInfo>& sessions,
                           SplitMode mode, const SplitOptions& options = {});

}  // namespace deepoint::sim

#endif  // DEEPOINT_SIM_SPLITS_H_
