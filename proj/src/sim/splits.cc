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

#include "deepoint/sim/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "deepoint/common/error.h"

namespace deepoint::sim {

const char* SplitModeName(SplitMode mode) {
  switch (mode) {
    case SplitMode::kTime: return "T";
    case SplitMode::kScene: return "S";
    case SplitMode::kPerson: return "P";
  }
  return "?";
}

SplitMode SplitModeFromName(const std::string& name) {
  if (name == "T" || name == "time") return SplitMode::kTime;
  if (name == "S" || name == "scene") return SplitMode::kScene;
  if (name == "P" || name == "person") return SplitMode::kPerson;
  throw Error(ErrorCode::kInvalidArgument, "unknown split mode '" + name + "'");
}

std::array<int, 3> Apportion(int total, const std::array<int, 3>& weights) {
  const int sum = weights[0] + weights[1] + weights[2];
  if (sum <= 0 || total < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid apportionment");
  }
  std::array<int, 3> out{};
  std::array<double, 3> rem{};
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<int>(std::floor(quota));
    rem[i] = quota - out[i];
    assigned += out[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rem[a] > rem[b]; });
  for (int k = 0; assigned < total; ++k, ++assigned) ++out[order[k % 3]];
  if (total >= 3) {
    for (int i = 0; i < 3; ++i) {
      if (out[i] > 0) continue;
      const int big = static_cast<int>(
          std::max_element(out.begin(), out.end()) - out.begin());
      --out[big];
      ++out[i];
    }
  }
  return out;
}

SplitAssignment MakeSplits(const std::vector<SessionInfo>& sessions,
                           SplitMode mode, const SplitOptions& options) {
  if (sessions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sessions to split");
  }
  std::vector<SessionInfo> sorted = sessions;
  std::sort(sorted.begin(), sorted.end(),
            [](const SessionInfo& a, const SessionInfo& b) {
              return a.session_id < b.session_id;
            });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].num_frames <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "session '" + sorted[i].session_id + "' has no frames");
    }
    if (i > 0 && sorted[i].session_id == sorted[i - 1].session_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate session '" + sorted[i].session_id + "'");
    }
  }

  SplitAssignment out;
  out.mode = mode;
  switch (mode) {
    case SplitMode::kTime: {
      const auto& fr = options.time_fractions;
      if (fr[0] <= 0 || fr[1] <= 0 || fr[2] <= 0) {
        throw Error(ErrorCode::kInvalidArgument, "time fractions must be > 0");
      }
      const double total = fr[0] + fr[1] + fr[2];
      for (const auto& s : sorted) {
        const int n = s.num_frames;
        const int a = static_cast<int>(std::floor(n * fr[0] / total + 1e-9));
        const int b = static_cast<int>(
            std::floor(n * (fr[0] + fr[1]) / total + 1e-9));
        if (a < 1 || b <= a || b >= n) {
          throw Error(ErrorCode::kInvalidArgument,
                      "session '" + s.session_id + "' too short to split");
        }
        out.train.push_back({s.session_id, 0, a - 1});
        out.val.push_back({s.session_id, a, b - 1});
        out.test.push_back({s.session_id, b, n - 1});
      }
      break;
    }
    case SplitMode::kScene: {
      std::set<std::string> rooms;
      for (const auto& s : sorted) rooms.insert(s.room_id);
      if (rooms.size() < 2) {
        throw Error(ErrorCode::kInsufficientDiversity,
                    "scene split needs at least 2 rooms");
      }
      std::string train_room = options.train_room;
      if (!rooms.count(train_room)) train_room = *rooms.begin();
      // Held-out rooms are halved in time: the first half validates, the
      // second half tests.
      for (const auto& s : sorted) {
        if (s.room_id == train_room) {
          out.train.push_back({s.session_id, 0, s.num_frames - 1});
        } else {
          const int h = s.num_frames / 2;
          if (h < 1) {
            throw Error(ErrorCode::kInvalidArgument,
                        "session '" + s.session_id + "' too short to split");
          }
          out.val.push_back({s.session_id, 0, h - 1});
          out.test.push_back({s.session_id, h, s.num_frames - 1});
        }
      }
      break;
    }
    case SplitMode::kPerson: {
      std::set<std::string> actor_set;
      for (const auto& s : sorted) actor_set.insert(s.actor_id);
      if (actor_set.size() < 3) {
        throw Error(ErrorCode::kInsufficientDiversity,
                    "person split needs at least 3 actors");
      }
      const std::vector<std::string> actors(actor_set.begin(),
                                            actor_set.end());
      const auto counts =
          Apportion(static_cast<int>(actors.size()), options.person_ratio);
      std::map<std::string, int> bucket;
      for (std::size_t i = 0; i < actors.size(); ++i) {
        const int k = static_cast<int>(i);
        bucket[actors[i]] = k < counts[0] ? 0 : (k < counts[0] + counts[1] ? 1 : 2);
      }
      for (const auto& s : sorted) {
        SessionRange r{s.session_id, 0, s.num_frames - 1};
        const int b = bucket.at(s.actor_id);
        (b == 0 ? out.train : b == 1 ? out.val : out.test).push_back(r);
      }
      break;
    }
  }
  return out;
}

}  // namespace deepoint::sim
