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

#ifndef DEEPOINT_HARNESS_HARNESS_H_
#define DEEPOINT_HARNESS_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "deepoint/common/json_io.h"
#include "deepoint/eval/metrics.h"
#include "deepoint/model/model.h"
#include "deepoint/train/trainer.h"

namespace deepoint::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kDataEnv = "DEEPOINT_DATA";

// Model and training settings for train / evaluate / ablate. On disk:
// {"preset": "toy" | "full", "model": {...}, "train": {...}}; the two
// documents are merged over the preset, so partial files are fine.
struct RunConfig {
  std::string preset = "toy";
  model::ModelConfig model = model::ModelConfig::Toy();
  train::TrainConfig train = train::TrainConfig::Toy();

  static RunConfig Preset(const std::string& name);  // throws kInvalidArgument
  // Throws kMissingFile / kSchemaError naming the path.
  static RunConfig Load(const std::filesystem::path& path);
  static RunConfig FromJson(const Json& j);
  Json ToJson() const;
};

// $DEEPOINT_DATA when set, else "data".
std::filesystem::path DefaultDataRoot();

// {command, argv, version, compiler, seed, workers, deterministic, config,
// started_utc, outputs}. Written once per CLI run; enough to replay it.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  uint64_t seed = 0;
  int workers = 1;
  bool deterministic = false;
  Json config = Json::object();
  std::vector<std::string> outputs;

  Json ToJson() const;
  void Write(const std::filesystem::path& path) const;
};

// Bin centers and values as Mollweide-ready records:
// {bin_deg, value, bins: [{yaw, pitch, x, y, count, value|null}]}.
Json MollweideGrid(const eval::DirectionErrorMap& map, const std::string& value);

// Equal-area map of a grid from MollweideGrid as a standalone SVG. Empty
// bins are left blank.
std::string MollweideSvg(const Json& grid, const std::string& title);

}  // namespace deepoint::harness

#endif  // DEEPOINT_HARNESS_HARNESS_H_
