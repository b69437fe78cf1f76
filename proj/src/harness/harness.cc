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

#include "deepoint/harness/harness.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <sstream>

#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"

namespace deepoint::harness {

RunConfig RunConfig::Preset(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "toy") {
    c.model = model::ModelConfig::Toy();
    c.train = train::TrainConfig::Toy();
  } else if (name == "full") {
    c.model = model::ModelConfig::FullScale();
    c.train = train::TrainConfig{};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + name + "' (toy, full)");
  }
  return c;
}

RunConfig RunConfig::FromJson(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaError, "run config must be an object");
  RunConfig c = Preset(j.value("preset", std::string("toy")));
  Json model = c.model.ToJson();
  Json train = c.train.ToJson();
  if (j.contains("model")) model.merge_patch(j["model"]);
  if (j.contains("train")) train.merge_patch(j["train"]);
  c.model = model::ModelConfig::FromJson(model);
  c.train = train::TrainConfig::FromJson(train);
  c.train.Validate();
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  const Json j = ReadJsonFile(path);
  try {
    return FromJson(j);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Json RunConfig::ToJson() const {
  return {{"preset", preset}, {"model", model.ToJson()}, {"train", train.ToJson()}};
}

std::filesystem::path DefaultDataRoot() {
  const char* env = std::getenv(kDataEnv);
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : "data";
}

Json Manifest::ToJson() const {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"command", command},
          {"argv", argv},
          {"version", kVersion},
          {"compiler", __VERSION__},
          {"seed", seed},
          {"workers", workers},
          {"deterministic", deterministic},
          {"config", config},
          {"started_utc", stamp},
          {"outputs", outputs}};
}

void Manifest::Write(const std::filesystem::path& path) const { WriteJsonFile(path, ToJson()); }

Json MollweideGrid(const eval::DirectionErrorMap& map, const std::string& value) {
  if (value != "count" && value != "mean") {
    throw Error(ErrorCode::kInvalidArgument, "grid value must be 'count' or 'mean'");
  }
  Json j = map.ToJson();
  j["value"] = value;
  for (auto& b : j["bins"]) {
    if (value == "count") {
      b["value"] = b["count"].get<long>() > 0 ? Json(b["count"]) : Json(nullptr);
    } else {
      b["value"] = b["mean"];
    }
  }
  return j;
}

namespace {

// Five-stop viridis approximation.
std::string Color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(kStops[i][0] + f * (kStops[i + 1][0] - kStops[i][0]))),
                static_cast<int>(std::lround(kStops[i][1] + f * (kStops[i + 1][1] - kStops[i][1]))),
                static_cast<int>(std::lround(kStops[i][2] + f * (kStops[i + 1][2] - kStops[i][2]))));
  return buf;
}

}  // namespace

std::string MollweideSvg(const Json& grid, const std::string& title) {
  constexpr double kRad = std::numbers::pi / 180.0;
  constexpr double kScale = 150.0, kW = 2 * 2.8284271247461903 * kScale + 40,
                   kH = 2 * 1.4142135623730951 * kScale + 80;
  auto px = [&](double yaw_deg, double pitch_deg) {
    const auto p = geometry::Mollweide(yaw_deg * kRad, pitch_deg * kRad);
    return std::pair(kW / 2 + kScale * p.x, 50 + 1.4142135623730951 * kScale - kScale * p.y);
  };
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& b : grid.at("bins")) {
    if (b["value"].is_null()) continue;
    lo = std::min(lo, b["value"].get<double>());
    hi = std::max(hi, b["value"].get<double>());
  }
  const double h = grid.at("bin_deg").get<double>() / 2;
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"20\" y=\"25\" font-family=\"sans-serif\" font-size=\"15\">" << title
     << "</text>\n";
  for (const auto& b : grid.at("bins")) {
    if (b["value"].is_null()) continue;
    const double yaw = b["yaw"], pitch = b["pitch"];
    const double y0 = yaw - h, y1 = yaw + h, p0 = std::max(-90.0, pitch - h),
                 p1 = std::min(90.0, pitch + h);
    os << "<polygon fill=\"" << Color(hi > lo ? (b["value"].get<double>() - lo) / (hi - lo) : 0.5)
       << "\" stroke=\"none\" points=\"";
    constexpr int kSteps = 4;
    auto emit = [&](double a, double p) {
      const auto [x, y] = px(a, p);
      os << x << "," << y << " ";
    };
    for (int k = 0; k <= kSteps; ++k) emit(y0 + (y1 - y0) * k / kSteps, p0);
    for (int k = 0; k <= kSteps; ++k) emit(y1, p0 + (p1 - p0) * k / kSteps);
    for (int k = kSteps; k >= 0; --k) emit(y0 + (y1 - y0) * k / kSteps, p1);
    for (int k = kSteps; k >= 0; --k) emit(y0, p0 + (p1 - p0) * k / kSteps);
    os << "\"/>\n";
  }
  const auto [cx, cy] = px(0, 0);
  os << "<ellipse cx=\"" << cx << "\" cy=\"" << cy << "\" rx=\"" << 2.8284271247461903 * kScale
     << "\" ry=\"" << 1.4142135623730951 * kScale
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (std::isfinite(lo)) {
    os << "<text x=\"20\" y=\"" << kH - 10 << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << grid.value("value", std::string("value")) << ": " << lo << " (dark) to " << hi
       << " (light)</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace deepoint::harness
