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

#include "deepoint/common/json_io.h"

#include <fstream>
#include <sstream>

#include "deepoint/common/error.h"

namespace deepoint {
namespace fs = std::filesystem;

Json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const fs::path& path, const Json& value, int indent) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << value.dump(indent) << "\n";
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void ForEachJsonLine(const fs::path& path,
                     const std::function<void(int, const Json&)>& fn) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(number);
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaError, where + ": " + e.what());
    }
    try {
      fn(number, value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSchemaError &&
          e.code() != ErrorCode::kInvalidArgument) {
        throw;
      }
      throw Error(ErrorCode::kSchemaError, where + ": " + e.what());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaError, where + ": " + e.what());
    }
  }
}

void WriteJsonLines(const fs::path& path, const std::vector<Json>& lines) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const Json& j : lines) out << j.dump() << "\n";
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("expected an object holding '") + key + "'");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("missing field '") + key + "'");
  }
  return *it;
}

double GetNumber(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

int GetInt(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string GetString(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

bool GetBool(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_boolean()) {
    throw Error(ErrorCode::kSchemaError,
                std::string("field '") + key + "' must be a boolean");
  }
  return v.get<bool>();
}

namespace {
template <int N>
Eigen::Matrix<double, N, 1> ToVector(const Json& j) {
  if (!j.is_array() || j.size() != N) {
    throw Error(ErrorCode::kSchemaError,
                "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kSchemaError, "array entries must be numbers");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}
}  // namespace

Eigen::Vector3d ToVector3(const Json& j) { return ToVector<3>(j); }
Eigen::Vector2d ToVector2(const Json& j) { return ToVector<2>(j); }

Json FromVector(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace deepoint
