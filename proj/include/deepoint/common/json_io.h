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

#ifndef DEEPOINT_COMMON_JSON_IO_H_
#define DEEPOINT_COMMON_JSON_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace deepoint {

using Json = nlohmann::json;

// Throws kMissingFile / kSchemaError (with the path in the message).
Json ReadJsonFile(const std::filesystem::path& path);
// Creates parent directories. Throws kIoError.
void WriteJsonFile(const std::filesystem::path& path, const Json& value,
                   int indent = 2);

// Calls `fn(line_number, value)` for each non-empty line (1-based). Parse
// errors and kSchemaError thrown by `fn` are rethrown as kSchemaError naming
// the file and line.
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(int, const Json&)>& fn);
void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& lines);

// Field access helpers; all throw kSchemaError.
const Json& Field(const Json& j, const char* key);
double GetNumber(const Json& j, const char* key);
int GetInt(const Json& j, const char* key);
std::string GetString(const Json& j, const char* key);
bool GetBool(const Json& j, const char* key);
Eigen::Vector3d ToVector3(const Json& j);
Eigen::Vector2d ToVector2(const Json& j);
Json FromVector(const Eigen::VectorXd& v);

}  // namespace deepoint

#endif  // DEEPOINT_COMMON_JSON_IO_H_
