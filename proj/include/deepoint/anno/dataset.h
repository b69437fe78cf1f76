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

#ifndef DEEPOINT_ANNO_DATASET_H_
#define DEEPOINT_ANNO_DATASET_H_

#include <filesystem>
#include <string>
#include <vector>

#include "deepoint/anno/annotate.h"
#include "deepoint/common/json_io.h"
#include "deepoint/sim/session_io.h"
#include "deepoint/sim/splits.h"

namespace deepoint::anno {

struct AnnotatedSession {
  sim::SessionBundle session;
  SessionAnnotation annotation;

  const std::string& id() const { return session.truth.session_id; }
};

struct Dataset {
  std::vector<AnnotatedSession> sessions;  // sorted by id
  sim::SplitAssignment splits;

  // Throws kInvalidArgument for an unknown id.
  const AnnotatedSession& Get(const std::string& session_id) const;
};

// annotations.jsonl record. Absent optionals are omitted.
Json AnnotatedFrameToJson(const AnnotatedFrame& f);
AnnotatedFrame AnnotatedFrameFromJson(const Json& j);

// Every range must name a known session and lie within its frames.
// Throws kInvalidArgument.
void ValidateSplits(const sim::SplitAssignment& splits,
                    const std::vector<sim::SessionInfo>& sessions);

// Writes each session directory plus session_<id>/annotations.jsonl and
// root/splits.json.
void ExportDataset(const std::filesystem::path& root,
                   const std::vector<AnnotatedSession>& sessions,
                   const sim::SplitAssignment& splits);

// Loads every session under root and splits.json. Throws kMissingFile /
// kSchemaError with the offending path (and line for JSONL files).
Dataset LoadDataset(const std::filesystem::path& root);

}  // namespace deepoint::anno

#endif  // DEEPOINT_ANNO_DATASET_H_
