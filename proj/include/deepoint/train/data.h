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

#ifndef DEEPOINT_TRAIN_DATA_H_
#define DEEPOINT_TRAIN_DATA_H_

#include <memory>
#include <string>
#include <vector>

#include "deepoint/anno/dataset.h"
#include "deepoint/geometry/unit_vec.h"
#include "deepoint/model/model.h"
#include "deepoint/tokenizer/features.h"

namespace deepoint::train {

enum class SplitPart { kTrain, kVal, kTest };
const char* SplitPartName(SplitPart p);

struct DataOptions {
  tokenizer::FeatureConfig features;
  // A (frame, camera) pair needs this many detected joints to be used.
  int min_valid_joints = 5;
  int workers = 1;
};

// Features of one session seen from one camera, for every frame.
struct CameraSequence {
  int session_index = 0;
  std::string session_id;
  std::string camera_id;
  std::vector<tokenizer::FrameFeatures> frames;
};

struct Sample {
  int sequence = 0;
  int frame = 0;
  bool pointing = false;
  geometry::UnitVec3 direction;  // camera frame; valid when pointing
};

struct SplitSamples {
  std::vector<Sample> samples;
  long frame_pairs = 0;                // labelled (session, frame) pairs
  long skipped_missing_direction = 0;  // pointing frames the annotator excluded
  long skipped_few_joints = 0;         // (frame, camera) pairs
};

class PreparedData {
 public:
  static PreparedData Build(const anno::Dataset& dataset, const DataOptions& options);

  const std::vector<CameraSequence>& sequences() const { return sequences_; }
  std::vector<CameraSequence>& mutable_sequences() { return sequences_; }
  const SplitSamples& split(SplitPart p) const { return splits_[static_cast<int>(p)]; }
  const DataOptions& options() const { return options_; }
  const anno::Dataset& dataset() const { return *dataset_; }

  // Window of frame pointers ending at s.frame, oldest first; nullptr pads
  // positions before the start of the sequence.
  std::vector<const tokenizer::FrameFeatures*> Window(const Sample& s, int window) const;

 private:
  const anno::Dataset* dataset_ = nullptr;
  DataOptions options_;
  std::vector<CameraSequence> sequences_;
  SplitSamples splits_[3];
};

// Predictions for each sample, in order. Embeds each sequence once over the
// span its samples need; parallel across sequences.
std::vector<model::PointingOutput> PredictSamples(const model::DeePointModel& model,
                                                  const PreparedData& data,
                                                  const std::vector<Sample>& samples,
                                                  int workers = 1);

}  // namespace deepoint::train

#endif  // DEEPOINT_TRAIN_DATA_H_
