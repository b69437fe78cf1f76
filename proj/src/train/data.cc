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

#include "deepoint/train/data.h"

#include <algorithm>
#include <map>

#include "deepoint/common/error.h"
#include "deepoint/common/parallel.h"
#include "deepoint/tokenizer/raster.h"

namespace deepoint::train {

const char* SplitPartName(SplitPart p) {
  switch (p) {
    case SplitPart::kTrain: return "train";
    case SplitPart::kVal: return "val";
    case SplitPart::kTest: return "test";
  }
  return "?";
}

PreparedData PreparedData::Build(const anno::Dataset& dataset, const DataOptions& options) {
  options.features.Validate();
  PreparedData d;
  d.dataset_ = &dataset;
  d.options_ = options;

  std::unique_ptr<tokenizer::RasterBackbone> backbone;
  if (options.features.mode == tokenizer::FeatureMode::kRaster) {
    backbone = std::make_unique<tokenizer::RasterBackbone>(
        options.features.backbone_channels, options.features.backbone_seed);
  }
  std::map<std::string, int> first_sequence;
  for (std::size_t s = 0; s < dataset.sessions.size(); ++s) {
    const auto& bundle = dataset.sessions[s].session;
    first_sequence[bundle.truth.session_id] = static_cast<int>(d.sequences_.size());
    for (const auto& track : bundle.tracks) {
      CameraSequence seq;
      seq.session_index = static_cast<int>(s);
      seq.session_id = bundle.truth.session_id;
      seq.camera_id = track.camera_id;
      d.sequences_.push_back(std::move(seq));
    }
  }
  ParallelFor(d.sequences_.size(), options.workers, [&](std::size_t i) {
    CameraSequence& seq = d.sequences_[i];
    const auto& bundle = dataset.sessions[seq.session_index].session;
    seq.frames = tokenizer::ExtractTrack(bundle.Track(seq.camera_id),
                                         bundle.room.cameras.Get(seq.camera_id),
                                         options.features, backbone.get());
  });

  const std::vector<sim::SessionRange>* ranges[3] = {
      &dataset.splits.train, &dataset.splits.val, &dataset.splits.test};
  for (int part = 0; part < 3; ++part) {
    SplitSamples& out = d.splits_[part];
    for (const auto& range : *ranges[part]) {
      const int s_index = first_sequence.at(range.session_id);
      const auto& annotated = dataset.Get(range.session_id);
      const int cams = static_cast<int>(annotated.session.tracks.size());
      for (int f = range.begin; f < range.end; ++f) {
        const anno::AnnotatedFrame& af = annotated.annotation.frames.at(f);
        ++out.frame_pairs;
        if (af.is_pointing && af.camera_directions.empty()) {
          ++out.skipped_missing_direction;
          continue;
        }
        for (int c = 0; c < cams; ++c) {
          const int q = s_index + c;
          const auto& feat = d.sequences_[q].frames[f];
          const int valid = static_cast<int>(std::count(feat.mask.begin(), feat.mask.end(), true));
          if (valid < options.min_valid_joints) {
            ++out.skipped_few_joints;
            continue;
          }
          Sample smp;
          smp.sequence = q;
          smp.frame = f;
          smp.pointing = af.is_pointing;
          if (af.is_pointing) smp.direction = af.camera_directions.at(d.sequences_[q].camera_id);
          out.samples.push_back(smp);
        }
      }
    }
  }
  return d;
}

std::vector<const tokenizer::FrameFeatures*> PreparedData::Window(const Sample& s,
                                                                  int window) const {
  const auto& frames = sequences_.at(s.sequence).frames;
  std::vector<const tokenizer::FrameFeatures*> w(window, nullptr);
  for (int i = 0; i < window; ++i) {
    const int f = s.frame - (window - 1 - i);
    if (f >= 0) w[i] = &frames.at(f);
  }
  return w;
}

std::vector<model::PointingOutput> PredictSamples(const model::DeePointModel& model,
                                                  const PreparedData& data,
                                                  const std::vector<Sample>& samples,
                                                  int workers) {
  const int w = model.config().window_size();
  std::map<int, std::vector<std::size_t>> by_sequence;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_sequence[samples[i].sequence].push_back(i);
  }
  std::vector<std::pair<int, std::vector<std::size_t>>> jobs(by_sequence.begin(),
                                                             by_sequence.end());
  std::vector<model::PointingOutput> out(samples.size());
  ParallelFor(jobs.size(), workers, [&](std::size_t j) {
    const auto& [seq_index, idx] = jobs[j];
    const auto& frames = data.sequences().at(seq_index).frames;
    int lo = samples[idx.front()].frame, hi = lo;
    for (std::size_t i : idx) {
      lo = std::min(lo, samples[i].frame);
      hi = std::max(hi, samples[i].frame);
    }
    lo = std::max(0, lo - (w - 1));
    std::vector<const tokenizer::FrameFeatures*> span;
    for (int f = lo; f <= hi; ++f) span.push_back(&frames.at(f));
    const Eigen::MatrixXd emb = model.EmbedFrames(span);
    std::vector<int> windows;
    windows.reserve(idx.size() * w);
    for (std::size_t i : idx) {
      for (int k = 0; k < w; ++k) {
        const int f = samples[i].frame - (w - 1 - k);
        windows.push_back(f >= lo ? f - lo : -1);
      }
    }
    const auto preds = model.PredictFromEmbeddings(emb, windows, static_cast<int>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = preds[k];
  });
  return out;
}

}  // namespace deepoint::train
