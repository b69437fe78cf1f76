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

#include "deepoint/eval/evaluate.h"

#include <map>
#include <sstream>

#include "deepoint/anno/annotate.h"
#include "deepoint/common/error.h"
#include "deepoint/geometry/geometry.h"

namespace deepoint::eval {

Json MetricsReport::ToJson() const {
  return {{"angular_error", angular_error},
          {"precision", prf.precision},
          {"recall", prf.recall},
          {"f1", prf.f1},
          {"precision_undefined", prf.precision_undefined},
          {"instance_recall", instance_recall},
          {"instances", instances},
          {"samples", samples},
          {"pointing_samples", pointing_samples},
          {"confusion", {{"tp", prf.tp}, {"fp", prf.fp}, {"fn", prf.fn}, {"tn", prf.tn}}},
          {"error_map", error_map.ToJson()}};
}

std::string MetricsReport::ToText() const {
  std::ostringstream os;
  os << "Angular error   " << FormatDeg(angular_error) << " deg  (" << pointing_samples
     << " pointing samples)\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "Prec./Rec.      %.3f/%.3f  F1 %.3f%s\n", prf.precision,
                prf.recall, prf.f1, prf.precision_undefined ? "  (precision undefined)" : "");
  os << buf;
  std::snprintf(buf, sizeof buf, "Instance recall %.3f  (%ld instances)\n", instance_recall,
                instances);
  os << buf;
  os << "Samples         " << samples << "\n";
  return os.str();
}

MetricsReport Evaluate(const model::DeePointModel& model, const train::PreparedData& data,
                       const EvaluationOptions& options) {
  const auto& samples = data.split(options.part).samples;
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                std::string("no samples in the ") + train::SplitPartName(options.part) +
                    " split");
  }
  const auto preds = train::PredictSamples(model, data, samples, options.workers);

  MetricsReport r;
  r.error_map = DirectionErrorMap(options.bin_deg);
  r.samples = static_cast<long>(samples.size());
  std::vector<double> p;
  std::vector<bool> gt;
  std::vector<geometry::UnitVec3> pred_dir, gt_dir;
  // Per camera view: frame -> probability, for instance recall.
  std::map<int, std::vector<double>> per_sequence;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    p.push_back(preds[i].p);
    gt.push_back(s.pointing);
    auto& seq_p = per_sequence[s.sequence];
    if (seq_p.empty()) seq_p.assign(data.sequences()[s.sequence].frames.size(), 0.0);
    seq_p[s.frame] = preds[i].p;
    if (!s.pointing) continue;
    pred_dir.push_back(preds[i].nu);
    gt_dir.push_back(s.direction);
    const auto& seq = data.sequences()[s.sequence];
    const auto& cam =
        data.dataset().sessions[seq.session_index].session.room.cameras.Get(seq.camera_id);
    r.error_map.Add(geometry::CameraToWorldDir(cam, s.direction),
                    geometry::AngularErrorDeg(preds[i].nu, s.direction));
  }
  r.pointing_samples = static_cast<long>(pred_dir.size());
  r.prf = FramePrf(p, gt, options.threshold);
  r.angular_error = MeanAngularError(pred_dir, gt_dir);

  const std::vector<sim::SessionRange>* ranges[3] = {
      &data.dataset().splits.train, &data.dataset().splits.val, &data.dataset().splits.test};
  long hit = 0;
  for (const auto& [q, seq_p] : per_sequence) {
    const auto& seq = data.sequences()[q];
    const auto& annotated = data.dataset().sessions[seq.session_index];
    std::vector<anno::PointingInstance> inside;
    for (const auto& range : *ranges[static_cast<int>(options.part)]) {
      if (range.session_id != seq.session_id) continue;
      for (const auto& inst : annotated.annotation.instances) {
        if (inst.start_frame >= range.begin && inst.end_frame < range.end) {
          inside.push_back(inst);
        }
      }
    }
    if (inside.empty()) continue;
    hit += std::lround(InstanceRecall(seq_p, inside, options.threshold) * inside.size());
    r.instances += static_cast<long>(inside.size());
  }
  r.instance_recall = r.instances > 0 ? static_cast<double>(hit) / r.instances : 0.0;
  return r;
}

Json BaselineReport::ToJson() const {
  return {{"elbow_hand", elbow_hand}, {"nose_hand", nose_hand}, {"annotation", annotation},
          {"frames", frames},         {"skipped", skipped}};
}

BaselineReport EvaluateBaselines(const std::vector<anno::AnnotatedSession>& sessions,
                                 double min_confidence) {
  BaselineReport r;
  double se = 0, sn = 0, sa = 0;
  for (const auto& a : sessions) {
    const auto& b = a.session;
    const sim::Side side = b.actor.dominant_side;
    for (int f = 0; f < b.truth.num_frames(); ++f) {
      const auto& label = b.truth.labels[f];
      if (!label.is_pointing || !label.direction) continue;
      const auto& af = a.annotation.frames.at(f);
      Skeleton3D sk;
      bool ok = af.world_direction.has_value();
      for (int j : {static_cast<int>(sim::kNose), sim::ElbowOf(side), sim::WristOf(side)}) {
        if (!ok) break;
        try {
          sk.joints[j] = anno::TriangulateJoint(b.tracks, b.room.cameras, f, j, min_confidence)
                             .position;
          sk.valid[j] = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kInsufficientViews &&
              e.code() != ErrorCode::kDegenerateGeometry) {
            throw;
          }
          ok = false;
        }
      }
      geometry::UnitVec3 de, dn;
      if (ok) {
        try {
          de = BaselineDirection(sk, side, BaselineKind::kElbowHand);
          dn = BaselineDirection(sk, side, BaselineKind::kNoseHand);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kCoincidentPoints) throw;
          ok = false;
        }
      }
      if (!ok) {
        ++r.skipped;
        continue;
      }
      se += geometry::AngularErrorDeg(de, *label.direction);
      sn += geometry::AngularErrorDeg(dn, *label.direction);
      sa += geometry::AngularErrorDeg(*af.world_direction, *label.direction);
      ++r.frames;
    }
  }
  if (r.frames == 0) throw Error(ErrorCode::kNoEvaluableFrames, "no frames for baselines");
  r.elbow_hand = se / r.frames;
  r.nose_hand = sn / r.frames;
  r.annotation = sa / r.frames;
  return r;
}

}  // namespace deepoint::eval
