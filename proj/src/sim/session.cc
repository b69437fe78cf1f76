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

#include "deepoint/sim/session.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "deepoint/common/error.h"
#include "deepoint/common/random.h"
#include "deepoint/geometry/geometry.h"

namespace deepoint::sim {
namespace {

using Eigen::Vector3d;

const Vector3d kUp(0.0, 0.0, 1.0);
constexpr double kWaypointMargin = 0.7;
constexpr double kObstacleClearance = 0.4;
constexpr double kStrideLength = 1.4;  // meters per full gait cycle
constexpr double kSeatHeight = 0.45;

double Smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

double WrapAngle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

Vector3d Slerp(const Vector3d& a, const Vector3d& b, double t,
               const Vector3d& detour) {
  const double cosang = std::clamp(a.dot(b), -1.0, 1.0);
  const double ang = std::acos(cosang);
  if (ang < 1e-6) return b;
  if (ang > M_PI - 1e-3) {
    // Nearly opposite: go through the detour direction.
    return t < 0.5 ? Slerp(a, detour, 2.0 * t, detour)
                   : Slerp(detour, b, 2.0 * t - 1.0, detour);
  }
  const double s = std::sin(ang);
  return (std::sin((1.0 - t) * ang) / s) * a + (std::sin(t * ang) / s) * b;
}

// Timing of one gesture, in frames. The button interval is
// [hold_start, hold_end].
struct Gesture {
  int onset = 0;
  int raise = 0;
  int settle = 0;
  int hold = 0;
  int lower = 0;
  std::string marker_id;
  Vector3d marker = Vector3d::Zero();

  int hold_start() const { return onset + raise + settle; }
  int hold_end() const { return hold_start() + hold - 1; }
  int last_frame() const { return hold_end() + lower; }
};

struct BodyPose {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double yaw = 0.0;
  double sit = 0.0;  // 0 standing, 1 seated
  double gait_phase = 0.0;
  double gait_amplitude = 0.0;
};

// Body without the arms and head orientation; shoulders are needed before
// the pointing arm can be placed.
struct Trunk {
  Vector3d forward, left;
  Vector3d pelvis, neck;
  Vector3d shoulder[2];  // [left, right]
  Vector3d hip[2];
};

Trunk BuildTrunk(const ActorSpec& actor, const BodyPose& body) {
  const double h = actor.height;
  Trunk t;
  t.forward = Vector3d(std::cos(body.yaw), std::sin(body.yaw), 0.0);
  t.left = Vector3d(-std::sin(body.yaw), std::cos(body.yaw), 0.0);
  const double stand_hip = 0.53 * h;
  const double hip_z = (1.0 - body.sit) * stand_hip + body.sit * kSeatHeight;
  t.pelvis = Vector3d(body.position.x(), body.position.y(), hip_z);
  const Vector3d shoulder_center = t.pelvis + 0.29 * h * kUp;
  t.neck = shoulder_center + 0.05 * h * kUp;
  t.shoulder[0] = shoulder_center + 0.115 * h * t.left;
  t.shoulder[1] = shoulder_center - 0.115 * h * t.left;
  t.hip[0] = t.pelvis + 0.09 * h * t.left;
  t.hip[1] = t.pelvis - 0.09 * h * t.left;
  return t;
}

Vector3d RestArmDir(const Trunk& t, const BodyPose& body, int side) {
  const double sign = side == 0 ? 1.0 : -1.0;
  // Arms swing opposite to the same-side leg.
  const double swing =
      -0.6 * body.gait_amplitude * std::sin(body.gait_phase + (side == 0 ? 0.0 : M_PI));
  const Vector3d standing =
      (-kUp * std::cos(swing) + t.forward * std::sin(swing) +
       0.08 * sign * t.left)
          .normalized();
  const Vector3d seated = (-kUp + 0.8 * t.forward + 0.05 * sign * t.left).normalized();
  return ((1.0 - body.sit) * standing + body.sit * seated).normalized();
}

void PlaceLegs(const ActorSpec& actor, const BodyPose& body, const Trunk& t,
               Skeleton& s) {
  const double thigh = 0.245 * actor.height;
  const double shin = 0.246 * actor.height;
  for (int side = 0; side < 2; ++side) {
    const double phase = body.gait_phase + (side == 0 ? 0.0 : M_PI);
    const double swing = body.gait_amplitude * std::sin(phase);
    const double bend = 0.5 * body.gait_amplitude * std::max(0.0, std::cos(phase));
    const Vector3d knee_stand =
        t.hip[side] + thigh * (-kUp * std::cos(swing) + t.forward * std::sin(swing));
    const Vector3d ankle_stand =
        knee_stand + shin * (-kUp * std::cos(swing - bend) +
                             t.forward * std::sin(swing - bend));
    const Vector3d knee_sit = t.hip[side] + thigh * t.forward;
    const Vector3d ankle_sit =
        Vector3d(knee_sit.x(), knee_sit.y(), std::max(0.05, knee_sit.z() - shin)) +
        0.05 * t.forward;
    const int knee = side == 0 ? kLeftKnee : kRightKnee;
    const int ankle = side == 0 ? kLeftAnkle : kRightAnkle;
    s[knee] = (1.0 - body.sit) * knee_stand + body.sit * knee_sit;
    s[ankle] = (1.0 - body.sit) * ankle_stand + body.sit * ankle_sit;
  }
}

void PlaceHead(const ActorSpec& actor, const Trunk& t, double yaw,
               double pitch, Skeleton& s) {
  const double h = actor.height;
  const Vector3d fh(std::cos(yaw) * std::cos(pitch),
                    std::sin(yaw) * std::cos(pitch), std::sin(pitch));
  const Vector3d lh(-std::sin(yaw), std::cos(yaw), 0.0);
  const Vector3d uh = fh.cross(lh);
  const Vector3d center = t.neck + 0.07 * h * kUp;
  s[kNose] = center + 0.055 * h * fh - 0.01 * h * uh;
  s[kLeftEye] = center + 0.045 * h * fh + 0.03 * h * lh + 0.015 * h * uh;
  s[kRightEye] = center + 0.045 * h * fh - 0.03 * h * lh + 0.015 * h * uh;
  s[kLeftEar] = center - 0.005 * h * fh + 0.07 * h * lh;
  s[kRightEar] = center - 0.005 * h * fh - 0.07 * h * lh;
}

bool MarkerVisible(const RoomSpec& room, const Vector3d& eye,
                   const Vector3d& shoulder, const Marker& m,
                   double min_distance) {
  if ((m.position - shoulder).norm() < min_distance) return false;
  for (const Box& b : room.obstacles) {
    if (b.SegmentIntersects(eye, m.position, 0.01)) return false;
  }
  return true;
}

// Footprint of an obstacle grown by the walking clearance, spanning all z.
Box Footprint(const Box& b) {
  Box f = b;
  f.min.x() -= kObstacleClearance;
  f.min.y() -= kObstacleClearance;
  f.max.x() += kObstacleClearance;
  f.max.y() += kObstacleClearance;
  f.min.z() = -1.0;
  f.max.z() = 10.0;
  return f;
}

bool WalkableSegment(const RoomSpec& room, const Eigen::Vector2d& a,
                     const Eigen::Vector2d& b) {
  for (const Box& o : room.obstacles) {
    if (Footprint(o).SegmentIntersects(Vector3d(a.x(), a.y(), 1.0),
                                       Vector3d(b.x(), b.y(), 1.0))) {
      return false;
    }
  }
  return true;
}

Eigen::Vector2d RandomFloorPoint(const RoomSpec& room, Rng& rng) {
  const auto& lo = room.bounds.min;
  const auto& hi = room.bounds.max;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Eigen::Vector2d p(Uniform(rng, lo.x() + kWaypointMargin, hi.x() - kWaypointMargin),
                            Uniform(rng, lo.y() + kWaypointMargin, hi.y() - kWaypointMargin));
    bool free = true;
    for (const Box& o : room.obstacles) {
      if (Footprint(o).Contains(Vector3d(p.x(), p.y(), 1.0))) free = false;
    }
    if (free) return p;
  }
  throw Error(ErrorCode::kInfeasibleRoom,
              "room '" + room.room_id + "' has no free floor space");
}

void CheckFeasible(const RoomSpec& room, const ActorSpec& actor,
                   const SessionOptions& options, uint64_t seed) {
  Rng rng(DeriveSeed(seed, "feasibility", room.room_id));
  BodyPose body;
  for (int i = 0; i < 64; ++i) {
    body.position = RandomFloorPoint(room, rng);
    const Trunk t = BuildTrunk(actor, body);
    const Vector3d eye = t.neck + 0.08 * actor.height * kUp;
    for (const Marker& m : room.markers) {
      if (MarkerVisible(room, eye, t.shoulder[0], m, options.min_marker_distance)) {
        return;
      }
    }
  }
  throw Error(ErrorCode::kInfeasibleRoom,
              "no marker visible from any sampled position in room '" +
                  room.room_id + "'");
}

std::vector<Gesture> ScheduleGestures(const ActorSpec& actor, int num_frames,
                                      int fps, Rng& rng) {
  const auto frames = [fps](double s) {
    return static_cast<int>(std::lround(s * fps));
  };
  // Frame bounds that keep every gesture shorter than the minimum 3 s gap.
  const int min_arm = frames(0.27), max_arm = frames(0.53);
  const int min_settle = frames(0.2), max_settle = frames(0.47);
  const int min_hold = static_cast<int>(std::ceil(0.3 * fps));
  const int max_hold = static_cast<int>(std::floor(1.5 * fps));

  std::vector<Gesture> out;
  int onset = static_cast<int>(std::floor(Uniform(rng, 0.0, 1.0) * fps));
  while (true) {
    Gesture g;
    g.onset = onset;
    g.raise = std::clamp(frames(actor.style.raise_s * Uniform(rng, 0.85, 1.15)),
                         min_arm, max_arm);
    g.settle = std::clamp(
        frames(actor.style.press_latency_s * Uniform(rng, 0.8, 1.2)),
        min_settle, max_settle);
    g.hold = std::clamp(frames(actor.style.hold_s * Uniform(rng, 0.7, 1.3)),
                        min_hold, max_hold);
    g.lower = std::clamp(frames(actor.style.lower_s * Uniform(rng, 0.85, 1.15)),
                         min_arm, max_arm);
    if (g.last_frame() > num_frames - 1) break;
    out.push_back(g);
    onset += frames(Uniform(rng, 3.0, 5.0));
  }
  return out;
}

enum class Mode { kWalk, kIdle, kSit };

}  // namespace

std::string SessionId(const std::string& room_id, const std::string& actor_id) {
  return room_id + "__" + actor_id;
}

void EventLog::Validate() const {
  for (std::size_t i = 0; i < button_intervals.size(); ++i) {
    const Interval& iv = button_intervals[i];
    if (iv.start > iv.end) {
      throw Error(ErrorCode::kInvalidArgument, "interval with start > end");
    }
    if (i > 0 && button_intervals[i - 1].end >= iv.start) {
      throw Error(ErrorCode::kInvalidArgument,
                  "intervals overlap or are not sorted");
    }
    int inside = 0;
    for (const Utterance& u : utterances) {
      if (u.frame >= iv.start && u.frame <= iv.end) ++inside;
    }
    if (inside != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "interval [" + std::to_string(iv.start) + ", " +
                      std::to_string(iv.end) + "] has " +
                      std::to_string(inside) + " utterances");
    }
  }
}

SessionTruth GenerateSession(const RoomSpec& room, const ActorSpec& actor,
                             double duration_s, uint64_t seed,
                             const SessionOptions& options) {
  if (!(duration_s >= 10.0)) {
    throw Error(ErrorCode::kInvalidArgument, "session duration must be >= 10 s");
  }
  room.Validate();
  actor.Validate();
  CheckFeasible(room, actor, options, seed);

  const std::string session_id = SessionId(room.room_id, actor.actor_id);
  Rng walk_rng(DeriveSeed(seed, session_id, "walk"));
  Rng gesture_rng(DeriveSeed(seed, session_id, "gesture"));
  Rng marker_rng(DeriveSeed(seed, session_id, "marker"));

  const int fps = options.fps;
  const double dt = 1.0 / fps;
  const int n = static_cast<int>(std::lround(duration_s * fps));
  std::vector<Gesture> gestures = ScheduleGestures(actor, n, fps, gesture_rng);
  const int dominant = actor.dominant_side == Side::kLeft ? 0 : 1;

  SessionTruth truth;
  truth.session_id = session_id;
  truth.room_id = room.room_id;
  truth.actor_id = actor.actor_id;
  truth.hand_side = actor.dominant_side;
  truth.fps = fps;
  truth.skeletons.resize(n);
  truth.seated.resize(n);
  truth.labels.resize(n);

  BodyPose body;
  body.position = RandomFloorPoint(room, walk_rng);
  body.yaw = Uniform(walk_rng, -M_PI, M_PI);
  double heading = body.yaw;
  Mode mode = Mode::kIdle;
  double mode_left = Uniform(walk_rng, 0.5, 1.5);
  Eigen::Vector2d waypoint = body.position;
  double seated_time = 0.0;
  const double sway_phase = Uniform(walk_rng, 0.0, 2.0 * M_PI);

  std::size_t next_gesture = 0;
  const Gesture* active = nullptr;

  for (int f = 0; f < n; ++f) {
    const double time = f * dt;
    if (active != nullptr && f > active->last_frame()) active = nullptr;
    if (active == nullptr && next_gesture < gestures.size() &&
        gestures[next_gesture].onset == f) {
      Gesture& g = gestures[next_gesture++];
      const Trunk t = BuildTrunk(actor, body);
      const Vector3d eye = t.neck + 0.08 * actor.height * kUp;
      std::vector<const Marker*> visible;
      for (const Marker& m : room.markers) {
        if (MarkerVisible(room, eye, t.shoulder[dominant], m,
                          options.min_marker_distance)) {
          visible.push_back(&m);
        }
      }
      // Fall back to the farthest marker when nothing is visible here.
      const Marker* chosen = nullptr;
      if (!visible.empty()) {
        chosen = visible[static_cast<std::size_t>(
            Uniform(marker_rng, 0.0, static_cast<double>(visible.size())))];
      } else {
        double best = -1.0;
        for (const Marker& m : room.markers) {
          const double d = (m.position - t.shoulder[dominant]).norm();
          if (d > best) {
            best = d;
            chosen = &m;
          }
        }
      }
      g.marker_id = chosen->marker_id;
      g.marker = chosen->position;
      active = &g;
    }

    // Gesture activation in [0, 1] and arm blend for this frame.
    double activation = 0.0;
    double arm_blend = 0.0;
    if (active != nullptr) {
      const int k = f - active->onset;
      if (k < active->raise) {
        arm_blend = Smoothstep(static_cast<double>(k + 1) / active->raise);
      } else if (f <= active->hold_end()) {
        arm_blend = 1.0;
      } else {
        arm_blend = Smoothstep(1.0 - static_cast<double>(f - active->hold_end()) /
                                         active->lower);
      }
      activation = arm_blend;
    }

    // Locomotion.
    const double speed_scale = active != nullptr ? options.gesture_walk_scale : 1.0;
    double moved = 0.0;
    mode_left -= dt;
    switch (mode) {
      case Mode::kWalk: {
        const Eigen::Vector2d to = waypoint - body.position;
        const double dist = to.norm();
        const double step = actor.gait_speed * speed_scale * dt;
        if (dist <= step) {
          body.position = waypoint;
          moved = dist;
          const bool want_sit = seated_time < options.seated_fraction * time &&
                                Uniform(walk_rng, 0.0, 1.0) < 0.6;
          mode = want_sit ? Mode::kSit : Mode::kIdle;
          mode_left = want_sit ? Uniform(walk_rng, 4.0, 8.0)
                               : Uniform(walk_rng, 0.5, 2.0);
        } else {
          body.position += to / dist * step;
          moved = step;
          const double target_heading = std::atan2(to.y(), to.x());
          const double turn = WrapAngle(target_heading - heading);
          heading += std::clamp(turn, -4.0 * dt, 4.0 * dt);
        }
        break;
      }
      case Mode::kIdle:
      case Mode::kSit:
        // Stand up / set off only between gestures.
        if (mode_left <= 0.0 && active == nullptr) {
          for (int attempt = 0; attempt < 200; ++attempt) {
            const Eigen::Vector2d p = RandomFloorPoint(room, walk_rng);
            if ((p - body.position).norm() > 1.0 &&
                WalkableSegment(room, body.position, p)) {
              waypoint = p;
              mode = Mode::kWalk;
              break;
            }
          }
          if (mode != Mode::kWalk) mode_left = 1.0;
        }
        break;
    }
    const double sit_target = mode == Mode::kSit ? 1.0 : 0.0;
    body.sit += std::clamp(sit_target - body.sit, -2.0 * dt, 2.0 * dt);
    if (body.sit > 0.5) seated_time += dt;
    body.gait_phase += 2.0 * M_PI * moved / kStrideLength;
    body.gait_amplitude = 0.4 * std::min(1.0, moved / dt / 1.2);

    // Torso turns part of the way toward the marker during the gesture.
    body.yaw = heading;
    if (active != nullptr) {
      const Trunk t0 = BuildTrunk(actor, body);
      const Vector3d to_marker = active->marker - t0.neck;
      const double marker_yaw = std::atan2(to_marker.y(), to_marker.x());
      body.yaw = heading + 0.5 * activation *
                               std::clamp(WrapAngle(marker_yaw - heading), -1.2, 1.2);
    }

    const Trunk t = BuildTrunk(actor, body);
    Skeleton& s = truth.skeletons[f];
    s[kLeftShoulder] = t.shoulder[0];
    s[kRightShoulder] = t.shoulder[1];
    s[kLeftHip] = t.hip[0];
    s[kRightHip] = t.hip[1];
    PlaceLegs(actor, body, t, s);

    const double upper = 0.55 * actor.arm_length;
    for (int side = 0; side < 2; ++side) {
      Vector3d dir = RestArmDir(t, body, side);
      if (side == dominant && active != nullptr) {
        const Vector3d u = (active->marker - t.shoulder[side]).normalized();
        dir = arm_blend >= 1.0 ? u : Slerp(dir, u, arm_blend, t.forward);
      }
      s[side == 0 ? kLeftElbow : kRightElbow] = t.shoulder[side] + upper * dir;
      s[side == 0 ? kLeftWrist : kRightWrist] =
          t.shoulder[side] + actor.arm_length * dir;
    }

    double head_yaw = body.yaw + 0.2 * std::sin(0.7 * time + sway_phase);
    double head_pitch = -0.1;
    if (active != nullptr) {
      const Vector3d to_marker = active->marker - (t.neck + 0.07 * actor.height * kUp);
      const double marker_yaw = std::atan2(to_marker.y(), to_marker.x());
      const double marker_pitch =
          std::atan2(to_marker.z(), to_marker.head<2>().norm());
      const double g = actor.style.head_turn_gain * activation;
      head_yaw += g * std::clamp(WrapAngle(marker_yaw - head_yaw), -1.4, 1.4);
      head_pitch += g * (std::clamp(marker_pitch, -1.0, 1.0) - head_pitch);
    }
    PlaceHead(actor, t, head_yaw, head_pitch, s);
    truth.seated[f] = body.sit > 0.5;

    FrameLabel& label = truth.labels[f];
    if (active != nullptr && f >= active->hold_start() && f <= active->hold_end()) {
      label.is_pointing = true;
      label.direction = geometry::DirBetween(s[WristOf(actor.dominant_side)],
                                             active->marker);
      label.marker_id = active->marker_id;
    }
  }

  for (const Gesture& g : gestures) {
    truth.events.button_intervals.push_back({g.hold_start(), g.hold_end()});
    truth.events.utterances.push_back({g.hold_start(), g.marker_id});
  }
  truth.events.Validate();
  return truth;
}

EventLog EmitEvents(const SessionTruth& truth) {
  truth.events.Validate();
  return truth.events;
}

}  // namespace deepoint::sim
