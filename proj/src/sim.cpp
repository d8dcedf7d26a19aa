// Copyright (c) 2026 Flowpush Authors
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

#include "flowpush/sim.hpp"

#include <algorithm>
#include <cmath>

#include "flowpush/error.hpp"

namespace flowpush {

namespace {

constexpr double kClipEps = 1e-9;
constexpr double kResetPosJitterPx = 2.0;
constexpr double kResetAngleJitterRad = 0.2;

double clamp_coord(double v, double radius, double extent) {
  return std::clamp(v, radius, extent - radius);
}

}  // namespace

void SimParams::validate() const {
  if (robot_radius <= 0.0 || cell_radius <= 0.0) throw ConfigError("sim: radii must be positive");
  if (dt <= 0.0) throw ConfigError("sim: dt must be positive");
  if (v_max <= 0.0) throw ConfigError("sim: v_max must be positive");
  if (contact_slack < 0.0) throw ConfigError("sim: contact_slack must be non-negative");
  if (workspace_w <= 0.0 || workspace_h <= 0.0) throw ConfigError("sim: workspace must be positive");
}

Vec2 clip_speed(const Vec2& u, double v_max) {
  return u * std::min(1.0, v_max / (u.norm() + kClipEps));
}

bool detect_contact(const WorldState& state, const SimParams& params) {
  return distance(state.p_r, state.p_c) <= params.contact_distance();
}

void push_model_step(Vec2& p_r, Vec2& p_c, const Vec2& command, const FlowState& flow,
                     const SimParams& params) {
  const Vec2 offset = p_c - p_r;
  const double dist = offset.norm();

  Vec2 v_push{};
  if (dist <= params.contact_distance()) {
    const Vec2 n = dist > 1e-12 ? offset / dist : Vec2{1.0, 0.0};
    const double vn = command.dot(n);
    if (vn > 0.0) v_push = vn * n;
  }

  Vec2 robot_vel = command;
  if (params.flow_drag_on_robot != 0.0) {
    robot_vel += params.flow_drag_on_robot * sample_velocity(flow, p_r);
  }
  p_r += robot_vel * params.dt;
  p_c += (v_push + sample_velocity(flow, p_c)) * params.dt;

  // Resolve any residual disk overlap along the contact normal.
  const Vec2 post = p_c - p_r;
  const double post_dist = post.norm();
  if (post_dist < params.touch_distance()) {
    const Vec2 n = post_dist > 1e-12 ? post / post_dist : Vec2{1.0, 0.0};
    p_c = p_r + params.touch_distance() * n;
  }
}

WorldState step_world(const WorldState& state, const Vec2& command, const FlowState& flow,
                      const SimParams& params) {
  WorldState next = state;
  push_model_step(next.p_r, next.p_c, command, flow, params);

  next.p_r.x = clamp_coord(next.p_r.x, params.robot_radius, params.workspace_w);
  next.p_r.y = clamp_coord(next.p_r.y, params.robot_radius, params.workspace_h);
  next.p_c.x = clamp_coord(next.p_c.x, params.cell_radius, params.workspace_w);
  next.p_c.y = clamp_coord(next.p_c.y, params.cell_radius, params.workspace_h);

  if (command.norm() > 0.0) {
    next.theta_r = std::atan2(command.y, command.x);
  }
  next.v_r = (next.p_r - state.p_r) / params.dt;
  next.v_c = (next.p_c - state.p_c) / params.dt;
  next.contact = detect_contact(next, params);
  next.k = state.k + 1;
  next.t = static_cast<double>(next.k) * params.dt;
  return next;
}

ResetResult reset_world(const CurveSpec& spec, const WaypointPath& path, Rng& rng, bool randomize,
                        const SimParams& params) {
  const int n = path.size();
  int start = path.wrap(spec.phase_offset);
  if (randomize) {
    start = static_cast<int>(rng.uniform_int(n));
  }

  Vec2 cell = path[start];
  const LocalFrame frame = local_frame(path, start);
  Vec2 back = -frame.tangent;
  if (randomize) {
    cell += Vec2{rng.uniform(-kResetPosJitterPx, kResetPosJitterPx),
                 rng.uniform(-kResetPosJitterPx, kResetPosJitterPx)};
    back = back.rotated(rng.uniform(-kResetAngleJitterRad, kResetAngleJitterRad));
  }

  const double standoff = params.touch_distance() + params.approach_gap;
  WorldState s;
  s.p_c = cell;
  s.p_r = cell + standoff * back;
  s.theta_r = std::atan2(frame.tangent.y, frame.tangent.x);
  s.contact = detect_contact(s, params);
  s.k = 0;
  s.t = 0.0;
  return {s, start};
}

}  // namespace flowpush
