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

#include "flowpush/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "flowpush/error.hpp"

namespace flowpush {

namespace {

constexpr int kMagnitudeRings = 4;

// Direction from the cell toward the active waypoint; falls back to the
// local tangent when the cell sits on the waypoint.
Vec2 goal_direction(const Vec2& cell, const WaypointPath& path, int index) {
  const Vec2 to_goal = path[index] - cell;
  if (to_goal.norm() > 1e-9) return to_goal.normalized();
  return local_frame(path, index).tangent;
}

double rollout_cost(const WorldState& state, const Vec2& candidate, const Vec2& goal,
                    const FlowState& flow, const MpcConfig& cfg, const SimParams& params) {
  SimParams model = params;
  model.dt = cfg.dt;
  Vec2 p_r = state.p_r;
  Vec2 p_c = state.p_c;
  double cost = 0.0;
  for (int h = 0; h < cfg.horizon; ++h) {
    push_model_step(p_r, p_c, candidate, flow, model);
    cost += cfg.weight_goal * distance(p_c, goal);
  }
  const double rel = candidate.norm() / cfg.v_max;
  cost += cfg.weight_effort * static_cast<double>(cfg.horizon) * rel * rel;
  return cost;
}

}  // namespace

void MpcConfig::validate() const {
  if (horizon < 1) throw ConfigError("mpc: horizon must be >= 1");
  if (dt <= 0.0) throw ConfigError("mpc: dt must be positive");
  if (candidate_count < 1) throw ConfigError("mpc: candidate_count must be >= 1");
  if (weight_goal < 0.0 || weight_effort < 0.0) throw ConfigError("mpc: weights must be >= 0");
  if (push_offset <= 0.0) throw ConfigError("mpc: push_offset must be positive");
  if (v_max <= 0.0) throw ConfigError("mpc: v_max must be positive");
}

void PidConfig::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw ConfigError("pid: gains must be >= 0");
  if (integral_limit < 0.0) throw ConfigError("pid: integral_limit must be >= 0");
}

void ResidualConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("residual: alpha must be in (0,1)");
  if (v_max <= 0.0) throw ConfigError("residual: v_max must be positive");
}

Vec2 mpc_command(const WorldState& state, const WaypointPath& path, int index,
                 const FlowState& flow, const MpcConfig& cfg, const SimParams& params, Rng& rng) {
  const Vec2 goal = path[index];
  const Vec2 g_hat = goal_direction(state.p_c, path, index);

  if (!detect_contact(state, params)) {
    const Vec2 approach_point = state.p_c - cfg.push_offset * g_hat;
    return clip_speed(cfg.approach_gain * (approach_point - state.p_r), cfg.v_max);
  }

  // Stratified polar candidates: rings of increasing speed, each with a
  // randomly rotated uniform fan of directions, plus the zero command.
  double best_cost = rollout_cost(state, Vec2{0.0, 0.0}, goal, flow, cfg, params);
  Vec2 best{0.0, 0.0};
  const int per_ring = std::max(1, cfg.candidate_count / kMagnitudeRings);
  for (int ring = 0; ring < kMagnitudeRings; ++ring) {
    const double speed =
        cfg.v_max * static_cast<double>(ring + 1) / static_cast<double>(kMagnitudeRings);
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;
    const int count = ring == kMagnitudeRings - 1
                          ? cfg.candidate_count - per_ring * (kMagnitudeRings - 1)
                          : per_ring;
    for (int j = 0; j < count; ++j) {
      const double ang =
          phase + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
      const Vec2 candidate = speed * Vec2{std::cos(ang), std::sin(ang)};
      const double cost = rollout_cost(state, candidate, goal, flow, cfg, params);
      if (cost < best_cost) {
        best_cost = cost;
        best = candidate;
      }
    }
  }
  return best;
}

Vec2 pid_command(const WorldState& state, const WaypointPath& path, int index, PidState& pid,
                 const PidConfig& cfg, double push_offset, double dt) {
  const Vec2 g_hat = goal_direction(state.p_c, path, index);
  const Vec2 reference = state.p_c - push_offset * g_hat;
  const Vec2 error = reference - state.p_r;

  pid.integral += error * dt;
  pid.integral.x = std::clamp(pid.integral.x, -cfg.integral_limit, cfg.integral_limit);
  pid.integral.y = std::clamp(pid.integral.y, -cfg.integral_limit, cfg.integral_limit);

  const Vec2 derivative = pid.has_prev ? (error - pid.prev_error) / dt : Vec2{0.0, 0.0};
  pid.prev_error = error;
  pid.has_prev = true;

  return cfg.kp * error + cfg.ki * pid.integral + cfg.kd * derivative;
}

Vec2 scale_residual(const Vec2& action, const ResidualConfig& cfg, bool* clamped) {
  const bool out_of_range =
      action.x < -1.0 || action.x > 1.0 || action.y < -1.0 || action.y > 1.0;
  if (clamped != nullptr) *clamped = out_of_range;
  const Vec2 a{std::clamp(action.x, -1.0, 1.0), std::clamp(action.y, -1.0, 1.0)};
  return cfg.alpha * cfg.v_max * a;
}

ComposedCommand compose_command(const Vec2& u_nominal, const Vec2& delta_u, bool contact,
                                double v_max) {
  // The no-contact branch must not even add a zero vector: the executed
  // command has to match clip_speed(u_nominal) bit for bit.
  const Vec2 u_exec =
      contact ? clip_speed(u_nominal + delta_u, v_max) : clip_speed(u_nominal, v_max);
  return {u_exec, u_exec - u_nominal};
}

}  // namespace flowpush
