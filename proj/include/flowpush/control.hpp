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

#pragma once

#include "flowpush/curves.hpp"
#include "flowpush/flow.hpp"
#include "flowpush/rng.hpp"
#include "flowpush/sim.hpp"
#include "flowpush/vec2.hpp"

namespace flowpush {

/// Sampling-based receding-horizon controller settings. Candidates are
/// constant planar velocities rolled out through the quasi-static push model
/// with the current flow estimate held fixed.
struct MpcConfig {
  int horizon = 10;            // prediction steps
  double dt = 1.0 / 60.0;      // prediction step, s
  int candidate_count = 64;    // sampled velocity candidates (zero is always added)
  double weight_goal = 1.0;    // on predicted cell-to-goal distance
  double weight_effort = 0.01; // on (||u||/v_max)^2
  double push_offset = 18.0;   // approach standoff behind the cell, px
  double approach_gain = 3.0;  // P gain of the out-of-contact branch, 1/s
  double v_max = 50.0;

  void validate() const;
};

struct PidConfig {
  double kp = 1.2;
  double ki = 0.05;
  double kd = 0.1;
  double integral_limit = 200.0;  // per-axis anti-windup bound, px*s

  void validate() const;
};

struct PidState {
  Vec2 integral{};
  Vec2 prev_error{};
  bool has_prev = false;
};

struct ResidualConfig {
  double alpha = 0.15;  // residual bound fraction of v_max, in (0,1)
  double v_max = 50.0;

  void validate() const;
};

struct ComposedCommand {
  Vec2 u_exec;         // executed command after gating and envelope clipping
  Vec2 delta_applied;  // u_exec - u_nominal, the residual the reward sees
};

/// Nominal controller command, norm <= v_max.
///
/// Out of contact the command drives the robot toward the approach point
/// p_c - push_offset * g_hat (g_hat = unit cell-to-goal direction). In
/// contact it picks the best of `candidate_count` sampled constant-velocity
/// candidates under a finite-horizon cost on predicted cell-to-goal distance
/// plus effort. The rng stream only feeds candidate sampling, so the output
/// is deterministic given the stream state.
Vec2 mpc_command(const WorldState& state, const WaypointPath& path, int index,
                 const FlowState& flow, const MpcConfig& cfg, const SimParams& params, Rng& rng);

/// PID on the error from the robot to the same pushing reference point the
/// MPC approach branch uses. Integral state saturates per axis at
/// cfg.integral_limit. Output is meant to be clipped by the caller.
Vec2 pid_command(const WorldState& state, const WaypointPath& path, int index, PidState& pid,
                 const PidConfig& cfg, double push_offset, double dt);

/// Maps a policy action in [-1,1]^2 to a velocity correction alpha*v_max*a.
/// Out-of-range components are clamped; `clamped` (optional) reports the
/// contract breach.
Vec2 scale_residual(const Vec2& action, const ResidualConfig& cfg, bool* clamped = nullptr);

/// Contact-gated composition under the shared envelope: the residual is
/// added only in contact, then the sum is norm-clipped. delta_applied is the
/// deviation of the executed command from the nominal one, which shrinks
/// when the envelope saturates and is exactly zero-gated out of contact.
ComposedCommand compose_command(const Vec2& u_nominal, const Vec2& delta_u, bool contact,
                                double v_max);

}  // namespace flowpush
