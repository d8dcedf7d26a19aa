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
#include "flowpush/vec2.hpp"

namespace flowpush {

struct SimParams {
  double robot_radius = 8.0;   // px
  double cell_radius = 10.0;   // px
  double dt = 1.0 / 60.0;      // s, simulation runs at 60 Hz
  double v_max = 50.0;         // shared speed envelope, px/s
  double workspace_w = 512.0;  // px
  double workspace_h = 512.0;  // px
  double contact_slack = 1.0;  // px of proximity counted as contact
  double flow_drag_on_robot = 0.0;  // 0 = rolling robot holds traction
  double approach_gap = 5.0;   // reset standoff beyond touching distance, px

  double contact_distance() const { return robot_radius + cell_radius + contact_slack; }
  double touch_distance() const { return robot_radius + cell_radius; }
  void validate() const;
};

/// Full simulator state. Velocities are the realized per-step displacement
/// divided by dt, so they already include flow advection and any contact
/// projection.
struct WorldState {
  Vec2 p_r;               // robot center, px
  double theta_r = 0.0;   // robot heading, rad
  Vec2 v_r;               // robot velocity, px/s
  Vec2 p_c;               // cell center, px
  Vec2 v_c;               // cell velocity, px/s
  bool contact = false;
  long k = 0;             // step count
  double t = 0.0;         // elapsed time, s (= k * dt)
};

/// Norm clipping per the shared speed envelope:
/// u * min(1, v_max / (||u|| + 1e-9)). Direction-preserving.
Vec2 clip_speed(const Vec2& u, double v_max);

bool detect_contact(const WorldState& state, const SimParams& params);

/// One dt of the quasi-static push model, shared by the simulator and the
/// MPC rollouts. When the disks are within the contact distance, the
/// component of the commanded robot velocity along the contact normal is
/// transmitted to the cell (frictionless normal pushing); tangential motion
/// slides without dragging. The cell is advected by the flow; any residual
/// disk overlap is resolved by projecting the cell out along the normal.
void push_model_step(Vec2& p_r, Vec2& p_c, const Vec2& command, const FlowState& flow,
                     const SimParams& params);

/// Advances the world one step under an already-clipped command. Positions
/// are clamped to the workspace, heading follows the commanded direction,
/// and the contact flag is refreshed from the post-step distance.
WorldState step_world(const WorldState& state, const Vec2& command, const FlowState& flow,
                      const SimParams& params);

struct ResetResult {
  WorldState state;
  int start_index;
};

/// Places the cell on a waypoint and the robot behind it against the local
/// tangent. With `randomize` the start index is uniform, the cell gets a
/// small position jitter and the robot placement direction a small angular
/// jitter; otherwise the reset is fully deterministic from spec.phase_offset.
ResetResult reset_world(const CurveSpec& spec, const WaypointPath& path, Rng& rng, bool randomize,
                        const SimParams& params);

}  // namespace flowpush
