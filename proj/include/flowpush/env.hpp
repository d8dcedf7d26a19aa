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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flowpush/control.hpp"
#include "flowpush/curves.hpp"
#include "flowpush/flow.hpp"
#include "flowpush/rng.hpp"
#include "flowpush/sim.hpp"
#include "flowpush/vec2.hpp"

namespace flowpush {

enum class EpisodeStatus { Running, Success, FailureCte, Truncated };

std::string to_string(EpisodeStatus s);

/// Reward coefficients.
struct RewardWeights {
  double w_prog = 5.0;   // local progress (reduction in distance to the goal)
  double w_wp = 3.0;     // per waypoint advance
  double w_track = 0.12; // |cross-track error|
  double w_time = 0.002; // flat per-step cost
  double w_du = 0.005;   // squared residual magnitude
  double w_dus = 0.002;  // squared residual change between steps
  double r_succ = 8.0;   // terminal bonus
  double r_fail = 2.0;   // terminal penalty (subtracted)
};

/// Policy observation, 16 entries:
/// [robot-to-cell(2), cell-to-goal(2), v_r(2), v_c(2), cos/sin heading(2),
///  nominal command(2), contact(1), tangent(2), cte(1)].
struct Observation {
  static constexpr int kDim = 16;
  static constexpr int kRobotToCell = 0;
  static constexpr int kCellToGoal = 2;
  static constexpr int kRobotVel = 4;
  static constexpr int kCellVel = 6;
  static constexpr int kHeading = 8;
  static constexpr int kNominalCmd = 10;
  static constexpr int kContact = 12;
  static constexpr int kTangent = 13;
  static constexpr int kCte = 15;

  std::array<double, kDim> v{};

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

enum class ControllerKind { ResRlMpc, Mpc, Pid };

std::string to_string(ControllerKind kind);
ControllerKind controller_from_string(const std::string& name);

struct EnvConfig {
  CurveSpec curve{};
  int n_waypoints = 140;
  double reach_radius = 2.0;  // px
  long max_steps = 3000;
  double cte_fail = 10.0;     // px, episode fails strictly above this
  long advance_target = 0;    // 0 -> one lap (n_waypoints)
  bool randomize_geometry = false;  // curve center/scale jitter at reset
  bool randomize_reset = false;     // start phase + pose jitter at reset
  double center_jitter = 10.0;      // px, uniform per axis
  double scale_jitter = 0.10;       // relative, uniform
  ControllerKind controller = ControllerKind::ResRlMpc;
  ResidualConfig residual{};
  FlowConfig flow{};
  SimParams sim{};
  MpcConfig mpc{};
  PidConfig pid{};
  double pid_push_offset = 0.0;  // 0 -> mpc.push_offset
  RewardWeights reward{};

  long target() const { return advance_target > 0 ? advance_target : n_waypoints; }
  void validate() const;
};

/// Raw (unnormalized) observation for the current state.
Observation build_observation(const WorldState& state, const WaypointPath& path, int index,
                              const Vec2& u_nominal, bool contact);

/// Task-scale normalization: positions / workspace extent, velocities and
/// the nominal command / v_max, cte / cte_scale; everything except the cte
/// entry is clipped to [-1, 1].
Observation normalize_task_scale(Observation obs, double workspace_extent, double v_max,
                                 double cte_scale);

/// Per-step reward inputs. `dist_to_waypoint` is always measured against the
/// waypoint that was active when the step started, on both snapshots.
struct StepSnapshot {
  double dist_to_waypoint = 0.0;
  int waypoints_advanced = 0;
  double cte = 0.0;
  Vec2 residual_applied{};
  EpisodeStatus status = EpisodeStatus::Running;
};

double compute_reward(const StepSnapshot& prev, const StepSnapshot& cur,
                      const RewardWeights& w);

/// Success before failure before truncation; CTE failure is strict (>).
EpisodeStatus check_termination(long advanced, long step, double cte, const EnvConfig& cfg);

/// One logged simulation step.
struct StepRow {
  long k = 0;
  double t = 0.0;
  Vec2 p_r, p_c;
  double theta_r = 0.0;
  double cte = 0.0;
  double flow_u = 0.0;
  int contact = 0;
  Vec2 action;
  Vec2 u_nominal;
  Vec2 u_exec;
  Vec2 residual;   // delta actually applied (after gating and clipping)
  double dd = 0.0; // progress toward the start-of-step waypoint
  int dn = 0;      // waypoint advances this step
  double reward = 0.0;
  long advanced = 0;
  EpisodeStatus status = EpisodeStatus::Running;
  int wp_index = 0;  // active waypoint after this step
};

struct StepInfo {
  double cte = 0.0;
  double flow_u = 0.0;
  int advanced_delta = 0;
  long advanced_total = 0;
  Vec2 u_nominal;
  Vec2 u_exec;
  Vec2 residual_applied;
  bool action_clamped = false;
};

struct StepResult {
  Observation obs;  // task-scale normalized
  double reward = 0.0;
  EpisodeStatus status = EpisodeStatus::Running;
  StepInfo info;
};

/// Episode orchestration: nominal controller, residual gating, flow and
/// world stepping, waypoint bookkeeping, reward, termination, logging.
/// Instances are single-threaded and own three RNG streams (reset, flow,
/// controller), so a seed pins the whole episode sequence.
class Environment {
 public:
  Environment(EnvConfig cfg, std::uint64_t seed);

  /// Starts a new episode and returns the first observation.
  Observation reset();

  /// Applies a policy action in [-1,1]^2 (zero for nominal-only baselines).
  /// Throws UsageError when the episode is already over.
  StepResult step(const Vec2& action);

  EpisodeStatus status() const { return status_; }
  const WorldState& world() const { return world_; }
  const WaypointPath& path() const { return path_; }
  const FlowState& flow() const { return flow_; }
  int active_index() const { return index_; }
  long advanced() const { return advanced_; }
  double current_cte() const;
  const Vec2& nominal_command() const { return cached_nominal_; }
  const EnvConfig& config() const { return cfg_; }
  double workspace_extent() const;
  const std::vector<StepRow>& log() const { return log_; }

 private:
  Vec2 compute_nominal();

  EnvConfig cfg_;
  Rng rng_reset_;
  Rng rng_flow_;
  Rng rng_ctrl_;
  WaypointPath path_;
  WorldState world_{};
  FlowState flow_{};
  PidState pid_{};
  int index_ = 0;
  long advanced_ = 0;
  EpisodeStatus status_ = EpisodeStatus::Running;
  Vec2 cached_nominal_{};
  Vec2 prev_residual_{};
  std::vector<StepRow> log_;
};

/// CSV header + row formatting for episode logs (fixed formatting so that
/// identical runs produce identical bytes).
std::string step_row_header();
std::string format_step_row(const StepRow& row);

}  // namespace flowpush
