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

#include "flowpush/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flowpush/error.hpp"

namespace flowpush {

namespace {

// Stream tags for deriving the per-environment RNG streams from one seed.
constexpr std::uint64_t kStreamReset = 1;
constexpr std::uint64_t kStreamFlow = 2;
constexpr std::uint64_t kStreamCtrl = 3;

double clip_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::string to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::Running: return "running";
    case EpisodeStatus::Success: return "success";
    case EpisodeStatus::FailureCte: return "failure_cte";
    case EpisodeStatus::Truncated: return "truncated";
  }
  return "unknown";
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::ResRlMpc: return "resrl_mpc";
    case ControllerKind::Mpc: return "mpc";
    case ControllerKind::Pid: return "pid";
  }
  return "unknown";
}

ControllerKind controller_from_string(const std::string& name) {
  if (name == "resrl_mpc") return ControllerKind::ResRlMpc;
  if (name == "mpc") return ControllerKind::Mpc;
  if (name == "pid") return ControllerKind::Pid;
  throw ConfigError("unknown controller: '" + name + "'");
}

void EnvConfig::validate() const {
  if (n_waypoints < 3) throw ConfigError("env: n_waypoints must be >= 3");
  if (reach_radius <= 0.0) throw ConfigError("env: reach_radius must be positive");
  if (max_steps < 1) throw ConfigError("env: max_steps must be >= 1");
  if (cte_fail <= 0.0) throw ConfigError("env: cte_fail must be positive");
  if (target() < 1) throw ConfigError("env: advance_target must be >= 1");
  sim.validate();
  flow.validate();
  mpc.validate();
  pid.validate();
  residual.validate();
  // The curve must keep the failure band inside the workspace.
  const WaypointPath path = build_curve(curve, n_waypoints);
  validate_fits_workspace(path, sim.workspace_w, sim.workspace_h, cte_fail);
}

Observation build_observation(const WorldState& state, const WaypointPath& path, int index,
                              const Vec2& u_nominal, bool contact) {
  const Vec2 goal = path[index];
  const LocalFrame frame = local_frame(path, index);
  Observation o;
  o[Observation::kRobotToCell] = state.p_c.x - state.p_r.x;
  o[Observation::kRobotToCell + 1] = state.p_c.y - state.p_r.y;
  o[Observation::kCellToGoal] = goal.x - state.p_c.x;
  o[Observation::kCellToGoal + 1] = goal.y - state.p_c.y;
  o[Observation::kRobotVel] = state.v_r.x;
  o[Observation::kRobotVel + 1] = state.v_r.y;
  o[Observation::kCellVel] = state.v_c.x;
  o[Observation::kCellVel + 1] = state.v_c.y;
  o[Observation::kHeading] = std::cos(state.theta_r);
  o[Observation::kHeading + 1] = std::sin(state.theta_r);
  o[Observation::kNominalCmd] = u_nominal.x;
  o[Observation::kNominalCmd + 1] = u_nominal.y;
  o[Observation::kContact] = contact ? 1.0 : 0.0;
  o[Observation::kTangent] = frame.tangent.x;
  o[Observation::kTangent + 1] = frame.tangent.y;
  o[Observation::kCte] = signed_cte(state.p_c, path, index);
  return o;
}

Observation normalize_task_scale(Observation obs, double workspace_extent, double v_max,
                                 double cte_scale) {
  if (workspace_extent <= 0.0) throw UsageError("normalize_task_scale: extent must be positive");
  for (int i = Observation::kRobotToCell; i < Observation::kRobotVel; ++i) {
    obs[i] = clip_unit(obs[i] / workspace_extent);
  }
  for (int i = Observation::kRobotVel; i < Observation::kHeading; ++i) {
    obs[i] = clip_unit(obs[i] / v_max);
  }
  obs[Observation::kHeading] = clip_unit(obs[Observation::kHeading]);
  obs[Observation::kHeading + 1] = clip_unit(obs[Observation::kHeading + 1]);
  obs[Observation::kNominalCmd] = clip_unit(obs[Observation::kNominalCmd] / v_max);
  obs[Observation::kNominalCmd + 1] = clip_unit(obs[Observation::kNominalCmd + 1] / v_max);
  obs[Observation::kContact] = clip_unit(obs[Observation::kContact]);
  obs[Observation::kTangent] = clip_unit(obs[Observation::kTangent]);
  obs[Observation::kTangent + 1] = clip_unit(obs[Observation::kTangent + 1]);
  obs[Observation::kCte] = obs[Observation::kCte] / cte_scale;
  return obs;
}

double compute_reward(const StepSnapshot& prev, const StepSnapshot& cur, const RewardWeights& w) {
  const double dd = prev.dist_to_waypoint - cur.dist_to_waypoint;
  const Vec2 du = cur.residual_applied;
  const Vec2 ddu = du - prev.residual_applied;
  double r = w.w_prog * dd + w.w_wp * static_cast<double>(cur.waypoints_advanced) -
             w.w_track * std::abs(cur.cte) - w.w_time - w.w_du * du.squared_norm() -
             w.w_dus * ddu.squared_norm();
  if (cur.status == EpisodeStatus::Success) r += w.r_succ;
  if (cur.status == EpisodeStatus::FailureCte) r -= w.r_fail;
  return r;
}

EpisodeStatus check_termination(long advanced, long step, double cte, const EnvConfig& cfg) {
  if (advanced >= cfg.target()) return EpisodeStatus::Success;
  if (std::abs(cte) > cfg.cte_fail) return EpisodeStatus::FailureCte;
  if (step >= cfg.max_steps) return EpisodeStatus::Truncated;
  return EpisodeStatus::Running;
}

Environment::Environment(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      rng_reset_(Rng::derive(seed, kStreamReset)),
      rng_flow_(Rng::derive(seed, kStreamFlow)),
      rng_ctrl_(Rng::derive(seed, kStreamCtrl)) {
  cfg_.validate();
  status_ = EpisodeStatus::Running;
}

double Environment::workspace_extent() const {
  return std::max(cfg_.sim.workspace_w, cfg_.sim.workspace_h);
}

double Environment::current_cte() const { return signed_cte(world_.p_c, path_, index_); }

Vec2 Environment::compute_nominal() {
  if (cfg_.controller == ControllerKind::Pid) {
    const double offset =
        cfg_.pid_push_offset > 0.0 ? cfg_.pid_push_offset : cfg_.mpc.push_offset;
    return pid_command(world_, path_, index_, pid_, cfg_.pid, offset, cfg_.sim.dt);
  }
  return mpc_command(world_, path_, index_, flow_, cfg_.mpc, cfg_.sim, rng_ctrl_);
}

Observation Environment::reset() {
  CurveSpec spec = cfg_.curve;
  if (cfg_.randomize_geometry) {
    spec.center.x += rng_reset_.uniform(-cfg_.center_jitter, cfg_.center_jitter);
    spec.center.y += rng_reset_.uniform(-cfg_.center_jitter, cfg_.center_jitter);
    spec.scale *= 1.0 + rng_reset_.uniform(-cfg_.scale_jitter, cfg_.scale_jitter);
  }
  path_ = build_curve(spec, cfg_.n_waypoints);

  const ResetResult r = reset_world(spec, path_, rng_reset_, cfg_.randomize_reset, cfg_.sim);
  world_ = r.state;
  index_ = r.start_index;
  advanced_ = 0;
  status_ = EpisodeStatus::Running;
  flow_ = init_flow(rng_flow_, cfg_.flow);
  pid_ = PidState{};
  prev_residual_ = Vec2{};
  log_.clear();

  // The cell spawns on (or jittered around) the start waypoint. Skip past
  // any waypoints already inside the reach radius without counting them, so
  // success still requires a full lap of real advancement.
  index_ = advance_waypoints(world_.p_c, path_, index_, cfg_.reach_radius).index;

  cached_nominal_ = compute_nominal();
  return normalize_task_scale(
      build_observation(world_, path_, index_, cached_nominal_, world_.contact),
      workspace_extent(), cfg_.sim.v_max, cfg_.cte_fail);
}

StepResult Environment::step(const Vec2& action) {
  if (status_ != EpisodeStatus::Running) {
    throw UsageError("Environment::step called on a finished episode");
  }

  bool clamped = false;
  const Vec2 delta_u = scale_residual(action, cfg_.residual, &clamped);
  const ComposedCommand cmd =
      compose_command(cached_nominal_, delta_u, world_.contact, cfg_.sim.v_max);

  flow_ = step_flow(flow_, cfg_.sim.dt, rng_flow_.normal());

  const int start_index = index_;
  const double dist_before = distance(world_.p_c, path_[start_index]);
  world_ = step_world(world_, cmd.u_exec, flow_, cfg_.sim);
  const double dist_after = distance(world_.p_c, path_[start_index]);

  const WaypointAdvance adv = advance_waypoints(world_.p_c, path_, index_, cfg_.reach_radius);
  index_ = adv.index;
  advanced_ += adv.delta;

  const double cte = signed_cte(world_.p_c, path_, index_);
  status_ = check_termination(advanced_, world_.k, cte, cfg_);

  const StepSnapshot prev{dist_before, 0, 0.0, prev_residual_, EpisodeStatus::Running};
  const StepSnapshot cur{dist_after, adv.delta, cte, cmd.delta_applied, status_};
  const double reward = compute_reward(prev, cur, cfg_.reward);
  prev_residual_ = cmd.delta_applied;

  const Vec2 u_nominal_used = cached_nominal_;
  cached_nominal_ = compute_nominal();

  StepRow row;
  row.k = world_.k;
  row.t = world_.t;
  row.p_r = world_.p_r;
  row.p_c = world_.p_c;
  row.theta_r = world_.theta_r;
  row.cte = cte;
  row.flow_u = flow_.u;
  row.contact = world_.contact ? 1 : 0;
  row.action = action;
  row.u_nominal = u_nominal_used;
  row.u_exec = cmd.u_exec;
  row.residual = cmd.delta_applied;
  row.dd = dist_before - dist_after;
  row.dn = adv.delta;
  row.reward = reward;
  row.advanced = advanced_;
  row.status = status_;
  row.wp_index = index_;
  log_.push_back(row);

  StepResult result;
  result.obs = normalize_task_scale(
      build_observation(world_, path_, index_, cached_nominal_, world_.contact),
      workspace_extent(), cfg_.sim.v_max, cfg_.cte_fail);
  result.reward = reward;
  result.status = status_;
  result.info =
      StepInfo{cte,      flow_.u,           adv.delta, advanced_, u_nominal_used,
               cmd.u_exec, cmd.delta_applied, clamped};
  return result;
}

std::string step_row_header() {
  return "k,t,prx,pry,pcx,pcy,theta_r,e,u_flow,contact,ax,ay,unx,uny,uex,uey,dux,duy,dd,dn,"
         "r,A,status,wp";
}

std::string format_step_row(const StepRow& r) {
  // Reward-relevant columns (e, du, dd, r) keep full precision so the
  // shaping terms can be re-audited from the file alone.
  char buf[768];
  std::snprintf(buf, sizeof(buf),
                "%ld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.17g,%.9g,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                "%.17g,%.17g,%.17g,%d,%.17g,%ld,%s,%d",
                r.k, r.t, r.p_r.x, r.p_r.y, r.p_c.x, r.p_c.y, r.theta_r, r.cte, r.flow_u,
                r.contact, r.action.x, r.action.y, r.u_nominal.x, r.u_nominal.y, r.u_exec.x,
                r.u_exec.y, r.residual.x, r.residual.y, r.dd, r.dn, r.reward, r.advanced,
                to_string(r.status).c_str(), r.wp_index);
  return buf;
}

}  // namespace flowpush
