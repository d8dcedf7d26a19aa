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

#include "flowpush/flow.hpp"

#include <algorithm>
#include <cmath>

#include "flowpush/error.hpp"

namespace flowpush {

void FlowConfig::validate() const {
  if (u_min > u_max) throw ConfigError("flow: u_min > u_max");
  if (tau <= 0.0) throw ConfigError("flow: tau must be positive");
  if (sigma < 0.0) throw ConfigError("flow: sigma must be non-negative");
  if (half_width <= 0.0) throw ConfigError("flow: half_width must be positive");
  if (axis.norm() <= 0.0) throw ConfigError("flow: axis must be nonzero");
}

FlowState init_flow(Rng& rng, const FlowConfig& cfg) {
  cfg.validate();
  FlowState f;
  f.u_min = cfg.u_min;
  f.u_max = cfg.u_max;
  f.tau = cfg.tau;
  f.sigma = cfg.sigma;
  f.half_width = cfg.half_width;
  f.center_y = cfg.center_y;
  f.axis = cfg.axis.normalized();
  f.u = rng.uniform(cfg.u_min, cfg.u_max);
  f.u_tilde = f.u;
  return f;
}

Vec2 sample_velocity(const FlowState& flow, const Vec2& pos) {
  const double y = pos.y - flow.center_y;
  if (std::abs(y) > flow.half_width) return {0.0, 0.0};
  const double rel = y / flow.half_width;
  return flow.u * (1.0 - rel * rel) * flow.axis;
}

FlowState step_flow(FlowState flow, double dt, double noise) {
  flow.u_tilde = std::clamp(flow.u_tilde + flow.sigma * std::sqrt(dt) * noise, flow.u_min, flow.u_max);
  const double gain = 1.0 - std::exp(-dt / flow.tau);
  flow.u = std::clamp(flow.u + gain * (flow.u_tilde - flow.u), flow.u_min, flow.u_max);
  return flow;
}

}  // namespace flowpush
