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

#include "flowpush/rng.hpp"
#include "flowpush/vec2.hpp"

namespace flowpush {

/// Channel geometry and centerline-speed process parameters.
struct FlowConfig {
  double u_min = -10.8;  // centerline speed bounds, px/s
  double u_max = 10.8;
  double tau = 1.2;    // relaxation time constant, s
  double sigma = 2.0;  // noise intensity on the target speed
  double half_width = 256.0;   // channel half-width R, px
  double center_y = 256.0;     // cross-channel coordinate of the centerline
  Vec2 axis{1.0, 0.0};         // channel axis, normalized on init

  void validate() const;
};

/// Poiseuille profile with a temporally correlated centerline speed. The
/// realized speed `u` relaxes toward the noisy target `u_tilde`; both are
/// clipped to the configured bounds after every step.
struct FlowState {
  double u = 0.0;
  double u_tilde = 0.0;
  double u_min = -10.8;
  double u_max = 10.8;
  double tau = 1.2;
  double sigma = 2.0;
  double half_width = 256.0;
  double center_y = 256.0;
  Vec2 axis{1.0, 0.0};
};

/// Draws the initial centerline speed uniformly in [u_min, u_max]; the noisy
/// target starts equal to it so there is no initial transient.
FlowState init_flow(Rng& rng, const FlowConfig& cfg);

/// Velocity at a workspace position: u * (1 - (y/R)^2) along the channel
/// axis, zero beyond the channel walls.
Vec2 sample_velocity(const FlowState& flow, const Vec2& pos);

/// One Euler step of the correlated speed process with a standard normal
/// noise sample. Relaxation gain is 1 - exp(-dt/tau).
FlowState step_flow(FlowState flow, double dt, double noise);

}  // namespace flowpush
