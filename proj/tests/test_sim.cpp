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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "flowpush/sim.hpp"

using namespace flowpush;

namespace {

FlowState zero_flow() {
  FlowState f;
  f.u = 0.0;
  f.u_tilde = 0.0;
  return f;
}

FlowState centerline_flow(double u) {
  FlowState f;
  f.u = u;
  f.u_tilde = u;
  f.half_width = 256.0;
  f.center_y = 256.0;
  return f;
}

WorldState state_at(Vec2 robot, Vec2 cell) {
  WorldState s;
  s.p_r = robot;
  s.p_c = cell;
  return s;
}

}  // namespace

TEST_CASE("clip_speed preserves direction and caps the norm") {
  SUBCASE("norm exactly at the envelope stays put") {
    const Vec2 u = clip_speed({30.0, 40.0}, 50.0);
    CHECK(u.x == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(u.y == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(u.norm() <= 50.0);
  }
  SUBCASE("oversized command scales down") {
    const Vec2 u = clip_speed({60.0, 80.0}, 50.0);
    CHECK(u.x == doctest::Approx(30.0).epsilon(1e-8));
    CHECK(u.y == doctest::Approx(40.0).epsilon(1e-8));
  }
  SUBCASE("zero input is safe") {
    const Vec2 u = clip_speed({0.0, 0.0}, 50.0);
    CHECK(u.x == 0.0);
    CHECK(u.y == 0.0);
  }
  SUBCASE("random inputs always satisfy the envelope") {
    Rng rng(9);
    for (int i = 0; i < 10000; ++i) {
      const Vec2 raw{rng.uniform(-500.0, 500.0), rng.uniform(-500.0, 500.0)};
      CHECK(clip_speed(raw, 50.0).norm() <= 50.0 + 1e-9);
    }
  }
}

TEST_CASE("detect_contact is inclusive at the contact distance") {
  SimParams p;  // radii 8 + 10, slack 1 -> contact at 19
  WorldState s = state_at({0.0, 0.0}, {19.0, 0.0});
  CHECK(detect_contact(s, p));
  s.p_c = {19.0 + 2.0 * p.contact_slack, 0.0};
  CHECK_FALSE(detect_contact(s, p));

  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    s.p_r = {rng.uniform(0.0, 512.0), rng.uniform(0.0, 512.0)};
    s.p_c = {rng.uniform(0.0, 512.0), rng.uniform(0.0, 512.0)};
    const double d = std::hypot(s.p_r.x - s.p_c.x, s.p_r.y - s.p_c.y);
    CHECK(detect_contact(s, p) == (d <= p.contact_distance()));
  }
}

TEST_CASE("free motion: no contact, no flow") {
  SimParams p;
  const WorldState s = state_at({100.0, 100.0}, {200.0, 200.0});
  const WorldState n = step_world(s, {10.0, 0.0}, zero_flow(), p);
  CHECK(n.p_r.x == doctest::Approx(100.0 + 10.0 * p.dt).epsilon(1e-15));
  CHECK(n.p_r.y == 100.0);
  CHECK(n.p_c.x == 200.0);
  CHECK(n.p_c.y == 200.0);
  CHECK(n.v_r.x == doctest::Approx(10.0));
  CHECK(n.v_c.norm() == 0.0);
  CHECK(n.k == 1);
  CHECK(n.t == doctest::Approx(p.dt));
}

TEST_CASE("pure normal pushing transmits the full normal speed") {
  SimParams p;
  // robot directly behind the cell at touching distance, pushing along +x
  const WorldState s = state_at({100.0, 100.0}, {100.0 + p.touch_distance(), 100.0});
  REQUIRE(detect_contact(s, p));
  const Vec2 cmd{20.0, 0.0};
  const WorldState n = step_world(s, cmd, zero_flow(), p);
  CHECK(n.p_c.x == doctest::Approx(s.p_c.x + 20.0 * p.dt).epsilon(1e-12));
  CHECK(n.p_c.y == doctest::Approx(100.0));
  CHECK(n.p_r.x == doctest::Approx(s.p_r.x + 20.0 * p.dt).epsilon(1e-12));
  // gap along the normal is preserved
  CHECK(distance(n.p_r, n.p_c) == doctest::Approx(p.touch_distance()).epsilon(1e-12));
}

TEST_CASE("tangential motion slides without dragging the cell") {
  SimParams p;
  const WorldState s = state_at({100.0, 100.0}, {100.0 + p.touch_distance(), 100.0});
  const WorldState n = step_world(s, {0.0, 15.0}, zero_flow(), p);
  CHECK(n.p_c.x == 100.0 + p.touch_distance());
  CHECK(n.p_c.y == 100.0);
  CHECK(n.p_r.y == doctest::Approx(100.0 + 15.0 * p.dt));
}

TEST_CASE("pulling away never drags the cell") {
  SimParams p;
  const WorldState s = state_at({100.0, 100.0}, {100.0 + p.touch_distance(), 100.0});
  const WorldState n = step_world(s, {-30.0, 0.0}, zero_flow(), p);
  CHECK(n.p_c.x == 100.0 + p.touch_distance());
  CHECK(n.p_r.x == doctest::Approx(100.0 - 30.0 * p.dt));
}

TEST_CASE("cell drifts with the flow while a stationary robot holds traction") {
  SimParams p;
  const WorldState s = state_at({100.0, 256.0 - 40.0}, {200.0, 256.0});
  const FlowState f = centerline_flow(10.8);
  const WorldState n = step_world(s, {0.0, 0.0}, f, p);
  CHECK(n.p_c.x == doctest::Approx(200.0 + 10.8 * p.dt).epsilon(1e-12));
  CHECK(n.p_r.x == 100.0);  // flow_drag_on_robot = 0
  CHECK(n.v_c.x == doctest::Approx(10.8).epsilon(1e-12));
}

TEST_CASE("flow drag on the robot is configurable") {
  SimParams p;
  p.flow_drag_on_robot = 0.5;
  const WorldState s = state_at({100.0, 256.0}, {300.0, 256.0});
  const FlowState f = centerline_flow(10.0);
  const WorldState n = step_world(s, {0.0, 0.0}, f, p);
  CHECK(n.p_r.x == doctest::Approx(100.0 + 0.5 * 10.0 * p.dt).epsilon(1e-12));
}

TEST_CASE("overlap is resolved to at most 1e-6 penetration") {
  SimParams p;
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    WorldState s = state_at({rng.uniform(100.0, 400.0), rng.uniform(100.0, 400.0)}, {});
    const double ang = rng.uniform(0.0, 6.28318);
    const double d = rng.uniform(0.0, p.contact_distance() + 5.0);
    s.p_c = s.p_r + d * Vec2{std::cos(ang), std::sin(ang)};
    const Vec2 cmd{rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)};
    const WorldState n = step_world(s, cmd, zero_flow(), p);
    CHECK(distance(n.p_r, n.p_c) >= p.touch_distance() - 1e-6);
  }
}

TEST_CASE("realized robot speed is bounded by the envelope") {
  SimParams p;
  Rng rng(32);
  const FlowState f = centerline_flow(10.8);
  for (int i = 0; i < 5000; ++i) {
    WorldState s = state_at({rng.uniform(50.0, 450.0), rng.uniform(50.0, 450.0)},
                            {rng.uniform(50.0, 450.0), rng.uniform(50.0, 450.0)});
    const Vec2 cmd = clip_speed({rng.uniform(-80.0, 80.0), rng.uniform(-80.0, 80.0)}, p.v_max);
    const WorldState n = step_world(s, cmd, f, p);
    CHECK(n.v_r.norm() <= p.v_max + std::abs(p.flow_drag_on_robot) * 10.8 + 1e-9);
  }
}

TEST_CASE("zero command and zero flow is the identity on positions") {
  SimParams p;
  const WorldState s = state_at({123.0, 234.0}, {345.0, 222.0});
  const WorldState n = step_world(s, {0.0, 0.0}, zero_flow(), p);
  CHECK(n.p_r == s.p_r);
  CHECK(n.p_c == s.p_c);
  CHECK(n.theta_r == s.theta_r);
}

TEST_CASE("quasi-statics: stopping the command stops the robot instantly") {
  SimParams p;
  WorldState s = state_at({100.0, 100.0}, {300.0, 300.0});
  s = step_world(s, {40.0, 0.0}, zero_flow(), p);
  CHECK(s.v_r.norm() > 0.0);
  const WorldState rest = step_world(s, {0.0, 0.0}, zero_flow(), p);
  CHECK(rest.v_r.norm() == 0.0);
  CHECK(rest.p_r == s.p_r);
}

TEST_CASE("heading follows the command and holds when idle") {
  SimParams p;
  WorldState s = state_at({100.0, 100.0}, {300.0, 300.0});
  s = step_world(s, {0.0, 25.0}, zero_flow(), p);
  CHECK(s.theta_r == doctest::Approx(std::atan2(1.0, 0.0)));
  const double held = s.theta_r;
  s = step_world(s, {0.0, 0.0}, zero_flow(), p);
  CHECK(s.theta_r == held);
}

TEST_CASE("contact flag after the step matches detect_contact of the new state") {
  SimParams p;
  Rng rng(33);
  for (int i = 0; i < 3000; ++i) {
    WorldState s = state_at({rng.uniform(50.0, 450.0), rng.uniform(50.0, 450.0)},
                            {rng.uniform(50.0, 450.0), rng.uniform(50.0, 450.0)});
    const Vec2 cmd = clip_speed({rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)}, p.v_max);
    const WorldState n = step_world(s, cmd, zero_flow(), p);
    CHECK(n.contact == detect_contact(n, p));
  }
}

TEST_CASE("positions are clamped inside the workspace") {
  SimParams p;
  WorldState s = state_at({p.robot_radius + 0.1, 256.0}, {400.0, 256.0});
  const WorldState n = step_world(s, {-50.0, 0.0}, zero_flow(), p);
  CHECK(n.p_r.x == p.robot_radius);
}

TEST_CASE("deterministic reset places the robot behind the cell against the tangent") {
  SimParams p;
  CurveSpec spec;
  spec.kind = CurveKind::Circle;
  spec.center = {256.0, 256.0};
  spec.phase_offset = 0;
  const WaypointPath path = build_curve(spec, 140);
  Rng rng(77);
  const ResetResult r = reset_world(spec, path, rng, false, p);

  CHECK(r.start_index == 0);
  CHECK(r.state.p_c == path[0]);
  const Vec2 expected = path[0] - (p.touch_distance() + p.approach_gap) * local_frame(path, 0).tangent;
  CHECK(r.state.p_r.x == doctest::Approx(expected.x).epsilon(1e-12));
  CHECK(r.state.p_r.y == doctest::Approx(expected.y).epsilon(1e-12));
  CHECK_FALSE(r.state.contact);
}

TEST_CASE("deterministic resets are bit-identical across equal seeds") {
  SimParams p;
  CurveSpec spec;
  spec.phase_offset = 17;
  const WaypointPath path = build_curve(spec, 140);
  Rng a(5), b(5);
  const ResetResult ra = reset_world(spec, path, a, false, p);
  const ResetResult rb = reset_world(spec, path, b, false, p);
  CHECK(ra.state.p_r == rb.state.p_r);
  CHECK(ra.state.p_c == rb.state.p_c);
  CHECK(ra.start_index == rb.start_index);
  CHECK(ra.start_index == 17);

  Rng c(6), d(6);
  const ResetResult rc = reset_world(spec, path, c, true, p);
  const ResetResult rd = reset_world(spec, path, d, true, p);
  CHECK(rc.state.p_r == rd.state.p_r);
  CHECK(rc.state.p_c == rd.state.p_c);
}

TEST_CASE("randomized resets cover at least 90 percent of start indices") {
  SimParams p;
  CurveSpec spec;
  const WaypointPath path = build_curve(spec, 140);
  Rng rng(123);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(reset_world(spec, path, rng, true, p).start_index);
  }
  CHECK(static_cast<int>(seen.size()) >= 126);
}

TEST_CASE("randomized reset jitter stays small") {
  SimParams p;
  CurveSpec spec;
  const WaypointPath path = build_curve(spec, 140);
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const ResetResult r = reset_world(spec, path, rng, true, p);
    CHECK(distance(r.state.p_c, path[r.start_index]) <= 2.0 * std::sqrt(2.0) + 1e-12);
    const double standoff = distance(r.state.p_r, r.state.p_c);
    CHECK(standoff == doctest::Approx(p.touch_distance() + p.approach_gap).epsilon(1e-12));
  }
}
