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

#include <string>
#include <vector>

#include "flowpush/vec2.hpp"

namespace flowpush {

enum class CurveKind { Circle, Clover, Square };

std::string to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& name);

/// Reference-curve description. Base sizes are in px before `scale` is
/// applied; the clover is a composite of two orthogonal lemniscates
/// (a*sin t, b*sin t*cos t).
struct CurveSpec {
  CurveKind kind = CurveKind::Clover;
  Vec2 center{256.0, 256.0};
  double scale = 1.0;
  int phase_offset = 0;  // waypoint index of the deterministic start position
  double circle_radius = 100.0;
  double clover_a = 110.0;
  double clover_b = 110.0;
  double square_side = 180.0;
};

/// Closed waypoint polyline; index arithmetic is mod N.
struct WaypointPath {
  std::vector<Vec2> waypoints;

  int size() const { return static_cast<int>(waypoints.size()); }
  int wrap(int i) const {
    const int n = size();
    return ((i % n) + n) % n;
  }
  const Vec2& operator[](int i) const { return waypoints[static_cast<std::size_t>(i)]; }
};

struct LocalFrame {
  Vec2 tangent;  // unit vector along the outgoing segment
  Vec2 normal;   // tangent rotated 90 degrees CCW
};

struct WaypointAdvance {
  int index;  // active waypoint index after advancement
  int delta;  // number of waypoints advanced this call (>= 0)
};

/// Samples `n_waypoints` points once around the closed curve. Circle and
/// clover are sampled uniformly in the curve parameter; the square is sampled
/// by arc length with all four corners included as waypoints.
/// Throws ConfigError for non-positive sizes/scale or n_waypoints < 3.
WaypointPath build_curve(const CurveSpec& spec, int n_waypoints);

/// Unit tangent/normal of the segment leaving waypoint i.
LocalFrame local_frame(const WaypointPath& path, int i);

/// Signed cross-track error of a point against the segment leaving
/// waypoint i: e = (p - w_i) . n_i.
double signed_cte(const Vec2& cell_pos, const WaypointPath& path, int i);

/// Advances the active index while the cell sits inside the reach radius of
/// the current waypoint. Advancement is capped at N per call so a reach
/// radius larger than the whole curve cannot cycle forever.
WaypointAdvance advance_waypoints(const Vec2& cell_pos, const WaypointPath& path, int index,
                                  double reach_radius);

/// Verifies every waypoint sits inside the workspace rectangle with at least
/// `margin` px to spare. Throws ConfigError otherwise.
void validate_fits_workspace(const WaypointPath& path, double workspace_w, double workspace_h,
                             double margin);

}  // namespace flowpush
