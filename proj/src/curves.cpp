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

#include "flowpush/curves.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "flowpush/error.hpp"

namespace flowpush {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Base lemniscate (a*sin t, b*sin t*cos t), t in [0, 2*pi).
Vec2 lemniscate(double t, double a, double b) {
  return {a * std::sin(t), b * std::sin(t) * std::cos(t)};
}

std::vector<Vec2> sample_circle(const CurveSpec& spec, int n) {
  const double r = spec.circle_radius * spec.scale;
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back(spec.center + r * Vec2{std::cos(phi), std::sin(phi)});
  }
  return pts;
}

// Two orthogonal lemniscate passes traversed back to back; the second pass is
// the first rotated 90 degrees CCW. Uniform sampling in the concatenated
// parameter s in [0, 4*pi).
std::vector<Vec2> sample_clover(const CurveSpec& spec, int n) {
  const double a = spec.clover_a * spec.scale;
  const double b = spec.clover_b * spec.scale;
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    Vec2 p = s < kTwoPi ? lemniscate(s, a, b) : lemniscate(s - kTwoPi, a, b).perp();
    pts.push_back(spec.center + p);
  }
  return pts;
}

// Corner points are exact waypoints; remaining points are spread along the
// edges proportional to arc length (equal sides, so as evenly as integer
// counts allow).
std::vector<Vec2> sample_square(const CurveSpec& spec, int n) {
  const double h = 0.5 * spec.square_side * spec.scale;
  const std::array<Vec2, 4> corners = {
      spec.center + Vec2{-h, -h},
      spec.center + Vec2{h, -h},
      spec.center + Vec2{h, h},
      spec.center + Vec2{-h, h},
  };
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const int base = n / 4;
  const int rem = n % 4;
  for (int e = 0; e < 4; ++e) {
    const int count = base + (e < rem ? 1 : 0);
    const Vec2& from = corners[static_cast<std::size_t>(e)];
    const Vec2& to = corners[static_cast<std::size_t>((e + 1) % 4)];
    for (int j = 0; j < count; ++j) {
      const double f = static_cast<double>(j) / static_cast<double>(count);
      pts.push_back(from + f * (to - from));
    }
  }
  return pts;
}

}  // namespace

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Clover: return "clover";
    case CurveKind::Square: return "square";
  }
  return "unknown";
}

CurveKind curve_kind_from_string(const std::string& name) {
  if (name == "circle") return CurveKind::Circle;
  if (name == "clover") return CurveKind::Clover;
  if (name == "square") return CurveKind::Square;
  throw ConfigError("unknown curve kind: '" + name + "'");
}

WaypointPath build_curve(const CurveSpec& spec, int n_waypoints) {
  if (n_waypoints < 3) {
    throw ConfigError("build_curve: need at least 3 waypoints");
  }
  if (spec.scale <= 0.0) {
    throw ConfigError("build_curve: scale must be positive");
  }
  if (spec.circle_radius <= 0.0 || spec.clover_a <= 0.0 || spec.clover_b <= 0.0 ||
      spec.square_side <= 0.0) {
    throw ConfigError("build_curve: base sizes must be positive");
  }

  WaypointPath path;
  switch (spec.kind) {
    case CurveKind::Circle: path.waypoints = sample_circle(spec, n_waypoints); break;
    case CurveKind::Clover: path.waypoints = sample_clover(spec, n_waypoints); break;
    case CurveKind::Square: path.waypoints = sample_square(spec, n_waypoints); break;
  }

  for (int i = 0; i < path.size(); ++i) {
    if (distance(path[i], path[path.wrap(i + 1)]) <= 0.0) {
      throw ConfigError("build_curve: degenerate segment at waypoint " + std::to_string(i));
    }
  }
  return path;
}

LocalFrame local_frame(const WaypointPath& path, int i) {
  const Vec2 seg = path[path.wrap(i + 1)] - path[i];
  const Vec2 t = seg.normalized();
  return {t, t.perp()};
}

double signed_cte(const Vec2& cell_pos, const WaypointPath& path, int i) {
  return (cell_pos - path[i]).dot(local_frame(path, i).normal);
}

WaypointAdvance advance_waypoints(const Vec2& cell_pos, const WaypointPath& path, int index,
                                  double reach_radius) {
  const int n = path.size();
  int idx = path.wrap(index);
  int delta = 0;
  while (delta < n && distance(cell_pos, path[idx]) <= reach_radius) {
    idx = path.wrap(idx + 1);
    ++delta;
  }
  return {idx, delta};
}

void validate_fits_workspace(const WaypointPath& path, double workspace_w, double workspace_h,
                             double margin) {
  for (int i = 0; i < path.size(); ++i) {
    const Vec2& w = path[i];
    if (w.x < margin || w.x > workspace_w - margin || w.y < margin || w.y > workspace_h - margin) {
      throw ConfigError("curve leaves the workspace margin at waypoint " + std::to_string(i));
    }
  }
}

}  // namespace flowpush
