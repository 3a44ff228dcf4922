// Copyright 2026 the tunnelplan authors.
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

#include "tunnelplan/occupancy_grid.hpp"
#include "tunnelplan/types.hpp"

namespace tunnelplan {

enum class CrossSection { kCircle, kSquare };
enum class PathKind { kPolyline, kArc };

/// Synthetic tunnel description: a cross-section swept along a 3-D path.
struct TunnelSpec {
  CrossSection section = CrossSection::kCircle;
  double width = 0.6;  // diameter (circle) or side length (square), m
  PathKind path_kind = PathKind::kPolyline;
  std::vector<Vec3> path;  // polyline knots; an arc is given by exactly 3 knots
  int wall_voxels = 2;     // radial wall shell thickness, voxels
  double end_apron = 1.0;  // free region past each open end, m
  double side_margin = 0.75;  // free margin around the wall shell, m
};

/// Ground-truth description of a generated world, kept alongside the grid
/// so planners and metrics can be checked against the real geometry.
struct WorldMeta {
  Vec3 entrance_position = Vec3::Zero();
  Vec3 entrance_direction = Vec3::UnitX();
  Vec3 exit_position = Vec3::Zero();
  Vec3 exit_direction = Vec3::UnitX();
  double width = 0.6;
  CrossSection section = CrossSection::kCircle;
  double path_length = 0.0;
  std::vector<Vec3> axis;  // dense center-path samples, entrance to exit
};

struct TunnelWorld {
  OccupancyGrid grid;
  WorldMeta meta;
};

/// Sweeps the cross-section along the path: voxels whose center lies within
/// the section are free, a radial shell of wall_voxels is occupied, both
/// ends open into free aprons at least end_apron deep. Rejects resolutions
/// coarser than width/6.
TunnelWorld generateTunnelWorld(const TunnelSpec& spec, double resolution);

std::string metaToJson(const WorldMeta& meta);
WorldMeta metaFromJson(const std::string& text);

/// Circular arc through three knots, densified to a polyline.
std::vector<Vec3> arcThroughKnots(const Vec3& a, const Vec3& b, const Vec3& c, double step);

/// Arc-length resampling of a polyline to a given point count (>= 2).
std::vector<Vec3> resamplePolyline(const std::vector<Vec3>& points, std::size_t count);

double polylineLength(const std::vector<Vec3>& points);

// Desk-scale worlds mirroring the test articles: a straight tube, a 90
// degree yaw bend, a vertical bend, and a lateral S-bend.
namespace presets {
TunnelSpec straightTunnel(double width, double length,
                          CrossSection section = CrossSection::kCircle);
TunnelSpec yawBendTunnel(double width, double leg, double bend_radius,
                         CrossSection section = CrossSection::kCircle);
TunnelSpec verticalBendTunnel(double width, double leg, double bend_radius,
                              CrossSection section = CrossSection::kCircle);
TunnelSpec sBendTunnel(double width, double leg, double bend_radius,
                       CrossSection section = CrossSection::kCircle);
/// Spec by preset name: straight | yaw-bend | vert-bend | s-bend.
TunnelSpec byName(const std::string& name, double width, double length);
}  // namespace presets

}  // namespace tunnelplan
