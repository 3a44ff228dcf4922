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

#include <array>
#include <random>
#include <string>
#include <vector>

#include "tunnelplan/distance_field.hpp"
#include "tunnelplan/types.hpp"
#include "tunnelplan/uniform_bspline.hpp"

namespace tunnelplan {

struct CenterlineConfig {
  double tunnel_dim = 0.6;  // D: cross-section dimension, m
  double step = 0.15;       // S: search step length, m
  double plan_range = 3.0;  // R_p: maximum planned distance, m
  double ascent_tolerance = 1e-3;   // projected-gradient norm stop
  int max_ascent_iterations = 50;
  double wall_epsilon = 0.02;  // EDF level treated as "on the wall", m
  int max_descent_iterations = 60;
  std::uint64_t rng_seed = 1;
  bool center_seed = true;  // run the seed itself through the ridge ascent
  // Replaces random octant directions with the fixed octant bisectors,
  // enabling exact regression tests.
  bool deterministic_octants = false;
  // Extra EDF slack on the exit guard 0.5 * D; negative selects the default
  // of one voxel diagonal, compensating voxelization overshoot of the
  // half-width.
  double exit_edf_slack = -1.0;

  double exitThreshold(double resolution) const {
    const double slack =
        exit_edf_slack >= 0.0 ? exit_edf_slack : resolution * std::sqrt(3.0);
    return 0.5 * tunnel_dim + slack;
  }
  void validate(double resolution) const;
};

enum class CenterlineStop {
  kExitedTunnel,  // EDF guard fired: walked past an open end
  kRangeCapped,   // accumulated distance exceeded plan_range
  kTruncated      // next step would leave the mapped grid
};

struct Centerline {
  std::vector<Vec3> waypoints;
  std::vector<double> waypoint_edf;
  CenterlineStop stop;
  UniformBSpline spline;
};

/// Maximizes the EDF over the plane through start normal to dir (projected
/// gradient ascent with backtracking). The result stays in that plane and
/// never has a smaller EDF than the start.
Vec3 gradientAscend(const DistanceField& field, const Vec3& start, const Vec3& dir,
                    const CenterlineConfig& cfg);

/// Eight random points on the sphere of radius EDF(p) around p, one per
/// sign-octant of the local frame around dir. Deterministic given the rng
/// state; octant i carries signs ((-1)^i, (-1)^(i>>1), (-1)^(i>>2)).
std::array<Vec3, 8> sphereSample(const DistanceField& field, const Vec3& p, const Vec3& dir,
                                 std::mt19937_64& rng, const CenterlineConfig& cfg);

struct WallDescent {
  Vec3 point;
  bool converged;
};

/// Gradient descent of the EDF down to wall_epsilon (backtracking line
/// search along -gradient). A vanishing gradient at the start (ridge) is
/// broken by a 0.1*resolution nudge along tie_break_dir.
WallDescent descendToWall(const DistanceField& field, const Vec3& start,
                          const CenterlineConfig& cfg,
                          const Vec3& tie_break_dir = Vec3::UnitX());

/// Normal of the least-squares plane through the centroid (smallest singular
/// direction), sign-flipped so that normal . dir > 0. Throws PlanningError
/// when the points are degenerate (sigma2/sigma1 < 1e-6).
Vec3 fitPlaneNormal(const std::vector<Vec3>& points, const Vec3& dir);

/// Walks the tunnel's EDF ridge from the seed state, emitting waypoints
/// every cfg.step until the EDF exit guard fires or the plan range is
/// exhausted, then parameterizes them at the desired speed.
Centerline extractCenterline(const DistanceField& field, const Vec3& seed,
                             const Vec3& seed_velocity, const CenterlineConfig& cfg,
                             double v_des);

/// Cubic uniform B-spline through the waypoints: dt = step / v_des, control
/// points solved so the knot positions interpolate the waypoints, with
/// natural (zero second difference) end padding.
UniformBSpline parameterizeBspline(const std::vector<Vec3>& waypoints, double v_des, double step,
                                   int degree = 3);

/// CSV rows "index,x,y,z,edf".
std::string waypointsToCsv(const Centerline& centerline);

}  // namespace tunnelplan
