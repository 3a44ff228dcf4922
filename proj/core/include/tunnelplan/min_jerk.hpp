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

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tunnelplan/types.hpp"
#include "tunnelplan/uniform_bspline.hpp"

namespace tunnelplan {

/// Piecewise-quintic trajectory with C2 junctions; immutable after
/// construction, safe to sample from any thread.
class PiecewisePolyTrajectory {
 public:
  struct Segment {
    double duration;
    // coeffs(axis, k) is the coefficient of (t - t_segment)^k, physical time.
    Eigen::Matrix<double, 3, 6> coeffs;

    Vec3 eval(double t, int deriv) const;
  };

  PiecewisePolyTrajectory(std::vector<Segment> segments, double start_time = 0.0);

  double startTime() const { return start_time_; }
  double duration() const { return duration_; }
  double endTime() const { return start_time_ + duration_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Evaluates derivative 0..3 at t; out-of-range times are clamped to the
  /// domain (commands hold the boundary state) and flagged when a flag
  /// pointer is given.
  Vec3 eval(double t, int deriv = 0, bool* clamped = nullptr) const;

  BoundaryState stateAt(double t) const;

  /// Integral of the squared jerk over the whole trajectory (closed form).
  double jerkCost() const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> cumulative_;
  double start_time_;
  double duration_;
};

/// Single quintic segment from full boundary states (the closed-form
/// minimum-jerk arc between two states).
PiecewisePolyTrajectory::Segment quinticSegment(const BoundaryState& from, const BoundaryState& to,
                                                double duration);

/// Minimum-jerk trajectory through the waypoints (first and last must match
/// the boundary positions): minimizes the integral of squared jerk subject
/// to waypoint interpolation, junction continuity and exact boundary
/// derivatives 0..2, solved per axis as a banded linear system.
PiecewisePolyTrajectory minJerk(const std::vector<Vec3>& waypoints,
                                const std::vector<double>& durations, const BoundaryState& start,
                                const BoundaryState& end, double start_time = 0.0);

/// Final-trajectory construction: waypoints sampled on the spline at a
/// constant interval, hard start state enforced exactly, end state taken
/// from the spline at the last sample.
PiecewisePolyTrajectory fromBspline(const UniformBSpline& spline, double sample_dt,
                                    const BoundaryState& hard_start, double start_time = 0.0);

/// CSV rows "t,px,py,pz,vx,vy,vz,ax,ay,az,jx,jy,jz" sampled at the given
/// rate (Hz), always including the final time.
std::string trajectoryToCsv(const PiecewisePolyTrajectory& traj, double rate);

}  // namespace tunnelplan
