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

#include "tunnelplan/types.hpp"
#include "tunnelplan/uniform_bspline.hpp"

namespace tunnelplan {

/// Weights of the total trajectory cost
///   f = w_s f_smooth + w_w f_waypoints + w_v f_speed + w_i f_initial + w_e f_end.
/// The initial-state weight dominates by default so the optimized spline
/// stays close to the outgoing command at the hand-off.
struct CostWeights {
  double smoothness = 1.0;
  double waypoints = 5.0;
  double speed = 2.0;
  double initial = 100.0;
  double terminal = 10.0;

  void validate() const;
};

/// Per-control-point gradients, same length as the control list.
using ControlGradient = std::vector<Vec3>;

/// Elastic-band smoothness: sum of squared third differences of the control
/// points. Needs at least 4 controls.
double costSmoothness(const std::vector<Vec3>& controls, ControlGradient* grad = nullptr);

/// Squared deviation of the cubic knot positions from the target waypoints;
/// requires exactly numControls - 2 waypoints.
double costWaypoints(const std::vector<Vec3>& controls, const std::vector<Vec3>& waypoints,
                     ControlGradient* grad = nullptr);

/// Penalty on control-point speeds (||Q_{i+1} - Q_i|| / dt) deviating from
/// v_des; subgradient 0 at coincident controls.
double costSpeed(const std::vector<Vec3>& controls, double dt, double v_des,
                 ControlGradient* grad = nullptr);

/// Squared mismatch of the first/last knot derivatives (orders 0..k) against
/// the requested boundary states. k must be <= 2 for cubic splines.
double costBoundary(const std::vector<Vec3>& controls, double dt, const BoundaryState& initial,
                    const BoundaryState& terminal, int k, ControlGradient* grad = nullptr);

/// Weighted total of all five terms.
double costTotal(const std::vector<Vec3>& controls, double dt, const std::vector<Vec3>& waypoints,
                 const BoundaryState& initial, const BoundaryState& terminal,
                 const CostWeights& weights, double v_des, int boundary_order,
                 ControlGradient* grad = nullptr);

enum class OptimizeStatus { kConverged, kSmallDecrease, kMaxIterations, kDiverged };

struct OptimizeTracePoint {
  int iteration;
  double cost;
  double grad_norm;
};

struct OptimizeResult {
  UniformBSpline spline;
  OptimizeStatus status;
  double initial_cost;
  double final_cost;
  int iterations;
  std::vector<OptimizeTracePoint> trace;
  std::string diagnostic;
};

struct OptimizeOptions {
  CostWeights weights{};
  double v_des = 1.0;
  int boundary_order = 2;
  int max_iterations = 200;
  double grad_inf_tolerance = 1e-5;
  double relative_decrease_tolerance = 1e-8;
};

/// Minimizes the total cost over all control points (limited-memory
/// quasi-Newton with Armijo backtracking; accepted steps never increase the
/// cost). On numeric divergence the result carries the last finite iterate
/// and status kDiverged.
OptimizeResult optimize(const UniformBSpline& init, const std::vector<Vec3>& waypoints,
                        const BoundaryState& initial, const BoundaryState& terminal,
                        const OptimizeOptions& options);

/// CSV rows "iteration,cost,grad_norm".
std::string traceToCsv(const std::vector<OptimizeTracePoint>& trace);

}  // namespace tunnelplan
