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

#include <vector>

#include "tunnelplan/types.hpp"

namespace tunnelplan {

/// Position/velocity/acceleration of a cubic uniform B-spline at a knot,
/// where only three control points contribute.
struct KnotState {
  Vec3 position;
  Vec3 velocity;
  Vec3 acceleration;
};

/// Closed-form knot evaluation of a cubic uniform B-spline:
///   position     = (q0 + 4 q1 + q2) / 6
///   velocity     = (q2 - q0) / (2 dt)
///   acceleration = (q0 - 2 q1 + q2) / dt^2
KnotState evalKnotCubic(const Vec3& q0, const Vec3& q1, const Vec3& q2, double dt);

/// Uniform B-spline in R^3: N control points, degree p >= 3, knot interval
/// dt. The evaluation domain is [t0, t0 + (N - p) dt]. Immutable value type.
class UniformBSpline {
 public:
  UniformBSpline(std::vector<Vec3> controls, int degree, double dt, double t0 = 0.0);

  int degree() const { return degree_; }
  double dt() const { return dt_; }
  double tMin() const { return t0_; }
  double tMax() const { return t0_ + duration(); }
  double duration() const {
    return (static_cast<double>(controls_.size()) - degree_) * dt_;
  }
  std::size_t numControls() const { return controls_.size(); }
  const std::vector<Vec3>& controls() const { return controls_; }

  /// De Boor evaluation of the deriv-th derivative. Rejects t outside the
  /// domain and deriv > degree (which would be identically zero).
  Vec3 eval(double t, int deriv = 0) const;

  /// Derivatives 0..2 at t, packed as a boundary state.
  BoundaryState stateAt(double t) const;

 private:
  std::vector<Vec3> controls_;
  int degree_;
  double dt_;
  double t0_;
};

}  // namespace tunnelplan
