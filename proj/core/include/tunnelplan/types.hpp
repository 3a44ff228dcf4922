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
#include <stdexcept>
#include <string>

namespace tunnelplan {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

/// Position/velocity/acceleration triplet used as a trajectory boundary
/// condition and as the command state handed between planner and tracker.
struct BoundaryState {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Vec3 acceleration{Vec3::Zero()};
};

/// Thrown when a planning stage cannot produce a usable result (e.g. the
/// center-line walk aborts). Recoverable by the caller; distinct from
/// std::invalid_argument which signals a broken precondition.
class PlanningError : public std::runtime_error {
 public:
  explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

/// Right-handed orthonormal frame completion around a unit x-axis.
/// y = normalize(x_axis x up); falls back to world x when x_axis is
/// within 1e-6 of parallel to up.
struct LocalFrame {
  Vec3 x, y, z;

  static LocalFrame around(const Vec3& x_axis) {
    LocalFrame f;
    f.x = x_axis.normalized();
    const Vec3 up(0.0, 0.0, 1.0);
    Vec3 y = f.x.cross(up);
    if (y.norm() < 1e-6) {
      y = f.x.cross(Vec3(1.0, 0.0, 0.0));
    }
    f.y = y.normalized();
    f.z = f.x.cross(f.y);
    return f;
  }
};

}  // namespace tunnelplan
