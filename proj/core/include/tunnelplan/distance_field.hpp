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

#include "tunnelplan/occupancy_grid.hpp"
#include "tunnelplan/types.hpp"

namespace tunnelplan {

/// Euclidean distance field over a voxel grid: per-voxel distance (meters,
/// center to center) to the nearest occupied voxel, computed with the exact
/// separable lower-envelope distance transform. Immutable after compute();
/// concurrent readers are safe.
class DistanceField {
 public:
  /// Batch EDF of the whole grid. Throws std::invalid_argument when the grid
  /// has no occupied voxel (the field would be undefined everywhere).
  static DistanceField compute(const OccupancyGrid& grid);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  const Vec3i& dims() const { return dims_; }

  /// Stored distance at a voxel (exact, 0 at occupied voxels).
  double distanceAt(const Vec3i& v) const { return dist_[index(v)]; }

  /// True when the 2x2x2 interpolation stencil around p is inside the grid
  /// (p at least half a voxel from every face).
  bool interpolable(const Vec3& p) const;

  /// True when the central-difference stencil of gradient() stays
  /// interpolable (one extra half-voxel of margin).
  bool gradientSafe(const Vec3& p) const;

  /// Trilinear interpolation of the 8 surrounding voxel distances.
  /// Throws std::invalid_argument outside the interpolable region.
  double value(const Vec3& p) const;

  /// Central finite differences of value() with step h = resolution/2 per
  /// axis. Throws std::invalid_argument when the stencil leaves the grid.
  Vec3 gradient(const Vec3& p) const;

  const std::vector<double>& raw() const { return dist_; }

 private:
  DistanceField() = default;

  std::size_t index(const Vec3i& v) const {
    return static_cast<std::size_t>(v.x()) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(v.y()) +
                static_cast<std::size_t>(dims_.y()) * static_cast<std::size_t>(v.z()));
  }
  double interpolateUnchecked(const Vec3& p) const;

  Vec3 origin_{Vec3::Zero()};
  double resolution_{0.0};
  Vec3i dims_{Vec3i::Zero()};
  std::vector<double> dist_;
};

}  // namespace tunnelplan
