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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tunnelplan/types.hpp"

namespace tunnelplan {

/// Axis-aligned voxel occupancy map. Voxel (i,j,k) covers the cube
/// [origin + res*(i,j,k), origin + res*(i+1,j+1,k+1)); its center is at
/// origin + res*(i+0.5, j+0.5, k+0.5). World<->voxel index round-trips are
/// exact for voxel centers.
class OccupancyGrid {
 public:
  OccupancyGrid(const Vec3& origin, double resolution, const Vec3i& dims);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  const Vec3i& dims() const { return dims_; }
  std::size_t voxelCount() const { return occ_.size(); }

  bool inBounds(const Vec3i& v) const {
    return v.x() >= 0 && v.x() < dims_.x() && v.y() >= 0 && v.y() < dims_.y() &&
           v.z() >= 0 && v.z() < dims_.z();
  }
  std::size_t index(const Vec3i& v) const {
    return static_cast<std::size_t>(v.x()) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(v.y()) +
                static_cast<std::size_t>(dims_.y()) * static_cast<std::size_t>(v.z()));
  }

  bool occupied(const Vec3i& v) const { return occ_[index(v)] != 0; }
  void setOccupied(const Vec3i& v, bool value = true) { occ_[index(v)] = value ? 1 : 0; }

  Vec3 voxelCenter(const Vec3i& v) const {
    return origin_ + resolution_ * (v.cast<double>() + Vec3::Constant(0.5));
  }
  Vec3i worldToVoxel(const Vec3& p) const {
    const Vec3 rel = (p - origin_) / resolution_;
    return Vec3i(static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y())),
                 static_cast<int>(std::floor(rel.z())));
  }
  bool contains(const Vec3& p) const { return inBounds(worldToVoxel(p)); }

  /// Occupancy query in world coordinates; out-of-grid counts as occupied.
  bool occupiedAt(const Vec3& p) const {
    const Vec3i v = worldToVoxel(p);
    return !inBounds(v) || occupied(v);
  }

  std::size_t occupiedCount() const;

  const std::vector<std::uint8_t>& raw() const { return occ_; }

  // "VXG1" map file: text header (vxg1 / resolution / origin / dims) followed
  // by run-length-encoded occupancy in x-fastest order.
  void saveVxg(const std::filesystem::path& file) const;
  static OccupancyGrid loadVxg(const std::filesystem::path& file);

  /// JSON document mirroring the VXG1 fields (resolution, origin, dims, rle).
  std::string toJson() const;
  static OccupancyGrid fromJson(const std::string& text);

 private:
  Vec3 origin_;
  double resolution_;
  Vec3i dims_;
  std::vector<std::uint8_t> occ_;
};

}  // namespace tunnelplan
