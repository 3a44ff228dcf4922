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

#include "tunnelplan/distance_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tunnelplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform (lower envelope of parabolas). Reads n
// samples from f with the given stride and writes the transform back.
void transform1d(double* f, std::size_t n, std::size_t stride, double* scratch_d,
                 double* scratch_z, int* scratch_v) {
  int k = 0;
  scratch_v[0] = 0;
  scratch_z[0] = -kInf;
  scratch_z[1] = kInf;
  auto src = [&](int i) { return f[static_cast<std::size_t>(i) * stride]; };
  for (int q = 1; q < static_cast<int>(n); ++q) {
    if (src(q) == kInf) continue;
    double s;
    while (true) {
      const int p = scratch_v[k];
      if (src(p) == kInf) {
        // no finite parabola yet; replace
        --k;
        if (k < 0) break;
        continue;
      }
      s = ((src(q) + double(q) * q) - (src(p) + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s <= scratch_z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    scratch_v[k] = q;
    scratch_z[k] = (k == 0) ? -kInf : s;
    scratch_z[k + 1] = kInf;
  }
  if (src(scratch_v[0]) == kInf) {
    // whole line unoccupied; leave as inf
    return;
  }
  k = 0;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    while (scratch_z[k + 1] < double(q)) ++k;
    const int p = scratch_v[k];
    scratch_d[q] = double(q - p) * double(q - p) + src(p);
  }
  for (int q = 0; q < static_cast<int>(n); ++q) {
    f[static_cast<std::size_t>(q) * stride] = scratch_d[q];
  }
}

}  // namespace

DistanceField DistanceField::compute(const OccupancyGrid& grid) {
  if (grid.occupiedCount() == 0) {
    throw std::invalid_argument("DistanceField: grid has no occupied voxel, EDF is undefined");
  }
  DistanceField field;
  field.origin_ = grid.origin();
  field.resolution_ = grid.resolution();
  field.dims_ = grid.dims();

  const int nx = field.dims_.x(), ny = field.dims_.y(), nz = field.dims_.z();
  auto& d = field.dist_;
  d.assign(grid.voxelCount(), kInf);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (grid.raw()[i]) d[i] = 0.0;
  }

  const int nmax = std::max({nx, ny, nz});
  std::vector<double> scratch_d(static_cast<std::size_t>(nmax));
  std::vector<double> scratch_z(static_cast<std::size_t>(nmax) + 1);
  std::vector<int> scratch_v(static_cast<std::size_t>(nmax));

  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);

  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      transform1d(d.data() + sy * y + sz * z, static_cast<std::size_t>(nx), sx, scratch_d.data(),
                  scratch_z.data(), scratch_v.data());
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < nx; ++x)
      transform1d(d.data() + sx * x + sz * z, static_cast<std::size_t>(ny), sy, scratch_d.data(),
                  scratch_z.data(), scratch_v.data());
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x)
      transform1d(d.data() + sx * x + sy * y, static_cast<std::size_t>(nz), sz, scratch_d.data(),
                  scratch_z.data(), scratch_v.data());

  for (auto& v : d) v = std::sqrt(v) * field.resolution_;
  return field;
}

bool DistanceField::interpolable(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / resolution_;
  for (int a = 0; a < 3; ++a) {
    if (!(rel[a] >= 0.5 && rel[a] <= dims_[a] - 0.5)) return false;
  }
  return true;
}

bool DistanceField::gradientSafe(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / resolution_;
  for (int a = 0; a < 3; ++a) {
    if (!(rel[a] >= 1.0 && rel[a] <= dims_[a] - 1.0)) return false;
  }
  return true;
}

double DistanceField::interpolateUnchecked(const Vec3& p) const {
  // Cell of the 8 nearest voxel centers; local coordinates in [0,1].
  const Vec3 rel = (p - origin_) / resolution_ - Vec3::Constant(0.5);
  int i[3];
  double f[3];
  for (int a = 0; a < 3; ++a) {
    double fl = std::floor(rel[a]);
    i[a] = static_cast<int>(fl);
    if (i[a] > dims_[a] - 2) {  // p exactly on the far face
      i[a] = dims_[a] - 2;
      fl = i[a];
    }
    if (i[a] < 0) {
      i[a] = 0;
      fl = 0.0;
    }
    f[a] = rel[a] - fl;
  }
  const std::size_t base = index(Vec3i(i[0], i[1], i[2]));
  const std::size_t sy = static_cast<std::size_t>(dims_.x());
  const std::size_t sz = sy * static_cast<std::size_t>(dims_.y());
  const double c000 = dist_[base], c100 = dist_[base + 1];
  const double c010 = dist_[base + sy], c110 = dist_[base + sy + 1];
  const double c001 = dist_[base + sz], c101 = dist_[base + sz + 1];
  const double c011 = dist_[base + sy + sz], c111 = dist_[base + sy + sz + 1];
  const double c00 = c000 + f[0] * (c100 - c000);
  const double c10 = c010 + f[0] * (c110 - c010);
  const double c01 = c001 + f[0] * (c101 - c001);
  const double c11 = c011 + f[0] * (c111 - c011);
  const double c0 = c00 + f[1] * (c10 - c00);
  const double c1 = c01 + f[1] * (c11 - c01);
  return c0 + f[2] * (c1 - c0);
}

double DistanceField::value(const Vec3& p) const {
  if (!interpolable(p)) {
    std::ostringstream msg;
    msg << "EDF query out of bounds: (" << p.x() << ", " << p.y() << ", " << p.z() << ")";
    throw std::invalid_argument(msg.str());
  }
  return interpolateUnchecked(p);
}

Vec3 DistanceField::gradient(const Vec3& p) const {
  if (!gradientSafe(p)) {
    std::ostringstream msg;
    msg << "EDF gradient stencil out of bounds: (" << p.x() << ", " << p.y() << ", " << p.z()
        << ")";
    throw std::invalid_argument(msg.str());
  }
  const double h = 0.5 * resolution_;
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 lo = p, hi = p;
    lo[a] -= h;
    hi[a] += h;
    g[a] = (interpolateUnchecked(hi) - interpolateUnchecked(lo)) / (2.0 * h);
  }
  return g;
}

}  // namespace tunnelplan
