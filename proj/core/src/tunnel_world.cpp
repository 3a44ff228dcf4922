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

#include "tunnelplan/tunnel_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tunnelplan {

namespace {

struct ClosestFoot {
  double sq_dist = std::numeric_limits<double>::infinity();
  std::size_t segment = 0;
  double param = 0.0;      // clamped to [0,1]
  bool before_start = false;
  bool past_end = false;
};

ClosestFoot closestOnPolyline(const std::vector<Vec3>& pts, const Vec3& p) {
  ClosestFoot best;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const Vec3 d = pts[s + 1] - pts[s];
    const double len2 = d.squaredNorm();
    double t_raw = len2 > 0.0 ? (p - pts[s]).dot(d) / len2 : 0.0;
    const double t = std::clamp(t_raw, 0.0, 1.0);
    const Vec3 foot = pts[s] + t * d;
    const double sq = (p - foot).squaredNorm();
    if (sq < best.sq_dist) {
      best.sq_dist = sq;
      best.segment = s;
      best.param = t;
      best.before_start = (s == 0 && t_raw < 0.0);
      best.past_end = (s + 2 == pts.size() && t_raw > 1.0);
    }
  }
  return best;
}

std::vector<Vec3> densify(const std::vector<Vec3>& knots, double step) {
  std::vector<Vec3> out;
  out.push_back(knots.front());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const Vec3 d = knots[i + 1] - knots[i];
    const double len = d.norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int k = 1; k <= n; ++k) {
      out.push_back(knots[i] + (static_cast<double>(k) / n) * d);
    }
  }
  return out;
}

Vec3 tangentAt(const std::vector<Vec3>& pts, std::size_t i) {
  const std::size_t lo = (i == 0) ? 0 : i - 1;
  const std::size_t hi = (i + 1 < pts.size()) ? i + 1 : i;
  return (pts[hi] - pts[lo]).normalized();
}

// Rotation-minimizing frames along the sample chain (projection transport).
void transportFrames(const std::vector<Vec3>& pts, std::vector<Vec3>& us, std::vector<Vec3>& ws) {
  us.resize(pts.size());
  ws.resize(pts.size());
  LocalFrame f0 = LocalFrame::around(tangentAt(pts, 0));
  us[0] = f0.y;
  ws[0] = f0.z;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Vec3 t = tangentAt(pts, i);
    Vec3 u = us[i - 1] - us[i - 1].dot(t) * t;
    if (u.norm() < 1e-9) u = LocalFrame::around(t).y;
    us[i] = u.normalized();
    ws[i] = t.cross(us[i]).normalized();
  }
}

}  // namespace

double polylineLength(const std::vector<Vec3>& points) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) len += (points[i + 1] - points[i]).norm();
  return len;
}

std::vector<Vec3> resamplePolyline(const std::vector<Vec3>& points, std::size_t count) {
  if (points.size() < 2) {
    throw std::invalid_argument("resamplePolyline: need at least 2 points");
  }
  if (count < 2) {
    throw std::invalid_argument("resamplePolyline: need count >= 2");
  }
  std::vector<double> cum(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    cum[i] = cum[i - 1] + (points[i] - points[i - 1]).norm();
  }
  const double total = cum.back();
  std::vector<Vec3> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(count - 1);
    while (seg + 2 < points.size() && cum[seg + 1] < s) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
    out.push_back(points[seg] + std::clamp(t, 0.0, 1.0) * (points[seg + 1] - points[seg]));
  }
  return out;
}

std::vector<Vec3> arcThroughKnots(const Vec3& a, const Vec3& b, const Vec3& c, double step) {
  const Vec3 ab = b - a, ac = c - a;
  const Vec3 n = ab.cross(ac);
  if (n.norm() < 1e-12) {
    throw std::invalid_argument("arcThroughKnots: knots are collinear");
  }
  const Vec3 nu = n.normalized();
  // Circumcenter: intersect the perpendicular bisector planes of ab and ac
  // within the plane of the three knots.
  Eigen::Matrix3d m;
  m.row(0) = ab.transpose();
  m.row(1) = ac.transpose();
  m.row(2) = nu.transpose();
  Vec3 rhs(ab.dot(a + 0.5 * ab), ac.dot(a + 0.5 * ac), nu.dot(a));
  const Vec3 center = m.fullPivLu().solve(rhs);
  const double radius = (a - center).norm();

  const Vec3 ex = (a - center).normalized();
  const Vec3 ey = nu.cross(ex);
  auto angleOf = [&](const Vec3& p) {
    const Vec3 r = p - center;
    return std::atan2(r.dot(ey), r.dot(ex));
  };
  double th_b = angleOf(b), th_c = angleOf(c);
  // Walk from a (angle 0) through b to c.
  if (th_b < 0.0) {
    th_b += 2.0 * M_PI;
    th_c += 2.0 * M_PI;
  }
  if (th_c < th_b) th_c += 2.0 * M_PI;
  const double sweep = th_c;
  const int n_steps = std::max(2, static_cast<int>(std::ceil(radius * sweep / step)));
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) {
    const double th = sweep * static_cast<double>(i) / n_steps;
    out.push_back(center + radius * (std::cos(th) * ex + std::sin(th) * ey));
  }
  return out;
}

TunnelWorld generateTunnelWorld(const TunnelSpec& spec, double resolution) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("generateTunnelWorld: resolution must be > 0");
  }
  if (!(spec.width > 2.0 * resolution)) {
    throw std::invalid_argument("generateTunnelWorld: cross-section must span > 2 voxels");
  }
  if (resolution > spec.width / 6.0) {
    std::ostringstream msg;
    msg << "generateTunnelWorld: resolution " << resolution << " too coarse for cross-section "
        << spec.width << " (need <= width/6 = " << spec.width / 6.0 << ")";
    throw std::invalid_argument(msg.str());
  }
  if (spec.path.size() < 2) {
    throw std::invalid_argument("generateTunnelWorld: path needs at least 2 knots");
  }
  for (std::size_t i = 0; i + 1 < spec.path.size(); ++i) {
    if ((spec.path[i + 1] - spec.path[i]).norm() < 1e-9) {
      throw std::invalid_argument("generateTunnelWorld: path knots must be pairwise distinct");
    }
  }
  if (spec.wall_voxels < 1) {
    throw std::invalid_argument("generateTunnelWorld: wall thickness must be >= 1 voxel");
  }

  const double step = 0.5 * resolution;
  std::vector<Vec3> samples;
  if (spec.path_kind == PathKind::kArc) {
    if (spec.path.size() != 3) {
      throw std::invalid_argument("generateTunnelWorld: arc path needs exactly 3 knots");
    }
    samples = arcThroughKnots(spec.path[0], spec.path[1], spec.path[2], step);
  } else {
    samples = densify(spec.path, step);
  }
  const double length = polylineLength(samples);
  if (length < resolution) {
    throw std::invalid_argument("generateTunnelWorld: degenerate path (length < resolution)");
  }

  const double half = 0.5 * spec.width;
  const double wall = spec.wall_voxels * resolution;
  const double half_ext = half + wall;

  const Vec3 t_in = tangentAt(samples, 0);
  const Vec3 t_out = tangentAt(samples, samples.size() - 1);

  Vec3 lo = samples.front(), hi = samples.front();
  auto grow = [&](const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const auto& p : samples) grow(p);
  grow(samples.front() - spec.end_apron * t_in);
  grow(samples.back() + spec.end_apron * t_out);
  lo -= Vec3::Constant(half_ext + spec.side_margin);
  hi += Vec3::Constant(half_ext + spec.side_margin);

  const Vec3i dims(static_cast<int>(std::ceil((hi.x() - lo.x()) / resolution)),
                   static_cast<int>(std::ceil((hi.y() - lo.y()) / resolution)),
                   static_cast<int>(std::ceil((hi.z() - lo.z()) / resolution)));
  OccupancyGrid grid(lo, resolution, dims);

  std::vector<Vec3> us, ws;
  if (spec.section == CrossSection::kSquare) transportFrames(samples, us, ws);

  // Only voxels near the swept tube need classification; the rest stays free.
  Vec3 tube_lo = samples.front(), tube_hi = samples.front();
  for (const auto& p : samples) {
    tube_lo = tube_lo.cwiseMin(p);
    tube_hi = tube_hi.cwiseMax(p);
  }
  tube_lo -= Vec3::Constant(half_ext + resolution);
  tube_hi += Vec3::Constant(half_ext + resolution);
  const Vec3i v_lo = grid.worldToVoxel(tube_lo).cwiseMax(Vec3i::Zero());
  const Vec3i v_hi = grid.worldToVoxel(tube_hi).cwiseMin(dims - Vec3i::Ones());

  for (int z = v_lo.z(); z <= v_hi.z(); ++z) {
    for (int y = v_lo.y(); y <= v_hi.y(); ++y) {
      for (int x = v_lo.x(); x <= v_hi.x(); ++x) {
        const Vec3i v(x, y, z);
        const Vec3 p = grid.voxelCenter(v);
        const ClosestFoot foot = closestOnPolyline(samples, p);
        if (foot.before_start || foot.past_end) continue;  // open ends
        const double dist = std::sqrt(foot.sq_dist);
        if (dist > half_ext) continue;
        bool occupied;
        if (spec.section == CrossSection::kCircle) {
          occupied = dist > half;
        } else {
          const std::size_t fi =
              foot.param < 0.5 ? foot.segment : std::min(foot.segment + 1, samples.size() - 1);
          const Vec3 foot_pt =
              samples[foot.segment] +
              foot.param * (samples[foot.segment + 1] - samples[foot.segment]);
          const Vec3 e = p - foot_pt;
          const double du = std::abs(e.dot(us[fi]));
          const double dw = std::abs(e.dot(ws[fi]));
          const double rho = std::max(du, dw);
          if (rho > half + wall) continue;
          occupied = rho > half;
        }
        if (occupied) grid.setOccupied(v);
      }
    }
  }

  TunnelWorld world{std::move(grid), WorldMeta{}};
  world.meta.entrance_position = samples.front();
  world.meta.entrance_direction = t_in;
  world.meta.exit_position = samples.back();
  world.meta.exit_direction = t_out;
  world.meta.width = spec.width;
  world.meta.section = spec.section;
  world.meta.path_length = length;
  world.meta.axis = std::move(samples);
  return world;
}

std::string metaToJson(const WorldMeta& meta) {
  nlohmann::json j;
  auto vec = [](const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); };
  j["entrance_position"] = vec(meta.entrance_position);
  j["entrance_direction"] = vec(meta.entrance_direction);
  j["exit_position"] = vec(meta.exit_position);
  j["exit_direction"] = vec(meta.exit_direction);
  j["width"] = meta.width;
  j["section"] = meta.section == CrossSection::kCircle ? "circle" : "square";
  j["path_length"] = meta.path_length;
  nlohmann::json axis = nlohmann::json::array();
  for (const auto& p : meta.axis) axis.push_back(vec(p));
  j["axis"] = std::move(axis);
  return j.dump(2);
}

WorldMeta metaFromJson(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  auto vec = [&](const char* key) {
    const auto& a = j.at(key);
    return Vec3(a.at(0), a.at(1), a.at(2));
  };
  WorldMeta meta;
  meta.entrance_position = vec("entrance_position");
  meta.entrance_direction = vec("entrance_direction");
  meta.exit_position = vec("exit_position");
  meta.exit_direction = vec("exit_direction");
  meta.width = j.at("width").get<double>();
  meta.section =
      j.at("section").get<std::string>() == "square" ? CrossSection::kSquare : CrossSection::kCircle;
  meta.path_length = j.at("path_length").get<double>();
  for (const auto& p : j.at("axis")) {
    meta.axis.emplace_back(p.at(0), p.at(1), p.at(2));
  }
  return meta;
}

namespace presets {

TunnelSpec straightTunnel(double width, double length, CrossSection section) {
  TunnelSpec spec;
  spec.section = section;
  spec.width = width;
  spec.path = {Vec3::Zero(), Vec3(length, 0.0, 0.0)};
  return spec;
}

namespace {

// Straight leg, 90 degree arc in the given plane normal, straight leg.
std::vector<Vec3> bentPath(double leg, double radius, const Vec3& turn_normal) {
  std::vector<Vec3> pts;
  const Vec3 start(0.0, 0.0, 0.0);
  const Vec3 dir0 = Vec3::UnitX();
  pts.push_back(start);
  const Vec3 arc_start = start + leg * dir0;
  pts.push_back(arc_start);
  const Vec3 lateral = turn_normal.cross(dir0).normalized();
  const Vec3 center = arc_start + radius * lateral;
  const int n = 24;
  for (int i = 1; i <= n; ++i) {
    const double th = 0.5 * M_PI * i / n;
    pts.push_back(center - radius * std::cos(th) * lateral + radius * std::sin(th) * dir0);
  }
  const Vec3 dir1 = lateral;
  pts.push_back(pts.back() + leg * dir1);
  return pts;
}

}  // namespace

TunnelSpec yawBendTunnel(double width, double leg, double bend_radius, CrossSection section) {
  TunnelSpec spec;
  spec.section = section;
  spec.width = width;
  spec.path = bentPath(leg, bend_radius, Vec3::UnitZ());
  return spec;
}

TunnelSpec verticalBendTunnel(double width, double leg, double bend_radius, CrossSection section) {
  TunnelSpec spec;
  spec.section = section;
  spec.width = width;
  spec.path = bentPath(leg, bend_radius, -Vec3::UnitY());
  return spec;
}

TunnelSpec sBendTunnel(double width, double leg, double bend_radius, CrossSection section) {
  TunnelSpec spec;
  spec.section = section;
  spec.width = width;
  std::vector<Vec3> pts;
  pts.push_back(Vec3::Zero());
  pts.push_back(Vec3(leg, 0.0, 0.0));
  // +45 degree yaw arc, then -45 back, producing a lateral offset.
  const int n = 16;
  Vec3 pos = pts.back();
  double heading = 0.0;
  auto arc = [&](double total_turn) {
    for (int i = 1; i <= n; ++i) {
      const double dth = total_turn / n;
      heading += dth;
      const double ds = bend_radius * std::abs(dth);
      pos += ds * Vec3(std::cos(heading), std::sin(heading), 0.0);
      pts.push_back(pos);
    }
  };
  arc(0.25 * M_PI);
  arc(-0.25 * M_PI);
  pts.push_back(pos + leg * Vec3::UnitX());
  spec.path = pts;
  return spec;
}

TunnelSpec byName(const std::string& name, double width, double length) {
  if (name == "straight") return straightTunnel(width, length);
  const double leg = std::max(1.0, length / 3.0);
  const double radius = 1.0;
  if (name == "yaw-bend") return yawBendTunnel(width, leg, radius);
  if (name == "vert-bend") return verticalBendTunnel(width, leg, radius);
  if (name == "s-bend") return sBendTunnel(width, leg, radius);
  throw std::invalid_argument("unknown tunnel preset '" + name +
                              "' (expected straight|yaw-bend|vert-bend|s-bend)");
}

}  // namespace presets

}  // namespace tunnelplan
