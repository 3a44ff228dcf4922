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

#include "tunnelplan/centerline.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace tunnelplan {

void CenterlineConfig::validate(double resolution) const {
  if (!(step > 0.0 && step < tunnel_dim)) {
    throw std::invalid_argument("CenterlineConfig: need 0 < step < tunnel_dim");
  }
  if (!(plan_range > step)) {
    throw std::invalid_argument("CenterlineConfig: need plan_range > step");
  }
  if (!(wall_epsilon > 0.0 && wall_epsilon < resolution)) {
    throw std::invalid_argument("CenterlineConfig: need 0 < wall_epsilon < resolution");
  }
  if (!(ascent_tolerance > 0.0) || max_ascent_iterations < 1 || max_descent_iterations < 1) {
    throw std::invalid_argument("CenterlineConfig: bad iteration limits or tolerance");
  }
}

Vec3 gradientAscend(const DistanceField& field, const Vec3& start, const Vec3& dir,
                    const CenterlineConfig& cfg) {
  if (std::abs(dir.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("gradientAscend: dir must be unit length");
  }
  if (!field.gradientSafe(start)) {
    throw std::invalid_argument("gradientAscend: start out of bounds");
  }
  const double res = field.resolution();
  Vec3 q = start;
  double best = field.value(q);
  for (int iter = 0; iter < cfg.max_ascent_iterations; ++iter) {
    const Vec3 g = field.gradient(q);
    const Vec3 g_plane = g - g.dot(dir) * dir;
    if (g_plane.norm() < cfg.ascent_tolerance) break;
    const Vec3 ascent = g_plane.normalized();
    bool accepted = false;
    for (double step = res; step >= 1e-3 * res; step *= 0.5) {
      Vec3 cand = q + step * ascent;
      cand -= (cand - start).dot(dir) * dir;  // stay exactly in the normal plane
      if (!field.gradientSafe(cand)) continue;
      const double f = field.value(cand);
      if (f > best + 1e-12) {
        q = cand;
        best = f;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return q;
}

namespace {

Vec3 octantDirection(const LocalFrame& frame, int octant, std::mt19937_64& rng,
                     bool deterministic) {
  const double sx = (octant & 1) ? -1.0 : 1.0;
  const double sy = (octant & 2) ? -1.0 : 1.0;
  const double sz = (octant & 4) ? -1.0 : 1.0;
  Vec3 local;
  if (deterministic) {
    local = Vec3(sx, sy, sz) / std::sqrt(3.0);
  } else {
    std::uniform_real_distribution<double> mag(0.05, 1.0);
    local = Vec3(sx * mag(rng), sy * mag(rng), sz * mag(rng)).normalized();
  }
  return local.x() * frame.x + local.y() * frame.y + local.z() * frame.z;
}

}  // namespace

std::array<Vec3, 8> sphereSample(const DistanceField& field, const Vec3& p, const Vec3& dir,
                                 std::mt19937_64& rng, const CenterlineConfig& cfg) {
  const double radius = field.value(p);
  if (radius <= cfg.wall_epsilon) {
    throw std::invalid_argument("sphereSample: EDF at p is within wall_epsilon, sphere degenerate");
  }
  const LocalFrame frame = LocalFrame::around(dir);
  std::array<Vec3, 8> out;
  for (int s = 0; s < 8; ++s) {
    out[static_cast<std::size_t>(s)] =
        p + radius * octantDirection(frame, s, rng, cfg.deterministic_octants);
  }
  return out;
}

WallDescent descendToWall(const DistanceField& field, const Vec3& start,
                          const CenterlineConfig& cfg, const Vec3& tie_break_dir) {
  if (!field.interpolable(start)) {
    throw std::invalid_argument("descendToWall: start out of bounds");
  }
  const double res = field.resolution();
  Vec3 x = start;
  for (int iter = 0; iter < cfg.max_descent_iterations; ++iter) {
    const double d = field.value(x);
    if (d <= cfg.wall_epsilon) return {x, true};
    if (!field.gradientSafe(x)) return {x, false};
    Vec3 g = field.gradient(x);
    if (g.norm() < 1e-6) {
      // On the EDF ridge the gradient vanishes; nudge off it.
      const Vec3 nudged = x + 0.1 * res * tie_break_dir.normalized();
      if (field.interpolable(nudged)) {
        x = nudged;
        continue;
      }
      return {x, false};
    }
    const Vec3 descent = -g.normalized();
    bool accepted = false;
    for (double step = std::max(d, 0.25 * res); step >= 0.01 * res; step *= 0.5) {
      const Vec3 cand = x + step * descent;
      if (!field.interpolable(cand)) continue;
      if (field.value(cand) < d - 1e-12) {
        x = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted) return {x, false};
  }
  return {x, field.value(x) <= cfg.wall_epsilon};
}

Vec3 fitPlaneNormal(const std::vector<Vec3>& points, const Vec3& dir) {
  if (points.size() < 3) {
    throw std::invalid_argument("fitPlaneNormal: need at least 3 points");
  }
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::MatrixXd a(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) / sv(0) < 1e-6) {
    throw PlanningError("fitPlaneNormal: degenerate (near-collinear) point set");
  }
  Vec3 normal = svd.matrixV().col(2);
  if (normal.dot(dir) < 0.0) normal = -normal;
  return normal;
}

UniformBSpline parameterizeBspline(const std::vector<Vec3>& waypoints, double v_des, double step,
                                   int degree) {
  if (!(v_des > 0.0)) {
    throw std::invalid_argument("parameterizeBspline: v_des must be > 0");
  }
  if (degree != 3) {
    throw std::invalid_argument("parameterizeBspline: only cubic splines are supported");
  }
  if (waypoints.size() < 2) {
    throw std::invalid_argument("parameterizeBspline: need at least 2 waypoints");
  }
  const double dt = step / v_des;
  const auto k = static_cast<Eigen::Index>(waypoints.size());
  const Eigen::Index n = k + 2;

  // Knot i interpolates waypoint i through (Q_i + 4 Q_{i+1} + Q_{i+2}) / 6;
  // natural (zero second difference) rows close the system at both ends.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 3);
  a(0, 0) = 1.0;
  a(0, 1) = -2.0;
  a(0, 2) = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    a(i + 1, i) = 1.0 / 6.0;
    a(i + 1, i + 1) = 4.0 / 6.0;
    a(i + 1, i + 2) = 1.0 / 6.0;
    b.row(i + 1) = waypoints[static_cast<std::size_t>(i)].transpose();
  }
  a(n - 1, n - 3) = 1.0;
  a(n - 1, n - 2) = -2.0;
  a(n - 1, n - 1) = 1.0;

  const Eigen::MatrixXd q = a.partialPivLu().solve(b);
  std::vector<Vec3> controls(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) controls[static_cast<std::size_t>(i)] = q.row(i).transpose();
  return UniformBSpline(std::move(controls), 3, dt);
}

Centerline extractCenterline(const DistanceField& field, const Vec3& seed,
                             const Vec3& seed_velocity, const CenterlineConfig& cfg,
                             double v_des) {
  cfg.validate(field.resolution());
  if (!(v_des > 0.0)) {
    throw std::invalid_argument("extractCenterline: v_des must be > 0");
  }
  if (!field.gradientSafe(seed)) {
    throw std::invalid_argument("extractCenterline: seed outside the usable field");
  }
  if (!(field.value(seed) > 0.0)) {
    throw std::invalid_argument("extractCenterline: seed not in free space");
  }
  if (!(seed_velocity.norm() > 0.0)) {
    throw std::invalid_argument("extractCenterline: seed velocity must be nonzero");
  }

  const double exit_threshold = cfg.exitThreshold(field.resolution());
  std::mt19937_64 rng(cfg.rng_seed);
  Vec3 dir = seed_velocity.normalized();

  std::vector<Vec3> waypoints;
  std::vector<double> edf;
  auto push = [&](const Vec3& p) {
    waypoints.push_back(p);
    edf.push_back(field.value(p));
  };

  const Vec3 p0 = cfg.center_seed ? gradientAscend(field, seed, dir, cfg) : seed;
  push(p0);

  CenterlineStop stop = CenterlineStop::kRangeCapped;
  double planned = 0.0;
  bool probe_valid = false;
  Vec3 probe = p0;
  {
    const Vec3 cand = p0 + cfg.step * dir;
    if (field.gradientSafe(cand)) {
      probe = gradientAscend(field, cand, dir);
      planned = (probe - p0).norm();
      probe_valid = true;
    } else {
      stop = CenterlineStop::kTruncated;
    }
  }

  int consecutive_failures = 0;
  while (probe_valid) {
    if (field.value(probe) > exit_threshold) {
      // Walked past an open end; keep the probe so the line reaches outside.
      push(probe);
      stop = CenterlineStop::kExitedTunnel;
      break;
    }
    if (planned > cfg.plan_range) {
      stop = CenterlineStop::kRangeCapped;
      break;
    }
    push(probe);

    // Probe the walls in all octants and refit the forward direction.
    const LocalFrame frame = LocalFrame::around(dir);
    std::vector<Vec3> wall_points;
    wall_points.reserve(8);
    const double radius = field.value(probe);
    if (radius > cfg.wall_epsilon) {
      for (int s = 0; s < 8; ++s) {
        bool converged = false;
        for (int attempt = 0; attempt < 2 && !converged; ++attempt) {
          const Vec3 w = octantDirection(frame, s, rng, cfg.deterministic_octants);
          const Vec3 q = probe + radius * w;
          if (!field.interpolable(q)) continue;
          const WallDescent d = descendToWall(field, q, cfg, w);
          if (d.converged) {
            wall_points.push_back(d.point);
            converged = true;
          }
        }
      }
    }
    bool refit_ok = false;
    if (wall_points.size() >= 6) {
      try {
        dir = fitPlaneNormal(wall_points, dir);
        refit_ok = true;
      } catch (const PlanningError&) {
      }
    }
    if (refit_ok) {
      consecutive_failures = 0;
    } else if (++consecutive_failures >= 2) {
      throw PlanningError("extractCenterline: wall probing failed on two consecutive steps");
    }

    const Vec3 cand = probe + cfg.step * dir;
    if (!field.gradientSafe(cand)) {
      stop = CenterlineStop::kTruncated;
      break;
    }
    const Vec3 next = gradientAscend(field, cand, dir);
    planned += (next - probe).norm();
    probe = next;
  }

  if (waypoints.size() < 2) {
    throw PlanningError("extractCenterline: walk produced fewer than 2 waypoints");
  }
  UniformBSpline spline = parameterizeBspline(waypoints, v_des, cfg.step);
  return Centerline{std::move(waypoints), std::move(edf), stop, std::move(spline)};
}

std::string waypointsToCsv(const Centerline& centerline) {
  std::ostringstream out;
  out.precision(12);
  out << "index,x,y,z,edf\n";
  for (std::size_t i = 0; i < centerline.waypoints.size(); ++i) {
    const Vec3& w = centerline.waypoints[i];
    out << i << "," << w.x() << "," << w.y() << "," << w.z() << ","
        << centerline.waypoint_edf[i] << "\n";
  }
  return out.str();
}

}  // namespace tunnelplan
