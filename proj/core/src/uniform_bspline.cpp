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

#include "tunnelplan/uniform_bspline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tunnelplan {

KnotState evalKnotCubic(const Vec3& q0, const Vec3& q1, const Vec3& q2, double dt) {
  KnotState s;
  s.position = (q0 + 4.0 * q1 + q2) / 6.0;
  s.velocity = (q2 - q0) / (2.0 * dt);
  s.acceleration = (q0 - 2.0 * q1 + q2) / (dt * dt);
  return s;
}

UniformBSpline::UniformBSpline(std::vector<Vec3> controls, int degree, double dt, double t0)
    : controls_(std::move(controls)), degree_(degree), dt_(dt), t0_(t0) {
  if (degree_ < 3) {
    throw std::invalid_argument("UniformBSpline: degree must be >= 3");
  }
  if (!(dt_ > 0.0)) {
    throw std::invalid_argument("UniformBSpline: dt must be > 0");
  }
  if (controls_.size() < static_cast<std::size_t>(degree_ + 1)) {
    std::ostringstream msg;
    msg << "UniformBSpline: need at least degree+1 = " << degree_ + 1 << " controls, got "
        << controls_.size();
    throw std::invalid_argument(msg.str());
  }
}

Vec3 UniformBSpline::eval(double t, int deriv) const {
  if (deriv < 0 || deriv > degree_) {
    throw std::invalid_argument("UniformBSpline::eval: derivative order outside [0, degree]");
  }
  constexpr double kDomainSlack = 1e-9;
  if (t < tMin() - kDomainSlack || t > tMax() + kDomainSlack) {
    std::ostringstream msg;
    msg << "UniformBSpline::eval: t = " << t << " outside domain [" << tMin() << ", " << tMax()
        << "]";
    throw std::invalid_argument(msg.str());
  }
  t = std::clamp(t, tMin(), tMax());

  // Derivative of a uniform B-spline: difference the control points (each
  // difference divides by dt) and drop the degree by one.
  std::vector<Vec3> pts(controls_);
  int q = degree_;
  for (int r = 0; r < deriv; ++r) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      pts[i] = (pts[i + 1] - pts[i]) / dt_;
    }
    pts.pop_back();
    --q;
  }

  if (q == 0) {
    // Piecewise constant; pick the active span.
    const auto m = static_cast<std::ptrdiff_t>(pts.size());
    auto span = static_cast<std::ptrdiff_t>(std::floor((t - t0_) / dt_));
    span = std::clamp<std::ptrdiff_t>(span, 0, m - 1);
    return pts[static_cast<std::size_t>(span)];
  }

  // De Boor on uniform knots u_k = t0 + (k - q) dt for the reduced spline.
  const auto m = static_cast<int>(pts.size());
  int k = q + static_cast<int>(std::floor((t - t0_) / dt_));
  k = std::clamp(k, q, m - 1);
  auto knot = [&](int idx) { return t0_ + (idx - q) * dt_; };

  std::vector<Vec3> d(static_cast<std::size_t>(q) + 1);
  for (int j = 0; j <= q; ++j) d[static_cast<std::size_t>(j)] = pts[static_cast<std::size_t>(k - q + j)];
  for (int r = 1; r <= q; ++r) {
    for (int j = q; j >= r; --j) {
      const double lo = knot(j + k - q);
      const double hi = knot(j + 1 + k - r);
      const double alpha = (t - lo) / (hi - lo);
      d[static_cast<std::size_t>(j)] =
          (1.0 - alpha) * d[static_cast<std::size_t>(j - 1)] + alpha * d[static_cast<std::size_t>(j)];
    }
  }
  return d[static_cast<std::size_t>(q)];
}

BoundaryState UniformBSpline::stateAt(double t) const {
  BoundaryState s;
  s.position = eval(t, 0);
  s.velocity = eval(t, 1);
  s.acceleration = eval(t, 2);
  return s;
}

}  // namespace tunnelplan
