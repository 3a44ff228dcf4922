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

#include "tunnelplan/trajectory_optimizer.hpp"

#include <cmath>
#include <sstream>

#include "lbfgs.hpp"

namespace tunnelplan {

void CostWeights::validate() const {
  if (smoothness < 0.0 || waypoints < 0.0 || speed < 0.0 || initial < 0.0 || terminal < 0.0) {
    throw std::invalid_argument("CostWeights: weights must be non-negative");
  }
}

double costSmoothness(const std::vector<Vec3>& controls, ControlGradient* grad) {
  const auto n = controls.size();
  if (n < 4) {
    throw std::invalid_argument("costSmoothness: need at least 4 control points");
  }
  if (grad) grad->assign(n, Vec3::Zero());
  double cost = 0.0;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    const Vec3 third =
        -controls[i] + 3.0 * controls[i + 1] - 3.0 * controls[i + 2] + controls[i + 3];
    cost += third.squaredNorm();
    if (grad) {
      const Vec3 g = 2.0 * third;
      (*grad)[i] -= g;
      (*grad)[i + 1] += 3.0 * g;
      (*grad)[i + 2] -= 3.0 * g;
      (*grad)[i + 3] += g;
    }
  }
  return cost;
}

double costWaypoints(const std::vector<Vec3>& controls, const std::vector<Vec3>& waypoints,
                     ControlGradient* grad) {
  const auto n = controls.size();
  if (n < 4) {
    throw std::invalid_argument("costWaypoints: need at least 4 control points");
  }
  if (waypoints.size() != n - 2) {
    std::ostringstream msg;
    msg << "costWaypoints: waypoint count " << waypoints.size() << " does not match knot count "
        << n - 2;
    throw std::invalid_argument(msg.str());
  }
  if (grad) grad->assign(n, Vec3::Zero());
  double cost = 0.0;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const Vec3 knot = (controls[i] + 4.0 * controls[i + 1] + controls[i + 2]) / 6.0;
    const Vec3 r = knot - waypoints[i];
    cost += r.squaredNorm();
    if (grad) {
      const Vec3 g = 2.0 * r;
      (*grad)[i] += g / 6.0;
      (*grad)[i + 1] += 4.0 * g / 6.0;
      (*grad)[i + 2] += g / 6.0;
    }
  }
  return cost;
}

double costSpeed(const std::vector<Vec3>& controls, double dt, double v_des,
                 ControlGradient* grad) {
  if (controls.size() < 2) {
    throw std::invalid_argument("costSpeed: need at least 2 control points");
  }
  if (!(dt > 0.0) || !(v_des > 0.0)) {
    throw std::invalid_argument("costSpeed: dt and v_des must be > 0");
  }
  if (grad) grad->assign(controls.size(), Vec3::Zero());
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < controls.size(); ++i) {
    const Vec3 v = (controls[i + 1] - controls[i]) / dt;
    const double speed = v.norm();
    const double err = speed - v_des;
    cost += err * err;
    if (grad && speed > 1e-12) {
      const Vec3 g = (2.0 * err / (speed * dt)) * v;
      (*grad)[i + 1] += g;
      (*grad)[i] -= g;
    }
  }
  return cost;
}

namespace {

// Knot derivative stencils of a cubic uniform B-spline over 3 controls.
void knotStencil(int order, double dt, double coeff[3]) {
  switch (order) {
    case 0:
      coeff[0] = 1.0 / 6.0;
      coeff[1] = 4.0 / 6.0;
      coeff[2] = 1.0 / 6.0;
      break;
    case 1:
      coeff[0] = -1.0 / (2.0 * dt);
      coeff[1] = 0.0;
      coeff[2] = 1.0 / (2.0 * dt);
      break;
    default:
      coeff[0] = 1.0 / (dt * dt);
      coeff[1] = -2.0 / (dt * dt);
      coeff[2] = 1.0 / (dt * dt);
      break;
  }
}

const Vec3& boundaryDeriv(const BoundaryState& s, int order) {
  switch (order) {
    case 0:
      return s.position;
    case 1:
      return s.velocity;
    default:
      return s.acceleration;
  }
}

}  // namespace

double costBoundary(const std::vector<Vec3>& controls, double dt, const BoundaryState& initial,
                    const BoundaryState& terminal, int k, ControlGradient* grad) {
  const auto n = controls.size();
  if (n < 4) {
    throw std::invalid_argument("costBoundary: need at least 4 control points");
  }
  if (k < 0 || k > 2) {
    throw std::invalid_argument("costBoundary: derivative order k must be in [0, 2]");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("costBoundary: dt must be > 0");
  }
  if (grad) grad->assign(n, Vec3::Zero());
  double cost = 0.0;
  for (int end = 0; end < 2; ++end) {
    const std::size_t base = (end == 0) ? 0 : n - 3;
    const BoundaryState& target = (end == 0) ? initial : terminal;
    for (int o = 0; o <= k; ++o) {
      double c[3];
      knotStencil(o, dt, c);
      const Vec3 value =
          c[0] * controls[base] + c[1] * controls[base + 1] + c[2] * controls[base + 2];
      const Vec3 r = value - boundaryDeriv(target, o);
      cost += r.squaredNorm();
      if (grad) {
        const Vec3 g = 2.0 * r;
        for (int j = 0; j < 3; ++j) {
          (*grad)[base + static_cast<std::size_t>(j)] += c[j] * g;
        }
      }
    }
  }
  return cost;
}

double costTotal(const std::vector<Vec3>& controls, double dt, const std::vector<Vec3>& waypoints,
                 const BoundaryState& initial, const BoundaryState& terminal,
                 const CostWeights& weights, double v_des, int boundary_order,
                 ControlGradient* grad) {
  weights.validate();
  ControlGradient term_grad;
  ControlGradient* tg = grad ? &term_grad : nullptr;
  if (grad) grad->assign(controls.size(), Vec3::Zero());

  auto accumulate = [&](double weight, double value) {
    if (grad && weight != 0.0) {
      for (std::size_t i = 0; i < controls.size(); ++i) (*grad)[i] += weight * term_grad[i];
    }
    return weight * value;
  };

  double cost = 0.0;
  cost += accumulate(weights.smoothness, costSmoothness(controls, tg));
  cost += accumulate(weights.waypoints, costWaypoints(controls, waypoints, tg));
  cost += accumulate(weights.speed, costSpeed(controls, dt, v_des, tg));

  // Split the boundary term so the initial and terminal ends carry their own
  // weights.
  ControlGradient bg;
  ControlGradient* bgp = grad ? &bg : nullptr;
  const auto n = controls.size();
  for (int end = 0; end < 2; ++end) {
    const double w = (end == 0) ? weights.initial : weights.terminal;
    if (w == 0.0 && grad == nullptr) continue;
    const std::size_t base = (end == 0) ? 0 : n - 3;
    const BoundaryState& target = (end == 0) ? initial : terminal;
    double part = 0.0;
    if (bgp) bgp->assign(n, Vec3::Zero());
    for (int o = 0; o <= boundary_order; ++o) {
      double c[3];
      knotStencil(o, dt, c);
      const Vec3 value =
          c[0] * controls[base] + c[1] * controls[base + 1] + c[2] * controls[base + 2];
      const Vec3 r = value - boundaryDeriv(target, o);
      part += r.squaredNorm();
      if (bgp) {
        const Vec3 g = 2.0 * r;
        for (int j = 0; j < 3; ++j) (*bgp)[base + static_cast<std::size_t>(j)] += c[j] * g;
      }
    }
    cost += w * part;
    if (grad) {
      for (std::size_t i = 0; i < n; ++i) (*grad)[i] += w * bg[i];
    }
  }
  return cost;
}

OptimizeResult optimize(const UniformBSpline& init, const std::vector<Vec3>& waypoints,
                        const BoundaryState& initial, const BoundaryState& terminal,
                        const OptimizeOptions& options) {
  options.weights.validate();
  if (init.degree() != 3) {
    throw std::invalid_argument("optimize: only cubic splines are supported");
  }
  const auto n = init.numControls();
  if (waypoints.size() != n - 2) {
    throw std::invalid_argument("optimize: waypoints must be resampled to numControls - 2");
  }

  const double dt = init.dt();
  std::vector<Vec3> work(n);
  auto unflatten = [&](const Eigen::VectorXd& x) {
    for (std::size_t i = 0; i < n; ++i) work[i] = x.segment<3>(static_cast<Eigen::Index>(3 * i));
  };

  ControlGradient grad_ctl;
  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    unflatten(x);
    const double f = costTotal(work, dt, waypoints, initial, terminal, options.weights,
                               options.v_des, options.boundary_order, &grad_ctl);
    grad.resize(x.size());
    for (std::size_t i = 0; i < n; ++i) {
      grad.segment<3>(static_cast<Eigen::Index>(3 * i)) = grad_ctl[i];
    }
    return f;
  };

  Eigen::VectorXd x0(static_cast<Eigen::Index>(3 * n));
  for (std::size_t i = 0; i < n; ++i) {
    x0.segment<3>(static_cast<Eigen::Index>(3 * i)) = init.controls()[i];
  }

  detail::LbfgsOptions lopt;
  lopt.max_iterations = options.max_iterations;
  lopt.grad_inf_tolerance = options.grad_inf_tolerance;
  lopt.relative_decrease_tolerance = options.relative_decrease_tolerance;
  const detail::LbfgsResult lres = detail::minimizeLbfgs(objective, std::move(x0), lopt);

  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lres.x.segment<3>(static_cast<Eigen::Index>(3 * i));
  }

  OptimizeResult result{UniformBSpline(std::move(out), 3, dt, init.tMin()),
                        OptimizeStatus::kConverged,
                        lres.trace.front().cost,
                        lres.cost,
                        lres.iterations,
                        {},
                        ""};
  result.trace.reserve(lres.trace.size());
  for (const auto& t : lres.trace) {
    result.trace.push_back({t.iteration, t.cost, t.grad_norm});
  }
  switch (lres.status) {
    case detail::LbfgsStatus::kGradientConverged:
      result.status = OptimizeStatus::kConverged;
      break;
    case detail::LbfgsStatus::kSmallDecrease:
      result.status = OptimizeStatus::kSmallDecrease;
      break;
    case detail::LbfgsStatus::kMaxIterations:
      result.status = OptimizeStatus::kMaxIterations;
      break;
    case detail::LbfgsStatus::kDiverged:
      result.status = OptimizeStatus::kDiverged;
      result.diagnostic = "non-finite cost or gradient during line search";
      break;
  }
  return result;
}

std::string traceToCsv(const std::vector<OptimizeTracePoint>& trace) {
  std::ostringstream out;
  out.precision(12);
  out << "iteration,cost,grad_norm\n";
  for (const auto& t : trace) {
    out << t.iteration << "," << t.cost << "," << t.grad_norm << "\n";
  }
  return out.str();
}

}  // namespace tunnelplan
