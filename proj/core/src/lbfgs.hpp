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
#include <cmath>
#include <deque>
#include <vector>

namespace tunnelplan::detail {

struct LbfgsOptions {
  int memory = 8;
  int max_iterations = 200;
  double grad_inf_tolerance = 1e-5;
  double relative_decrease_tolerance = 1e-8;
  double armijo_c1 = 1e-4;
  double min_step = 1e-20;
};

enum class LbfgsStatus { kGradientConverged, kSmallDecrease, kMaxIterations, kDiverged };

struct LbfgsTracePoint {
  int iteration;
  double cost;
  double grad_norm;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  LbfgsStatus status = LbfgsStatus::kMaxIterations;
  int iterations = 0;
  std::vector<LbfgsTracePoint> trace;
};

/// Limited-memory quasi-Newton minimization with Armijo backtracking.
/// Objective signature: double(const Eigen::VectorXd& x, Eigen::VectorXd& grad).
/// Accepted steps never increase the cost; non-finite values abort with the
/// last finite iterate in the result.
template <typename Objective>
LbfgsResult minimizeLbfgs(Objective&& objective, Eigen::VectorXd x0, const LbfgsOptions& opt) {
  LbfgsResult res;
  const auto n = x0.size();
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(n), g_new(n), x_new(n), d(n), q(n);

  double f = objective(x, g);
  res.trace.push_back({0, f, g.lpNorm<Eigen::Infinity>()});
  if (!std::isfinite(f) || !g.allFinite()) {
    res.x = x;
    res.cost = f;
    res.status = LbfgsStatus::kDiverged;
    return res;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    res.iterations = iter;
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_inf_tolerance) {
      res.status = LbfgsStatus::kGradientConverged;
      break;
    }

    // Two-loop recursion for d = -H g.
    q = g;
    const auto m = static_cast<int>(s_hist.size());
    std::vector<double> alpha(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] =
          rho_hist[static_cast<std::size_t>(i)] * s_hist[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
    }
    if (m > 0) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (int i = 0; i < m; ++i) {
      const double beta =
          rho_hist[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)].dot(q);
      q += (alpha[static_cast<std::size_t>(i)] - beta) * s_hist[static_cast<std::size_t>(i)];
    }
    d = -q;
    double gd = g.dot(d);
    if (!(gd < 0.0)) {
      // Not a descent direction; fall back to steepest descent.
      d = -g;
      gd = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = (m == 0) ? 1.0 / std::max(d.norm(), 1e-12) : 1.0;
    bool accepted = false;
    bool saw_nonfinite = false;
    double f_new = f;
    while (step >= opt.min_step) {
      x_new = x + step * d;
      f_new = objective(x_new, g_new);
      if (!std::isfinite(f_new) || !g_new.allFinite()) {
        saw_nonfinite = true;
        step *= 0.5;
        continue;
      }
      if (f_new <= f + opt.armijo_c1 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.status = saw_nonfinite ? LbfgsStatus::kDiverged : LbfgsStatus::kSmallDecrease;
      break;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double ys = y.dot(s);
    if (ys > 1e-12 * y.norm() * s.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / ys);
      if (static_cast<int>(s_hist.size()) > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double decrease = (f - f_new) / std::max(std::abs(f), 1e-300);
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    res.trace.push_back({iter, f, g.lpNorm<Eigen::Infinity>()});
    if (decrease < opt.relative_decrease_tolerance) {
      res.status = LbfgsStatus::kSmallDecrease;
      break;
    }
  }

  res.x = std::move(x);
  res.cost = f;
  return res;
}

}  // namespace tunnelplan::detail
