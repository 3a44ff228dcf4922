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
#include <stdexcept>
#include <vector>

namespace tunnelplan::detail {

/// Banded linear system with kl sub- and ku super-diagonals, factorized by
/// LU with partial pivoting (band storage keeps kl extra superdiagonals for
/// pivot fill-in, LAPACK style).
class BandedSystem {
 public:
  BandedSystem(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ldab_) * static_cast<std::size_t>(n), 0.0), piv_(n, 0) {}

  double& at(int i, int j) {
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
               static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)];
  }
  double at(int i, int j) const {
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
               static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)];
  }

  void factorize() {
    const int band_hi = ku_ + kl_;  // widest reachable superdiagonal after pivoting
    for (int j = 0; j < n_; ++j) {
      int piv = j;
      double best = std::abs(at(j, j));
      for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) {
        const double v = std::abs(at(i, j));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best == 0.0) {
        throw std::runtime_error("BandedSystem: singular matrix");
      }
      piv_[static_cast<std::size_t>(j)] = piv;
      if (piv != j) {
        for (int c = j; c <= std::min(n_ - 1, j + band_hi); ++c) {
          std::swap(at(j, c), at(piv, c));
        }
      }
      const double d = at(j, j);
      for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) {
        const double m = at(i, j) / d;
        at(i, j) = m;
        if (m != 0.0) {
          for (int c = j + 1; c <= std::min(n_ - 1, j + band_hi); ++c) {
            at(i, c) -= m * at(j, c);
          }
        }
      }
    }
    factorized_ = true;
  }

  /// Solves A x = b in place for each column of b.
  void solveInPlace(Eigen::MatrixXd& b) const {
    if (!factorized_) {
      throw std::logic_error("BandedSystem: factorize() before solve");
    }
    const int band_hi = ku_ + kl_;
    for (int j = 0; j < n_; ++j) {
      const int piv = piv_[static_cast<std::size_t>(j)];
      if (piv != j) b.row(j).swap(b.row(piv));
      for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) {
        b.row(i) -= at(i, j) * b.row(j);
      }
    }
    for (int j = n_ - 1; j >= 0; --j) {
      for (int c = j + 1; c <= std::min(n_ - 1, j + band_hi); ++c) {
        b.row(j) -= at(j, c) * b.row(c);
      }
      b.row(j) /= at(j, j);
    }
  }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
  std::vector<int> piv_;
  bool factorized_ = false;
};

}  // namespace tunnelplan::detail
