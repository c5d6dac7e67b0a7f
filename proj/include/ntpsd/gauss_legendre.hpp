// Copyright 2026 The ntpsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ntpsd/error.hpp"

namespace ntpsd {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [lo, hi], Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  if (!(hi > lo)) throw InvalidArgument("gauss_legendre: empty interval");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // recompute derivative at the converged root
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = mid - half * z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

/// Composite trapezoid rule with n >= 2 equally spaced nodes on [lo, hi].
inline QuadratureRule trapezoid(int n, double lo, double hi) {
  if (n < 2) throw InvalidArgument("trapezoid: need at least two nodes");
  QuadratureRule rule;
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(lo + h * i);
    rule.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
  }
  return rule;
}

}  // namespace ntpsd
