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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"

namespace ntpsd {

/// Tr[rho^2].
inline double purity(const CorrelatedFockDensity& rho) { return rho.matrix().cwiseAbs2().sum(); }

/// sqrt(<psi|rho|psi>) for a pure target; the shorter vector is zero-padded.
inline double fidelity(const CorrelatedFockDensity& rho, const PureFockVector& target) {
  if (rho.m() != target.m) throw InvalidArgument("fidelity: target and state act on different mode counts");
  const int d = std::min(rho.dim(), target.dim());
  const Eigen::VectorXcd psi = target.amps.head(d);
  const double overlap = (psi.adjoint() * rho.matrix().topLeftCorner(d, d) * psi).value().real();
  return std::sqrt(std::max(overlap, 0.0));
}

namespace detail {

// Eigenvalues below roundoff of the largest are set to zero before the
// square root; otherwise each null direction contributes ~sqrt(eps).
inline Eigen::VectorXd clipped_sqrt(const Eigen::VectorXd& ev) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  return ev.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
}

inline Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd ev = clipped_sqrt(es.eigenvalues());
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Tr sqrt(sqrt(sigma) rho sqrt(sigma)) for two densities on the same modes.
inline double uhlmann_fidelity(const CorrelatedFockDensity& rho, const CorrelatedFockDensity& sigma) {
  if (rho.m() != sigma.m()) throw InvalidArgument("uhlmann_fidelity: mode counts differ");
  const int d = std::max(rho.dim(), sigma.dim());
  const Eigen::MatrixXcd r = rho.padded(d).matrix();
  const Eigen::MatrixXcd s = detail::psd_sqrt(sigma.padded(d).matrix());
  const Eigen::MatrixXcd inner = s * r * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  return detail::clipped_sqrt(es.eigenvalues()).sum();
}

/// Fidelity against the even cat of real amplitude alpha.
inline double cat_fidelity(const CorrelatedFockDensity& rho, double alpha) {
  const int cutoff = std::max(rho.dim() - 1, cat_cutoff(alpha));
  return fidelity(rho, cat_state(alpha, cutoff));
}

struct CatOptimum {
  double fidelity = 0.0;
  double alpha = 0.0;
};

/// Maximizes cat_fidelity over real alpha in [lo, hi]: a uniform scan of
/// `scan_points` nodes locates the best cell, golden-section search refines
/// it to `tol` in alpha. A maximum on either end of the bracket is an error.
inline CatOptimum optimal_cat_fidelity(const CorrelatedFockDensity& rho, double lo = 0.01, double hi = 6.0,
                                       double tol = 1e-3, int scan_points = 121) {
  if (rho.m() != 1) throw InvalidArgument("optimal_cat_fidelity: single-mode density required");
  if (!(hi > lo) || lo < 0.0 || scan_points < 3) throw InvalidArgument("optimal_cat_fidelity: bad bracket");
  const double h = (hi - lo) / (scan_points - 1);
  int best = 0;
  double best_f = -1.0;
  for (int i = 0; i < scan_points; ++i) {
    const double f = cat_fidelity(rho, lo + i * h);
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  if (best == 0 || best == scan_points - 1)
    throw BoundaryError("optimal cat amplitude lies on the bracket edge alpha=" + std::to_string(lo + best * h));

  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo + (best - 1) * h;
  double b = lo + (best + 1) * h;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = cat_fidelity(rho, x1);
  double f2 = cat_fidelity(rho, x2);
  while (b - a > tol) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = cat_fidelity(rho, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = cat_fidelity(rho, x2);
    }
  }
  const double alpha = 0.5 * (a + b);
  return {cat_fidelity(rho, alpha), alpha};
}

struct Eigenpair {
  double eigenvalue = 0.0;
  PureFockVector vector;
};

/// Largest-eigenvalue eigenvector, phased so its first non-negligible
/// component is real and positive.
inline Eigenpair dominant_eigenvector(const CorrelatedFockDensity& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  const Eigen::Index top = rho.dim() - 1;
  Eigen::VectorXcd v = es.eigenvectors().col(top);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-8) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      break;
    }
  return {es.eigenvalues()[top], PureFockVector{rho.m(), v}};
}

}  // namespace ntpsd
