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

// Moments of the collective lowering operator A on the replicated basis.
// On |n>^{(x)m} the product of one annihilator per replica acts as
// A|n> = n^{m/2}|n-1>; the squared single-mode amplitude a^2 acts as
// a^2|n> = sqrt(n(n-1))|n-2>. Matrix elements are those of the untruncated
// operators, so moments are exact for a density supported below dim.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"

namespace ntpsd {

enum class LadderKind {
  product,  ///< A = product of one annihilator per replicated mode
  squared,  ///< A = a^2 (m = 1 only)
};

struct Ladder {
  int step = 1;
  int m = 1;
  LadderKind kind = LadderKind::product;

  /// <n - step| A |n>, zero when n < step.
  double element(int n) const {
    if (n < step) return 0.0;
    if (kind == LadderKind::squared) return std::sqrt(static_cast<double>(n) * (n - 1));
    return std::pow(static_cast<double>(n), 0.5 * m);
  }
};

inline Ladder ladder_for(const CorrelatedFockDensity& rho, LadderKind kind) {
  if (kind == LadderKind::squared) {
    if (rho.m() != 1) throw InvalidArgument("squared ladder needs a single-mode density");
    return {2, 1, kind};
  }
  return {1, rho.m(), kind};
}

/// <(A^dag)^k A^l>.
inline cplx ladder_moment(const CorrelatedFockDensity& rho, int k, int l, LadderKind kind = LadderKind::product) {
  if (k < 0 || l < 0) throw InvalidArgument("ladder_moment: powers must be nonnegative");
  const Ladder A = ladder_for(rho, kind);
  const int d = rho.dim();
  cplx sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const int r = i - A.step * l;
    const int j = r + A.step * k;
    if (r < 0 || j < 0 || j >= d) continue;
    double amp = 1.0;
    for (int q = 0; q < l; ++q) amp *= A.element(i - A.step * q);
    for (int q = 1; q <= k; ++q) amp *= A.element(r + A.step * q);
    sum += rho(i, j) * amp;
  }
  return sum;
}

/// <A A^dag>, the one anti-normally ordered moment the variances need.
inline double ladder_anti_normal(const CorrelatedFockDensity& rho, LadderKind kind = LadderKind::product) {
  const Ladder A = ladder_for(rho, kind);
  double sum = 0.0;
  for (int n = 0; n < rho.dim(); ++n) {
    const double g = A.element(n + A.step);
    sum += rho(n, n).real() * g * g;
  }
  return sum;
}

enum class QuadratureKind {
  bc_pair,    ///< X_bc = (bc + b^dag c^dag)/2 on an m = 2 density
  a_squared,  ///< X_a2 = (a^2 + a^dag^2)/2 on an m = 1 density
};

inline std::string to_string(QuadratureKind k) { return k == QuadratureKind::bc_pair ? "bc_pair" : "a_squared"; }

struct QuadratureStats {
  double mean = 0.0;
  double variance = 0.0;
  double commutator = 0.0;  ///< |<[X, Y]>| = (<A A^dag> - <A^dag A>)/2
};

/// X = (A + A^dag)/2, Y = (A - A^dag)/(2i).
inline QuadratureStats quadrature_stats(const CorrelatedFockDensity& rho, Quadrature which, QuadratureKind kind) {
  const int need = kind == QuadratureKind::bc_pair ? 2 : 1;
  if (rho.m() != need)
    throw InvalidArgument("quadrature_stats: " + to_string(kind) + " needs m=" + std::to_string(need) + ", got m=" +
                          std::to_string(rho.m()));
  const LadderKind lk = kind == QuadratureKind::bc_pair ? LadderKind::product : LadderKind::squared;
  const cplx a1 = ladder_moment(rho, 0, 1, lk);
  const cplx a2 = ladder_moment(rho, 0, 2, lk);
  const double normal = ladder_moment(rho, 1, 1, lk).real();
  const double anti = ladder_anti_normal(rho, lk);
  QuadratureStats s;
  const double sign = which == Quadrature::X ? 1.0 : -1.0;
  s.mean = which == Quadrature::X ? a1.real() : a1.imag();
  const double second = 0.25 * (sign * 2.0 * a2.real() + normal + anti);
  s.variance = second - s.mean * s.mean;
  s.commutator = 0.5 * std::abs(anti - normal);
  return s;
}

/// Reduced density of the listed modes. On the replicated basis tracing out
/// any replica removes all coherences.
inline CorrelatedFockDensity trace_out(const CorrelatedFockDensity& rho, const std::vector<Mode>& keep) {
  if (keep.empty() || keep.size() >= rho.modes().size())
    throw InvalidArgument("trace_out: keep a nonempty proper subset of the modes");
  for (Mode k : keep) {
    bool found = false;
    for (Mode m : rho.modes()) found = found || m == k;
    if (!found) throw InvalidArgument(std::string("trace_out: mode ") + mode_char(k) + " is not in the state");
  }
  return CorrelatedFockDensity::diagonal(keep, rho.populations());
}

}  // namespace ntpsd
