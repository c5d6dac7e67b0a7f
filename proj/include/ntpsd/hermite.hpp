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

// Normalized Hermite functions psi_n(x) = <x|n> for the quadrature
// X = (a + a^dag)/sqrt(2), and their rotated-quadrature versions.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ntpsd {

/// Fills out[n] = psi_n(x) for n = 0..out.size()-1.
///
/// Uses the normalized three-term recurrence
///   psi_{n+1} = x sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}
/// on a rescaled pair, so neither the Gaussian prefactor nor H_n(x) ever
/// under- or overflows. Values that are genuinely below the double range
/// come out as zero.
inline void hermite_functions(double x, std::span<double> out) {
  if (out.empty()) return;
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = std::exp(log_scale);
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    const double next = x * std::sqrt(2.0 / (dn + 1.0)) * cur - std::sqrt(dn / (dn + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += log_rescale;
    }
    out[n + 1] = cur * std::exp(log_scale);
  }
}

inline std::vector<double> hermite_functions(int n_max, double x) {
  std::vector<double> out(static_cast<std::size_t>(n_max + 1));
  hermite_functions(x, out);
  return out;
}

/// Quadrature setting of a homodyne detector: X (theta = 0) or Y (theta = pi/2).
enum class Quadrature { X, Y };

constexpr double theta_of(Quadrature q) { return q == Quadrature::X ? 0.0 : std::numbers::pi / 2.0; }

/// <x_theta|n> = exp(-i n theta) psi_n(x).
inline std::complex<double> quadrature_eigenfunction(int n, double x, double theta) {
  const auto psi = hermite_functions(n, x);
  return std::polar(1.0, -static_cast<double>(n) * theta) * psi.back();
}

/// Vector of <x_theta|n> for n = 0..dim-1. For theta in {0, pi/2} the phase
/// is applied exactly as a power of -i.
inline Eigen::VectorXcd quadrature_overlaps(int dim, double x, Quadrature q) {
  std::vector<double> psi(static_cast<std::size_t>(dim));
  hermite_functions(x, psi);
  Eigen::VectorXcd out(dim);
  static constexpr std::complex<double> kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (int n = 0; n < dim; ++n) {
    const std::complex<double> phase = q == Quadrature::X ? std::complex<double>{1, 0} : kPhase[n % 4];
    out[n] = phase * psi[static_cast<std::size_t>(n)];
  }
  return out;
}

}  // namespace ntpsd
