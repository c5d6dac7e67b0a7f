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

// Ideal homodyne conditioning on the replicated basis. Projecting k of the
// m replicated modes onto quadrature eigenstates multiplies rho[n,n'] by
// prod phi_n(x) conj(phi_n'(x)); the remaining m-k modes keep their
// coherences. Marginal outcome densities trace the other modes out, which
// on the replicated basis keeps only the diagonal.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/gauss_legendre.hpp"
#include "ntpsd/hermite.hpp"
#include "ntpsd/parallel.hpp"

namespace ntpsd {

/// Densities below this are treated as a vanishing projection.
inline constexpr double kZeroDensity = 1e-300;

struct HomodyneSetting {
  Mode mode = Mode::a;
  Quadrature quadrature = Quadrature::X;
  double outcome = 0.0;  ///< in units where X = (o + o^dag)/sqrt(2)

  double theta() const { return theta_of(quadrature); }
};

enum class QuadRule { gauss_legendre, trapezoid };

struct OutcomeGrid {
  double lo = -1.0;
  double hi = 1.0;
  int points = 161;
  QuadRule rule = QuadRule::gauss_legendre;

  QuadratureRule quadrature() const {
    return rule == QuadRule::gauss_legendre ? gauss_legendre(points, lo, hi) : trapezoid(points, lo, hi);
  }

  /// Symmetric Gauss-Legendre grid for states spanning `dim` Fock levels:
  /// radius sqrt(2 (dim-1)) + 4 and at least 161 nodes, more for wide
  /// states so the oscillations of psi_n stay resolved.
  static OutcomeGrid default_for(int dim, int density_factor = 1) {
    const double radius = std::sqrt(2.0 * std::max(dim - 1, 0)) + 4.0;
    const int points = std::max(161, 2 * dim + 41) * density_factor;
    return {-radius, radius, points, QuadRule::gauss_legendre};
  }

  std::string describe() const {
    return std::string(rule == QuadRule::gauss_legendre ? "gauss_legendre" : "trapezoid") + "[" + std::to_string(lo) +
           "," + std::to_string(hi) + "]x" + std::to_string(points);
  }
};

struct ConditionalState {
  CorrelatedFockDensity state;
  double probability_density = 0.0;  ///< joint density of the outcomes
};

namespace detail {

inline void check_settings(const CorrelatedFockDensity& rho, std::span<const HomodyneSetting> settings) {
  if (settings.empty()) throw InvalidArgument("condition: no homodyne settings");
  if (static_cast<int>(settings.size()) >= rho.m())
    throw InvalidArgument("condition: must leave at least one mode unmeasured");
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const auto& modes = rho.modes();
    if (std::find(modes.begin(), modes.end(), settings[i].mode) == modes.end())
      throw InvalidArgument(std::string("condition: mode ") + mode_char(settings[i].mode) + " is not in the state");
    for (std::size_t j = 0; j < i; ++j)
      if (settings[j].mode == settings[i].mode) throw InvalidArgument("condition: settings must use distinct modes");
  }
}

/// Product of overlaps prod_s <x_s|n> for n = 0..dim-1.
inline Eigen::VectorXcd overlap_product(int dim, std::span<const HomodyneSetting> settings) {
  Eigen::VectorXcd f = Eigen::VectorXcd::Ones(dim);
  for (const auto& s : settings) f = f.cwiseProduct(quadrature_overlaps(dim, s.outcome, s.quadrature));
  return f;
}

}  // namespace detail

/// Joint outcome density of `settings` without building the conditional state.
inline double conditional_density(const CorrelatedFockDensity& rho, std::span<const HomodyneSetting> settings) {
  detail::check_settings(rho, settings);
  const Eigen::VectorXcd f = detail::overlap_product(rho.dim(), settings);
  double p = 0.0;
  for (int n = 0; n < rho.dim(); ++n) p += rho(n, n).real() * std::norm(f[n]);
  return p;
}

/// Projects the listed modes onto their quadrature outcomes. Returns the
/// normalized state of the remaining modes and the outcome density.
inline ConditionalState condition(const CorrelatedFockDensity& rho, std::span<const HomodyneSetting> settings) {
  detail::check_settings(rho, settings);
  const int dim = rho.dim();
  const Eigen::VectorXcd f = detail::overlap_product(dim, settings);
  Eigen::MatrixXcd out = rho.matrix().cwiseProduct(f * f.adjoint());
  const double p = out.trace().real();
  if (!(p > kZeroDensity))
    throw ConditioningError("homodyne projection has vanishing probability density (" + std::to_string(p) + ")");
  out /= p;
  std::vector<Mode> rest;
  for (Mode m : rho.modes()) {
    const bool measured =
        std::any_of(settings.begin(), settings.end(), [m](const HomodyneSetting& s) { return s.mode == m; });
    if (!measured) rest.push_back(m);
  }
  return {CorrelatedFockDensity(std::move(rest), std::move(out)), p};
}

inline ConditionalState condition(const CorrelatedFockDensity& rho, std::initializer_list<HomodyneSetting> settings) {
  return condition(rho, std::span<const HomodyneSetting>(settings.begin(), settings.size()));
}

/// Marginal density P(r) for measuring `quadrature` on `mode`. For m = 1 the
/// full coherence enters; for m >= 2 the other replicas are traced out and
/// only populations contribute.
inline double outcome_density(const CorrelatedFockDensity& rho, Mode mode, Quadrature quadrature, double r) {
  const auto& modes = rho.modes();
  if (std::find(modes.begin(), modes.end(), mode) == modes.end())
    throw InvalidArgument(std::string("outcome_density: mode ") + mode_char(mode) + " is not in the state");
  const Eigen::VectorXcd phi = quadrature_overlaps(rho.dim(), r, quadrature);
  if (rho.m() == 1) return (phi.transpose() * rho.matrix() * phi.conjugate()).value().real();
  double p = 0.0;
  for (int n = 0; n < rho.dim(); ++n) p += rho(n, n).real() * std::norm(phi[n]);
  return p;
}

inline std::vector<double> outcome_density(const CorrelatedFockDensity& rho, Mode mode, Quadrature quadrature,
                                           std::span<const double> rs) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (double r : rs) out.push_back(outcome_density(rho, mode, quadrature, r));
  return out;
}

/// Captured outcome mass of `grid` for a single-mode measurement.
inline double grid_mass(const CorrelatedFockDensity& rho, Mode mode, Quadrature quadrature, const OutcomeGrid& grid) {
  const auto rule = grid.quadrature();
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    mass += rule.weights[i] * outcome_density(rho, mode, quadrature, rule.nodes[i]);
  return mass;
}

using Statistic = std::function<double(const CorrelatedFockDensity&)>;

struct EnsembleAverage {
  double value = 0.0;
  double mass = 0.0;  ///< integral of P(r) on the grid
};

/// Integral of P(r) * statistic(rho_con(r)) over the outcome grid. Grid
/// points run in parallel; the sum is taken in node order.
inline EnsembleAverage ensemble_average_detailed(const CorrelatedFockDensity& rho, Mode mode, Quadrature quadrature,
                                                 const OutcomeGrid& grid, const Statistic& statistic,
                                                 double mass_tol = 1e-6) {
  const auto rule = grid.quadrature();
  std::vector<double> dens(rule.size(), 0.0);
  std::vector<double> stat(rule.size(), 0.0);
  parallel_for(rule.size(), [&](std::size_t i) {
    const std::array<HomodyneSetting, 1> settings{HomodyneSetting{mode, quadrature, rule.nodes[i]}};
    const double p = conditional_density(rho, settings);
    dens[i] = p;
    if (p > kZeroDensity) stat[i] = statistic(condition(rho, settings).state);
  });
  EnsembleAverage out;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.mass += rule.weights[i] * dens[i];
    out.value += rule.weights[i] * dens[i] * stat[i];
  }
  if (out.mass < 1.0 - mass_tol)
    throw GridError("outcome grid " + grid.describe() + " captures only " + std::to_string(out.mass) +
                    " of the outcome probability");
  return out;
}

inline double ensemble_average(const CorrelatedFockDensity& rho, Mode mode, Quadrature quadrature,
                               const OutcomeGrid& grid, const Statistic& statistic) {
  return ensemble_average_detailed(rho, mode, quadrature, grid, statistic).value;
}

}  // namespace ntpsd
