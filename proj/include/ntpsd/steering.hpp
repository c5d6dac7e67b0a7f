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

// Nonlinear EPR steering with inferred higher-order variances, and
// conditional higher-order squeezing.
//
// a -> bc: mode a is measured in X or Y; the inferred variances of
// X_bc (resp. Y_bc) are averaged over the outcome distribution.
// b -> a: mode c is first projected onto x_c = 0, then mode b is measured in
// X or Y and the squared-amplitude quadratures of mode a are averaged. The
// alternative reading (X variance from x_c, Y variance from y_c, both
// averaged over x_b) is selectable with BToAVariant::y_c.

#include <cmath>
#include <optional>
#include <string>

#include "ntpsd/conditioning.hpp"
#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/moments.hpp"

namespace ntpsd {

enum class SteeringDirection { a_to_bc, b_to_a };

inline std::string to_string(SteeringDirection d) { return d == SteeringDirection::a_to_bc ? "a->bc" : "b->a"; }

struct SteeringReport {
  double S = 0.0;
  double var_X_inferred = 0.0;
  double var_Y_inferred = 0.0;
  double commutator_expectation = 0.0;  ///< ensemble average of |<[X, Y]>| over the X outcomes
  double commutator_unconditional = 0.0;
  OutcomeGrid grid;
  SteeringDirection direction = SteeringDirection::a_to_bc;

  double recomputed_S() const { return 2.0 * std::sqrt(var_X_inferred * var_Y_inferred) / commutator_expectation; }
  double normalized_X() const { return var_X_inferred / commutator_expectation; }
  double normalized_Y() const { return var_Y_inferred / commutator_expectation; }
  bool steerable() const { return S < 1.0; }
};

namespace detail {

struct InferredPair {
  double var_X = 0.0;
  double var_Y = 0.0;
  double commutator = 0.0;
};

inline InferredPair inferred(const CorrelatedFockDensity& rho_x, const CorrelatedFockDensity& rho_y, Mode measured,
                             Quadrature y_setting, QuadratureKind kind, const OutcomeGrid& grid) {
  InferredPair out;
  out.var_X = ensemble_average(rho_x, measured, Quadrature::X, grid, [kind](const CorrelatedFockDensity& s) {
    return quadrature_stats(s, Quadrature::X, kind).variance;
  });
  out.var_Y = ensemble_average(rho_y, measured, y_setting, grid, [kind](const CorrelatedFockDensity& s) {
    return quadrature_stats(s, Quadrature::Y, kind).variance;
  });
  out.commutator = ensemble_average(rho_x, measured, Quadrature::X, grid, [kind](const CorrelatedFockDensity& s) {
    return quadrature_stats(s, Quadrature::X, kind).commutator;
  });
  if (!(out.commutator > 0.0)) throw ConditioningError("steering: vanishing commutator expectation");
  return out;
}

inline SteeringReport make_report(const InferredPair& p, double uncond, const OutcomeGrid& grid,
                                  SteeringDirection dir) {
  SteeringReport r;
  r.var_X_inferred = p.var_X;
  r.var_Y_inferred = p.var_Y;
  r.commutator_expectation = p.commutator;
  r.commutator_unconditional = uncond;
  r.grid = grid;
  r.direction = dir;
  r.S = r.recomputed_S();
  return r;
}

inline void require_abc(const CorrelatedFockDensity& rho, const char* who) {
  if (rho.m() != 3) throw InvalidArgument(std::string(who) + ": needs the m=3 triplet density");
}

}  // namespace detail

/// S^{a->bc} from the triplet density.
inline SteeringReport steer_a_to_bc(const CorrelatedFockDensity& rho_abc, std::optional<OutcomeGrid> grid = {}) {
  detail::require_abc(rho_abc, "steer_a_to_bc");
  const OutcomeGrid g = grid.value_or(OutcomeGrid::default_for(rho_abc.dim()));
  const auto p = detail::inferred(rho_abc, rho_abc, Mode::a, Quadrature::Y, QuadratureKind::bc_pair, g);
  const double uncond =
      quadrature_stats(trace_out(rho_abc, {Mode::b, Mode::c}), Quadrature::X, QuadratureKind::bc_pair).commutator;
  return detail::make_report(p, uncond, g, SteeringDirection::a_to_bc);
}

enum class BToAVariant {
  x_c,  ///< c fixed at x_c; b measured in X and in Y
  y_c,  ///< b measured in X; c at x_c for the X variance and at y_c for the Y variance
};

/// S^{b->a}: mode c is conditioned first at `c_outcome`.
inline SteeringReport steer_b_to_a(const CorrelatedFockDensity& rho_abc, std::optional<OutcomeGrid> grid = {},
                                   double c_outcome = 0.0, BToAVariant variant = BToAVariant::x_c) {
  detail::require_abc(rho_abc, "steer_b_to_a");
  const OutcomeGrid g = grid.value_or(OutcomeGrid::default_for(rho_abc.dim()));
  const auto rho_x = condition(rho_abc, {HomodyneSetting{Mode::c, Quadrature::X, c_outcome}}).state;
  detail::InferredPair p;
  if (variant == BToAVariant::x_c) {
    p = detail::inferred(rho_x, rho_x, Mode::b, Quadrature::Y, QuadratureKind::a_squared, g);
  } else {
    const auto rho_y = condition(rho_abc, {HomodyneSetting{Mode::c, Quadrature::Y, c_outcome}}).state;
    p = detail::inferred(rho_x, rho_y, Mode::b, Quadrature::X, QuadratureKind::a_squared, g);
  }
  const double uncond =
      quadrature_stats(trace_out(rho_x, {Mode::a}), Quadrature::X, QuadratureKind::a_squared).commutator;
  return detail::make_report(p, uncond, g, SteeringDirection::b_to_a);
}

/// From a two-mode conditional state, steering from `measured` onto the
/// remaining mode with squared-amplitude quadratures (m = 2 input).
inline SteeringReport steer_two_mode(const CorrelatedFockDensity& rho_two, Mode measured,
                                     std::optional<OutcomeGrid> grid = {}) {
  if (rho_two.m() != 2) throw InvalidArgument("steer_two_mode: needs an m=2 density");
  const OutcomeGrid g = grid.value_or(OutcomeGrid::default_for(rho_two.dim()));
  const auto p = detail::inferred(rho_two, rho_two, measured, Quadrature::Y, QuadratureKind::a_squared, g);
  Mode rest = rho_two.modes()[0] == measured ? rho_two.modes()[1] : rho_two.modes()[0];
  const double uncond =
      quadrature_stats(trace_out(rho_two, {rest}), Quadrature::X, QuadratureKind::a_squared).commutator;
  return detail::make_report(p, uncond, g, SteeringDirection::b_to_a);
}

/// Var(X)/|<[X, Y]>| of a conditional state.
inline double normalized_variance(const CorrelatedFockDensity& rho, QuadratureKind kind) {
  const auto s = quadrature_stats(rho, Quadrature::X, kind);
  return s.variance / s.commutator;
}

/// V_bc: X_bc squeezing of mode pair bc after measuring x_a.
inline double conditional_squeezing_bc(const CorrelatedFockDensity& rho_abc, double x_a) {
  detail::require_abc(rho_abc, "conditional_squeezing_bc");
  const auto con = condition(rho_abc, {HomodyneSetting{Mode::a, Quadrature::X, x_a}});
  return normalized_variance(con.state, QuadratureKind::bc_pair);
}

/// V_a2: X_{a^2} squeezing of mode a after measuring x_b and x_c.
inline double conditional_squeezing_a2(const CorrelatedFockDensity& rho_abc, double x_b, double x_c) {
  detail::require_abc(rho_abc, "conditional_squeezing_a2");
  const auto con = condition(rho_abc, {HomodyneSetting{Mode::b, Quadrature::X, x_b},
                                       HomodyneSetting{Mode::c, Quadrature::X, x_c}});
  return normalized_variance(con.state, QuadratureKind::a_squared);
}

}  // namespace ntpsd
