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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ntpsd/conditioning.hpp"
#include "ntpsd/dynamics.hpp"
#include "ntpsd/wigner.hpp"

namespace {

using ntpsd::CorrelatedFockDensity;
using ntpsd::PureFockVector;

constexpr double kPi = std::numbers::pi;

CorrelatedFockDensity fock(int n, int dim = 0) {
  PureFockVector v{1, Eigen::VectorXcd::Zero(std::max(dim, n + 1))};
  v.amps[n] = 1.0;
  return v.density();
}

CorrelatedFockDensity coherent(double alpha) {
  return PureFockVector{1, ntpsd::coherent_amplitudes(alpha, 16).amps}.density();
}

CorrelatedFockDensity cat(double alpha) { return ntpsd::cat_state(alpha, ntpsd::cat_cutoff(alpha)).density(); }

ntpsd::WignerGrid grid_of(const CorrelatedFockDensity& rho, double step = 0.05, double radius = 0.0) {
  if (radius <= 0.0) radius = std::sqrt(2.0 * rho.dim()) + 3.0;
  const int points = static_cast<int>(std::lround(2.0 * radius / step)) + 1;
  return ntpsd::wigner(rho, ntpsd::uniform_axis(-radius, radius, points), ntpsd::uniform_axis(-radius, radius, points));
}

TEST(WignerKernel, VacuumGaussian) {
  const auto vac = fock(0, 3);
  EXPECT_NEAR(ntpsd::wigner_point(vac, 0.0, 0.0), 1.0 / kPi, 1e-14);
  for (double x : {-1.5, 0.3, 2.0})
    for (double p : {-0.7, 0.0, 1.2})
      EXPECT_NEAR(ntpsd::wigner_point(vac, x, p), std::exp(-(x * x + p * p)) / kPi, 1e-14);
}

TEST(WignerKernel, FockOneAtOrigin) {
  EXPECT_NEAR(ntpsd::wigner_point(fock(1), 0.0, 0.0), -1.0 / kPi, 1e-14);
  // W_1 = (2 r^2 - 1) e^{-r^2} / pi
  for (double x : {0.4, 1.1})
    for (double p : {-0.3, 0.9}) {
      const double r2 = x * x + p * p;
      EXPECT_NEAR(ntpsd::wigner_point(fock(1), x, p), (2 * r2 - 1) * std::exp(-r2) / kPi, 1e-14);
    }
}

class DualRoute : public ::testing::TestWithParam<int> {};

TEST_P(DualRoute, CharacteristicMatchesKernel) {
  const CorrelatedFockDensity states[] = {fock(0, 2), fock(1), fock(2), coherent(1.0), cat(1.5)};
  const auto& rho = states[GetParam()];
  for (double x : {-1.7, 0.0, 0.45, 2.2})
    for (double p : {-1.1, 0.0, 0.8, 2.6})
      EXPECT_NEAR(ntpsd::wigner_characteristic(rho, x, p), ntpsd::wigner_point(rho, x, p), 1e-6)
          << "x=" << x << " p=" << p;
}

INSTANTIATE_TEST_SUITE_P(TestStates, DualRoute, ::testing::Range(0, 5));

TEST(WignerGrid, NormalizedOnDefaultAxes) {
  for (const auto& rho : {fock(0, 2), fock(3), coherent(1.0), cat(1.5)}) {
    const auto axis = ntpsd::default_axis(rho.dim());
    const auto g = ntpsd::wigner(rho, axis, axis);
    EXPECT_NEAR(g.integral(), 1.0, 1e-3);
  }
}

TEST(WignerGrid, MarginalIsQuadratureDistribution) {
  const auto rho = cat(1.5);
  const auto g = grid_of(rho);
  for (std::size_t i = 0; i < g.x_axis.size(); i += 17) {
    const double marginal = g.values.row(static_cast<Eigen::Index>(i)).sum() * g.dp;
    EXPECT_NEAR(marginal, ntpsd::outcome_density(rho, ntpsd::Mode::a, ntpsd::Quadrature::X, g.x_axis[i]), 1e-3);
  }
}

TEST(WignerGrid, CoherentPeakSitsAtAlpha) {
  const auto g = grid_of(coherent(1.0));
  Eigen::Index i, j;
  g.values.maxCoeff(&i, &j);
  EXPECT_NEAR(g.x_axis[static_cast<std::size_t>(i)], std::sqrt(2.0), 0.05);
  EXPECT_NEAR(g.p_axis[static_cast<std::size_t>(j)], 0.0, 0.05);
}

TEST(WignerGrid, CoverageFailureThrows) {
  const auto axis = ntpsd::uniform_axis(-1.0, 1.0, 41);
  EXPECT_THROW(ntpsd::wigner(fock(2), axis, axis), ntpsd::GridError);
}

TEST(Negativity, VacuumAndCoherentAreZero) {
  EXPECT_NEAR(ntpsd::negativity(grid_of(fock(0, 2))), 0.0, 1e-15);
  // Truncation at n = 16 leaves a residue near 1e-9.
  EXPECT_NEAR(ntpsd::negativity(grid_of(coherent(1.0))), 0.0, 1e-8);
}

TEST(Negativity, FockOne) {
  // Exact: 2 int_{r^2<1/2} |W_1| = 4 e^{-1/2} - 2.
  const double exact = 4.0 * std::exp(-0.5) - 2.0;
  const double n = ntpsd::negativity(grid_of(fock(1)));
  EXPECT_NEAR(n, exact, 5e-4);
  EXPECT_NEAR(n, 0.425988, 2e-6);  // frozen at step 0.05, radius sqrt(4)+3
}

TEST(Macroscopicity, VacuumIsZero) { EXPECT_NEAR(ntpsd::macroscopicity(grid_of(fock(0, 2))), 0.0, 1e-3); }

TEST(Macroscopicity, FockOneAgainstHalfStepAndFockForm) {
  const double coarse = ntpsd::macroscopicity(grid_of(fock(1), 0.05));
  const double fine = ntpsd::macroscopicity(grid_of(fock(1), 0.025));
  EXPECT_NEAR(coarse, fine, 1e-2);
  EXPECT_NEAR(ntpsd::macroscopicity_fock(fock(1)), 1.0, 1e-14);
  EXPECT_NEAR(fine, 1.0, 1e-3);
  EXPECT_NEAR(coarse, 0.997814, 1e-5);  // frozen regression value
}

TEST(Macroscopicity, GridMatchesFockFormForCat) {
  const auto rho = cat(1.5);
  const auto est = ntpsd::macroscopicity_estimate(grid_of(rho, 0.025));
  EXPECT_NEAR(est.value, ntpsd::macroscopicity_fock(rho), 3.0 * est.error + 1e-4);
  EXPECT_LT(est.error, 1e-2);
}

TEST(Macroscopicity, CoarseStepThrows) {
  EXPECT_THROW(ntpsd::macroscopicity(grid_of(fock(1), 0.2)), ntpsd::GridError);
}

TEST(Wigner, ConditionedTripletShowsTwoLobesAndFringes) {
  const auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.3});
  const auto rho = ntpsd::reduce_to_triplets(ntpsd::evolve(params)[0]);
  double last_p0 = 0.0;
  for (double xb : {3.0, 4.0, 5.0, 6.0}) {
    SCOPED_TRACE(xb);
    const auto a = ntpsd::condition(rho, {{ntpsd::Mode::b, ntpsd::Quadrature::X, xb},
                                          {ntpsd::Mode::c, ntpsd::Quadrature::X, 0.0}})
                       .state;
    // Even parity pins the origin to 1/pi; fringes run along x through it.
    EXPECT_NEAR(ntpsd::wigner_point(a, 0.0, 0.0), 1.0 / kPi, 1e-10);
    double least = 1.0;
    for (double x = -2.0; x < 2.0; x += 0.01) least = std::min(least, ntpsd::wigner_point(a, x, 0.0));
    EXPECT_LT(least, -0.05);
    EXPECT_GT(ntpsd::negativity(grid_of(a)), 0.1);
    if (xb == 3.0) continue;  // lobes still merged with the central peak

    // Side lobes at +-p0 on the p axis, moving apart as x_b grows.
    double best = -1.0, p0 = 0.0;
    for (double p = 1.0; p < 8.0; p += 0.01) {
      const double w = ntpsd::wigner_point(a, 0.0, p);
      if (w > best) best = w, p0 = p;
    }
    EXPECT_GT(best, 0.1);
    EXPECT_GT(ntpsd::wigner_point(a, 0.0, p0), ntpsd::wigner_point(a, 0.0, p0 / 2));
    EXPECT_NEAR(ntpsd::wigner_point(a, 0.0, -p0), best, 1e-10);
    EXPECT_GT(p0, last_p0 + 0.5);
    last_p0 = p0;
  }
}

CorrelatedFockDensity two_mode(const Eigen::MatrixXcd& r) { return CorrelatedFockDensity(ntpsd::default_modes(2), r); }

TEST(TwoModeWigner, VacuumProduct) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2, 2);
  r(0, 0) = 1.0;
  const ntpsd::PhaseAxes axes{ntpsd::uniform_axis(-1, 1, 5), ntpsd::uniform_axis(-1, 1, 5)};
  const auto g = ntpsd::wigner_two_mode(two_mode(r), axes, axes);
  EXPECT_NEAR(g.values[((2 * 5 + 2) * 5 + 2) * 5 + 2], 1.0 / (kPi * kPi), 1e-14);
  EXPECT_NEAR(g.values[((0 * 5 + 2) * 5 + 2) * 5 + 4], std::exp(-2.0) / (kPi * kPi), 1e-14);
}

TEST(TwoModeWigner, BellTargetIsNegative) {
  const auto bell = ntpsd::bell_target().density();
  const auto cart = ntpsd::two_mode_negativity(bell, ntpsd::default_two_mode_axes(2), ntpsd::default_two_mode_axes(2));
  const auto polar = ntpsd::two_mode_negativity_polar(bell);
  EXPECT_GT(cart.negativity, 0.05);
  EXPECT_GT(polar.negativity, 0.05);
  EXPECT_NEAR(cart.integral, 1.0, 1e-2);
  EXPECT_NEAR(polar.integral, 1.0, 1e-6);
}

TEST(TwoModeWigner, MixtureNormalization) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2, 2);
  r(0, 0) = r(1, 1) = 0.5;
  const auto axes = ntpsd::default_two_mode_axes(2);
  EXPECT_NEAR(ntpsd::wigner_two_mode(two_mode(r), axes, axes).integral(), 1.0, 1e-2);
}

TEST(TwoModeWigner, PolarAgreesWithCartesian) {
  for (const auto& target : {ntpsd::bell_target(), ntpsd::qudit_target()}) {
    const auto rho = target.density();
    const auto axes = ntpsd::default_two_mode_axes(rho.dim(), 61);
    const auto cart = ntpsd::two_mode_negativity(rho, axes, axes);
    const auto polar = ntpsd::two_mode_negativity_polar(rho);
    EXPECT_NEAR(cart.negativity, polar.negativity, 2e-3);
  }
}

TEST(TwoModeWigner, FullGridMatchesStreamedNegativity) {
  const auto rho = ntpsd::qudit_target().density();
  const auto axes = ntpsd::default_two_mode_axes(rho.dim(), 21);
  EXPECT_NEAR(ntpsd::negativity(ntpsd::wigner_two_mode(rho, axes, axes)),
              ntpsd::two_mode_negativity(rho, axes, axes).negativity, 1e-12);
}

}  // namespace
