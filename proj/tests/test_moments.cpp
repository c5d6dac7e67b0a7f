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
#include <random>

#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "ntpsd/dense_oracle.hpp"
#include "ntpsd/moments.hpp"

namespace {

using ntpsd::CorrelatedFockDensity;
using ntpsd::cplx;
using ntpsd::LadderKind;
using ntpsd::PureFockVector;
using ntpsd::Quadrature;
using ntpsd::QuadratureKind;
using Mat = Eigen::MatrixXcd;

CorrelatedFockDensity pure(int m, std::initializer_list<cplx> amps) {
  PureFockVector v{m, Eigen::VectorXcd(static_cast<Eigen::Index>(amps.size()))};
  int i = 0;
  for (cplx c : amps) v.amps[i++] = c;
  return v.normalized().density();
}

CorrelatedFockDensity random_replicated(std::mt19937& gen, int m, int dim) {
  std::normal_distribution<double> nd;
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = {nd(gen), nd(gen)};
  Mat r = g * g.adjoint();
  return CorrelatedFockDensity(ntpsd::default_modes(m), r / r.trace().real());
}

// Dense two-mode operators on dt x dt levels; index n_b * dt + n_c.
struct TwoModeOps {
  int dt;
  Mat b, c;
  explicit TwoModeOps(int dt_) : dt(dt_) {
    const Mat a = ntpsd::oracle::annihilation(dt);
    const Mat id = Mat::Identity(dt, dt);
    b = Eigen::kroneckerProduct(a, id);
    c = Eigen::kroneckerProduct(id, a);
  }
  Mat embed(const CorrelatedFockDensity& rho) const {
    Mat out = Mat::Zero(dt * dt, dt * dt);
    for (int n = 0; n < rho.dim(); ++n)
      for (int k = 0; k < rho.dim(); ++k) out(n * dt + n, k * dt + k) = rho(n, k);
    return out;
  }
};

double expect(const Mat& rho, const Mat& op) { return (rho * op).trace().real(); }

TEST(LadderMoment, Examples) {
  const auto vac = CorrelatedFockDensity::diagonal(ntpsd::default_modes(2), {1.0, 0.0, 0.0});
  for (auto [k, l] : {std::pair{0, 1}, {1, 0}, {1, 1}, {2, 1}, {0, 2}})
    EXPECT_EQ(ntpsd::ladder_moment(vac, k, l), cplx(0.0));
  EXPECT_NEAR(ntpsd::ladder_moment(pure(2, {0.0, 1.0}), 1, 1).real(), 1.0, 1e-15);

  const auto two = pure(1, {0.0, 0.0, 1.0});
  EXPECT_EQ(ntpsd::ladder_moment(two, 0, 1, LadderKind::squared), cplx(0.0));
  EXPECT_NEAR(ntpsd::ladder_moment(two, 1, 1, LadderKind::squared).real(), 2.0, 1e-14);
  EXPECT_THROW(ntpsd::ladder_moment(vac, 1, 1, LadderKind::squared), ntpsd::InvalidArgument);
  EXPECT_THROW(ntpsd::ladder_moment(vac, -1, 0), ntpsd::InvalidArgument);
}

TEST(LadderMoment, MatchesDenseOperatorsForProductLadder) {
  std::mt19937 gen(41);
  const TwoModeOps ops(7);
  const Mat A = ops.b * ops.c;
  const auto rho = random_replicated(gen, 2, 5);
  const Mat r = ops.embed(rho);
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; l <= 2; ++l) {
      Mat op = Mat::Identity(49, 49);
      for (int q = 0; q < k; ++q) op = op * A.adjoint();
      for (int q = 0; q < l; ++q) op = op * A;
      const cplx dense = (r * op).trace();
      const cplx fast = ntpsd::ladder_moment(rho, k, l);
      EXPECT_NEAR(std::abs(dense - fast), 0.0, 1e-12) << k << "," << l;
    }
  EXPECT_NEAR(ntpsd::ladder_anti_normal(rho), expect(r, A * A.adjoint()), 1e-12);
}

TEST(LadderMoment, MatchesDenseOperatorsForSquaredLadder) {
  std::mt19937 gen(43);
  const int dt = 9;
  const Mat a = ntpsd::oracle::annihilation(dt);
  const Mat A = a * a;
  const auto rho = random_replicated(gen, 1, 6);
  const Mat r = rho.padded(dt).matrix();
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; l <= 2; ++l) {
      if (2 * std::max(k, l) + rho.dim() > dt) continue;
      Mat op = Mat::Identity(dt, dt);
      for (int q = 0; q < k; ++q) op = op * A.adjoint();
      for (int q = 0; q < l; ++q) op = op * A;
      EXPECT_NEAR(std::abs((r * op).trace() - ntpsd::ladder_moment(rho, k, l, LadderKind::squared)), 0.0, 1e-12);
    }
  EXPECT_NEAR(ntpsd::ladder_anti_normal(rho, LadderKind::squared), expect(r, A * A.adjoint()), 1e-12);
}

TEST(Commutators, ProductLadderIdentity) {
  // [bc, (bc)^dag] = n_b + n_c + 1 away from the truncation edge.
  const int dt = 6;
  const TwoModeOps ops(dt);
  const Mat A = ops.b * ops.c;
  const Mat comm = A * A.adjoint() - A.adjoint() * A;
  const Mat rhs = ops.b.adjoint() * ops.b + ops.c.adjoint() * ops.c + Mat::Identity(dt * dt, dt * dt);
  for (int nb = 0; nb + 1 < dt; ++nb)
    for (int nc = 0; nc + 1 < dt; ++nc)
      for (int mb = 0; mb + 1 < dt; ++mb)
        for (int mc = 0; mc + 1 < dt; ++mc) {
          const int i = nb * dt + nc, j = mb * dt + mc;
          EXPECT_NEAR(std::abs(comm(i, j) - rhs(i, j)), 0.0, 1e-12);
        }
}

TEST(Commutators, SquaredLadderIdentity) {
  // [a^2, a^dag^2] = 4n + 2 away from the truncation edge.
  const int dt = 6;
  const Mat a = ntpsd::oracle::annihilation(dt);
  const Mat A = a * a;
  const Mat comm = A * A.adjoint() - A.adjoint() * A;
  const Mat rhs = 4.0 * a.adjoint() * a + 2.0 * Mat::Identity(dt, dt);
  for (int n = 0; n + 2 < dt; ++n)
    for (int k = 0; k + 2 < dt; ++k) EXPECT_NEAR(std::abs(comm(n, k) - rhs(n, k)), 0.0, 1e-12);
}

TEST(QuadratureStats, VacuumExamples) {
  const auto v2 = CorrelatedFockDensity::diagonal(ntpsd::default_modes(2), {1.0});
  for (Quadrature q : {Quadrature::X, Quadrature::Y}) {
    const auto s = ntpsd::quadrature_stats(v2, q, QuadratureKind::bc_pair);
    EXPECT_EQ(s.mean, 0.0);
    EXPECT_NEAR(s.variance, 0.25, 1e-15);
    EXPECT_NEAR(s.commutator, 0.5, 1e-15);
  }
  const auto v1 = CorrelatedFockDensity::diagonal(ntpsd::default_modes(1), {1.0});
  const auto s = ntpsd::quadrature_stats(v1, Quadrature::X, QuadratureKind::a_squared);
  EXPECT_NEAR(s.variance, 0.5, 1e-15);
  EXPECT_NEAR(s.commutator, 1.0, 1e-15);
  EXPECT_THROW(ntpsd::quadrature_stats(v1, Quadrature::X, QuadratureKind::bc_pair), ntpsd::InvalidArgument);
}

TEST(QuadratureStats, BellMeanAgainstDenseOracle) {
  const auto bell = ntpsd::bell_target().density();
  const TwoModeOps ops(4);
  const Mat A = ops.b * ops.c;
  const Mat X = 0.5 * (A + A.adjoint());
  const double dense = expect(ops.embed(bell), X);
  EXPECT_NEAR(dense, 0.5, 1e-14);
  EXPECT_NEAR(ntpsd::quadrature_stats(bell, Quadrature::X, QuadratureKind::bc_pair).mean, dense, 1e-14);
}

TEST(QuadratureStats, BruteForceVariancesAndCommutators) {
  std::mt19937 gen(47);
  const cplx i{0.0, 1.0};
  {
    const TwoModeOps ops(8);
    const Mat A = ops.b * ops.c;
    const Mat X = 0.5 * (A + A.adjoint());
    const Mat Y = (A - A.adjoint()) / (2.0 * i);
    const Mat nsum = ops.b.adjoint() * ops.b + ops.c.adjoint() * ops.c;
    for (int trial = 0; trial < 4; ++trial) {
      const auto rho = random_replicated(gen, 2, 6);
      const Mat r = ops.embed(rho);
      const auto sx = ntpsd::quadrature_stats(rho, Quadrature::X, QuadratureKind::bc_pair);
      const auto sy = ntpsd::quadrature_stats(rho, Quadrature::Y, QuadratureKind::bc_pair);
      EXPECT_NEAR(sx.mean, expect(r, X), 1e-12);
      EXPECT_NEAR(sy.mean, expect(r, Y), 1e-12);
      EXPECT_NEAR(sx.variance, expect(r, X * X) - std::pow(expect(r, X), 2), 1e-12);
      EXPECT_NEAR(sy.variance, expect(r, Y * Y) - std::pow(expect(r, Y), 2), 1e-12);
      const cplx comm = (r * (X * Y - Y * X)).trace();
      EXPECT_NEAR(std::abs(comm), sx.commutator, 1e-12);
      EXPECT_NEAR(sx.commutator, 0.5 * (expect(r, nsum) + 1.0), 1e-12);
      EXPECT_NEAR(comm.real(), 0.0, 1e-12);
    }
  }
  {
    const int dt = 11;
    const Mat a = ntpsd::oracle::annihilation(dt);
    const Mat A = a * a;
    const Mat X = 0.5 * (A + A.adjoint());
    const Mat Y = (A - A.adjoint()) / (2.0 * i);
    for (int trial = 0; trial < 4; ++trial) {
      const auto rho = random_replicated(gen, 1, 6);
      const Mat r = rho.padded(dt).matrix();
      const auto sx = ntpsd::quadrature_stats(rho, Quadrature::X, QuadratureKind::a_squared);
      const auto sy = ntpsd::quadrature_stats(rho, Quadrature::Y, QuadratureKind::a_squared);
      EXPECT_NEAR(sx.variance, expect(r, X * X) - std::pow(expect(r, X), 2), 1e-12);
      EXPECT_NEAR(sy.variance, expect(r, Y * Y) - std::pow(expect(r, Y), 2), 1e-12);
      EXPECT_NEAR(sx.commutator, std::abs((r * (X * Y - Y * X)).trace()), 1e-12);
      EXPECT_NEAR(sx.commutator, 2.0 * expect(r, a.adjoint() * a) + 1.0, 1e-12);
    }
  }
}

TEST(TraceOut, KeepsPopulationsOnly) {
  std::mt19937 gen(53);
  const auto rho = random_replicated(gen, 3, 4);
  const auto bc = ntpsd::trace_out(rho, {ntpsd::Mode::b, ntpsd::Mode::c});
  EXPECT_EQ(bc.m(), 2);
  for (int n = 0; n < 4; ++n)
    for (int k = 0; k < 4; ++k) EXPECT_EQ(bc(n, k), n == k ? cplx(rho(n, n).real()) : cplx(0.0));
  EXPECT_THROW(ntpsd::trace_out(rho, {ntpsd::Mode::p}), ntpsd::InvalidArgument);
  EXPECT_THROW(ntpsd::trace_out(rho, {ntpsd::Mode::a, ntpsd::Mode::b, ntpsd::Mode::c}), ntpsd::InvalidArgument);
}

}  // namespace
