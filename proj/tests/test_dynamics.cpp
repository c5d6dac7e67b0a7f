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
#include <cstdlib>

#include <gtest/gtest.h>

#include "ntpsd/dense_oracle.hpp"
#include "ntpsd/dynamics.hpp"

namespace {

using ntpsd::cplx;

ntpsd::SimParams tiny_params(int nt, int np, std::vector<double> times, double alpha = 1.0) {
  ntpsd::SimParams p;
  p.alpha_p = alpha;
  p.cutoffs = ntpsd::FockCutoffs::make(nt, np);
  p.times = std::move(times);
  p.tail_tolerance = 0.1;  // the oracle renormalizes the truncated pump the same way
  return p;
}

TEST(BlockGenerator, Examples) {
  const auto g0 = ntpsd::block_generator(0, 5).dense();
  ASSERT_EQ(g0.rows(), 1);
  EXPECT_EQ(g0(0, 0), 0.0);

  const auto g1 = ntpsd::block_generator(1, 5).dense();
  ASSERT_EQ(g1.rows(), 2);
  EXPECT_DOUBLE_EQ(g1(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(g1(0, 1), -1.0);

  EXPECT_DOUBLE_EQ(ntpsd::block_generator(2, 5).dense()(1, 0), std::sqrt(2.0));
}

TEST(BlockGenerator, ClosedFormAndAntisymmetry) {
  for (int np : {3, 7, 20}) {
    const auto g = ntpsd::block_generator(np, 12).dense();
    EXPECT_EQ(g.rows(), std::min(np, 12) + 1);
    EXPECT_NEAR((g + g.transpose()).cwiseAbs().maxCoeff(), 0.0, 0.0);
    for (int n = 1; n < g.rows(); ++n)
      EXPECT_NEAR(g(n, n - 1), std::pow(n, 1.5) * std::sqrt(np - n + 1.0), 1e-12);
  }
}

TEST(BlockGenerator, MatchesDenseLadderAlgebra) {
  // <n+1,n+1,n+1,np-n-1| chi^-1 d/dt |n,n,n,np-n> from a^dag b^dag c^dag p on the tensor space.
  const int dt = 4, dp = 5;
  const auto a = ntpsd::oracle::annihilation(dt);
  const auto p = ntpsd::oracle::annihilation(dp);
  for (int np = 1; np < dp; ++np) {
    const auto g = ntpsd::block_generator(np, dt - 1).dense();
    for (int n = 0; n + 1 <= std::min(np, dt - 1); ++n) {
      const double amp = std::pow(a.adjoint()(n + 1, n).real(), 3) * p(np - n - 1, np - n).real();
      EXPECT_NEAR(g(n + 1, n), amp, 1e-14);
    }
  }
  // The spec example <1,1,1,1| a^dag b^dag c^dag p |0,0,0,2> = sqrt(2).
  EXPECT_NEAR(std::pow(a.adjoint()(1, 0).real(), 3) * p(1, 2).real(), std::sqrt(2.0), 1e-15);
}

TEST(Evolve, InitialStateAtZeroTime) {
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.0, 0.2});
  const auto states = ntpsd::evolve(params);
  const auto w = ntpsd::pump_weights(params);
  for (int np = 0; np <= states[0].n_p_max(); ++np) {
    EXPECT_EQ(states[0].blocks[np][0], w[np]);
    for (int n = 1; n < states[0].blocks[np].size(); ++n) EXPECT_EQ(states[0].blocks[np][n], cplx(0.0));
  }
  const auto rho = ntpsd::reduce_to_triplets(states[0]);
  EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(rho.matrix().cwiseAbs().sum(), 1.0, 1e-12);
}

TEST(Evolve, NormRealityAndBlockBounds) {
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.1, 0.3, 0.7, 1.5, 3.0});
  for (const auto& st : ntpsd::evolve(params)) {
    EXPECT_NEAR(st.norm(), 1.0, 1e-9);
    for (int np = 0; np <= st.n_p_max(); ++np) {
      EXPECT_LE(st.blocks[np].size() - 1, np);
      // Real alpha_p and a real generator keep every amplitude real.
      for (int n = 0; n < st.blocks[np].size(); ++n) EXPECT_LT(std::abs(st.blocks[np][n].imag()), 1e-12);
    }
    const auto rho = ntpsd::reduce_to_triplets(st);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-9);
    EXPECT_LT(rho.hermiticity_error(), 1e-10);
    EXPECT_GT(rho.min_eigenvalue(), -1e-8);
  }
  const auto st = ntpsd::evolve(params)[1];
  EXPECT_GT(st.mean_triplets(), 0.0);
}

TEST(Evolve, RejectsBadTimes) {
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.3, 0.2});
  EXPECT_THROW(ntpsd::evolve(params), ntpsd::InvalidArgument);
}

TEST(Evolve, ThreadCountDoesNotChangeBits) {
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.4, 0.9});
  ::setenv("NTPSD_THREADS", "1", 1);
  const auto serial = ntpsd::evolve(params);
  ::setenv("NTPSD_THREADS", "4", 1);
  const auto threaded = ntpsd::evolve(params);
  ::unsetenv("NTPSD_THREADS");
  for (std::size_t t = 0; t < serial.size(); ++t)
    for (std::size_t b = 0; b < serial[t].blocks.size(); ++b)
      for (Eigen::Index n = 0; n < serial[t].blocks[b].size(); ++n)
        EXPECT_EQ(serial[t].blocks[b][n], threaded[t].blocks[b][n]);
}

class OracleEquivalence : public ::testing::TestWithParam<double> {};

TEST_P(OracleEquivalence, StateAndReducedDensity) {
  const double tau = GetParam();
  const auto params = tiny_params(3, 4, {tau});
  const auto js = ntpsd::evolve(params)[0];
  const auto dense = ntpsd::oracle::dense_oracle(params, tau);
  const auto embedded = ntpsd::oracle::embed(js, dense.dt, dense.dp);
  EXPECT_LT((dense.psi - embedded).norm(), 1e-8);

  const auto rho = ntpsd::reduce_to_triplets(js);
  const auto diff = dense.triplet_density() - ntpsd::oracle::embed_triplets(rho, dense.dt);
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(TinyCutoffs, OracleEquivalence, ::testing::Values(0.1, 0.3, 0.5));

TEST(DenseOracle, SmallestPumpExample) {
  const auto params = tiny_params(2, 2, {0.2}, 0.7);
  const auto js = ntpsd::evolve(params)[0];
  const auto dense = ntpsd::oracle::dense_oracle(params, 0.2);
  EXPECT_LT((dense.psi - ntpsd::oracle::embed(js, dense.dt, dense.dp)).norm(), 1e-8);
}

TEST(DenseOracle, ZeroCouplingAndConservedQuantities) {
  auto params = tiny_params(3, 4, {0.0});
  params.chi = 0.0;
  const auto still = ntpsd::oracle::dense_oracle(params, 0.8);
  const auto start = ntpsd::oracle::dense_oracle(tiny_params(3, 4, {0.0}), 0.0);
  EXPECT_LT((still.psi - start.psi).norm(), 1e-15);

  const auto p = tiny_params(3, 4, {0.0});
  const double npump0 = start.mean_number(3);
  for (double tau : {0.2, 0.6, 1.3}) {
    const auto s = ntpsd::oracle::dense_oracle(p, tau);
    EXPECT_NEAR(s.mean_number(0) - s.mean_number(1), 0.0, 1e-12);
    EXPECT_NEAR(s.mean_number(0) - s.mean_number(2), 0.0, 1e-12);
    EXPECT_NEAR(s.mean_number(0) + s.mean_number(3), npump0, 1e-9);
    EXPECT_NEAR(s.psi.norm(), 1.0, 1e-12);
  }
  EXPECT_THROW(ntpsd::oracle::dense_oracle(tiny_params(4, 5, {0.0}), 0.1), ntpsd::InvalidArgument);
}

TEST(Evolve, ConservedPumpPlusTriplets) {
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), {0.0, 0.5, 1.0, 2.0});
  const auto states = ntpsd::evolve(params);
  auto total = [](const ntpsd::JointState& st) {
    double s = 0.0;
    for (int np = 0; np <= st.n_p_max(); ++np)
      for (int n = 0; n < st.blocks[np].size(); ++n) s += std::norm(st.blocks[np][n]) * (n + (np - n));
    return s;
  };
  for (const auto& st : states) EXPECT_NEAR(total(st), total(states[0]), 1e-9);
}

TEST(Evolve, ShortTimePopulationGrowsAsTauSquared) {
  std::vector<double> taus;
  for (int i = 0; i <= 10; ++i) taus.push_back(1e-3 * std::pow(10.0, i / 10.0));
  auto params = ntpsd::SimParams::for_pump(std::sqrt(10.0), taus, 8);
  const auto states = ntpsd::evolve(params);
  const double p_lo = ntpsd::reduce_to_triplets(states.front())(1, 1).real();
  const double p_hi = ntpsd::reduce_to_triplets(states.back())(1, 1).real();
  const double slope = std::log(p_hi / p_lo) / std::log(taus.back() / taus.front());
  EXPECT_NEAR(slope, 2.0, 0.05);
}

TEST(Evolve, NearClassicalPumpMatchesPerturbation) {
  const double tau = 0.05;
  auto params = ntpsd::SimParams::for_pump(std::sqrt(200.0), {tau}, 6);
  const auto rho = ntpsd::reduce_to_triplets(ntpsd::evolve(params)[0]);
  const double p1 = rho(1, 1).real();
  EXPECT_NEAR(p1 / (tau * tau), 1.0, 0.10);
  const auto pert = ntpsd::undepleted_short_time(tau, 1, 3).density();
  EXPECT_NEAR(p1, pert(1, 1).real(), 0.1 * pert(1, 1).real());
}

TEST(UndepletedShortTime, Examples) {
  const auto vac = ntpsd::undepleted_short_time(0.0, 2, 4);
  EXPECT_EQ(vac.m, 3);
  EXPECT_NEAR(std::abs(vac.amps[0]), 1.0, 1e-15);
  const auto first = ntpsd::undepleted_short_time(0.05, 1, 3);
  EXPECT_NEAR((first.amps[1] / first.amps[0]).real(), 0.05, 1e-15);
  EXPECT_EQ(first.amps[2], cplx(0.0));
  const auto second = ntpsd::undepleted_short_time(0.05, 2, 3);
  EXPECT_NEAR((second.amps[2] / second.amps[0]).real(), 0.00125, 1e-15);
  EXPECT_THROW(ntpsd::undepleted_short_time(0.1, 3, 4), ntpsd::InvalidArgument);
}

}  // namespace
