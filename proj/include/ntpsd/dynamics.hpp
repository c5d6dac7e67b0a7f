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

// Pump-depleted triple-photon downconversion on the correlated subspace.
//
// The Hamiltonian H = i chi (a^dag b^dag c^dag p - a b c p^dag) conserves
// n_a - n_b, n_a - n_c and n_a + n_p. Starting from triplet vacuum and a
// pump Fock state |n_p>, the dynamics stays in span{|n,n,n,n_p-n>}, one
// independent tridiagonal block per initial pump number. With a coherent
// pump each block carries its Poisson amplitude.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/parallel.hpp"

namespace ntpsd {

struct SimParams {
  double chi = 1.0;  ///< third-order coupling (only chi*t enters; see coupling_time)
  cplx alpha_p{1.0, 0.0};
  FockCutoffs cutoffs;
  std::vector<double> times;  ///< dimensionless tau = |alpha_p| chi t
  double tail_tolerance = kDefaultTailTolerance;

  /// Builds parameters with cutoffs chosen from the pump tail tolerance.
  static SimParams for_pump(cplx alpha_p, std::vector<double> times, std::optional<int> n_t_max = std::nullopt,
                            double tol = kDefaultTailTolerance) {
    SimParams p;
    p.alpha_p = alpha_p;
    p.cutoffs = FockCutoffs::for_pump(alpha_p, n_t_max, tol);
    p.times = std::move(times);
    p.tail_tolerance = tol;
    return p;
  }

  void validate() const {
    if (!(chi >= 0.0)) throw InvalidArgument("SimParams: chi must be nonnegative");
    FockCutoffs::make(cutoffs.n_t_max, cutoffs.n_p_max);
    cutoffs.check_tail(alpha_p, tail_tolerance);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw InvalidArgument("SimParams: times must be finite and >= 0");
      if (i > 0 && !(times[i] > times[i - 1])) throw InvalidArgument("SimParams: times must be strictly increasing");
    }
  }

  /// chi*t for a dimensionless time tau = |alpha_p| chi t.
  double coupling_time(double tau) const {
    if (chi == 0.0 || std::abs(alpha_p) == 0.0) return 0.0;
    return tau / std::abs(alpha_p);
  }
};

/// Real antisymmetric tridiagonal generator G of one pump block, with
/// dc/dt = chi G c and G[n,n-1] = -G[n-1,n] = n^{3/2} sqrt(n_p - n + 1).
struct BlockGenerator {
  int n_p = 0;
  Eigen::VectorXd coupling;  ///< coupling[n-1] = G[n, n-1], n = 1..dim-1

  int dim() const { return static_cast<int>(coupling.size()) + 1; }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim(), dim());
    for (int n = 1; n < dim(); ++n) {
      g(n, n - 1) = coupling[n - 1];
      g(n - 1, n) = -coupling[n - 1];
    }
    return g;
  }
};

inline BlockGenerator block_generator(int n_p, int n_t_max) {
  if (n_p < 0) throw InvalidArgument("block_generator: negative pump number");
  const int dim = std::min(n_p, n_t_max) + 1;
  BlockGenerator g{n_p, Eigen::VectorXd::Zero(dim - 1)};
  for (int n = 1; n < dim; ++n) g.coupling[n - 1] = std::pow(n, 1.5) * std::sqrt(static_cast<double>(n_p - n + 1));
  return g;
}

/// Exact propagator for one block. With D = diag(i^n), D^{-1} G D = -i T for
/// the real symmetric tridiagonal T carrying the same couplings, so
/// exp(G s) = D V exp(-i Lambda s) V^T D^{-1} from one eigendecomposition.
class BlockPropagator {
 public:
  explicit BlockPropagator(const BlockGenerator& g) : dim_(g.dim()) {
    if (dim_ == 1) {
      eigenvalues_ = Eigen::VectorXd::Zero(1);
      vectors_ = Eigen::MatrixXd::Identity(1, 1);
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(Eigen::VectorXd::Zero(dim_), g.coupling, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
      throw EvolutionError("eigendecomposition failed for pump block n_p=" + std::to_string(g.n_p));
    eigenvalues_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  int dim() const { return dim_; }

  /// exp(G s) e_0 scaled by `weight`; s = chi t.
  Eigen::VectorXcd from_vacuum(double s, cplx weight) const {
    Eigen::VectorXcd coeff(dim_);
    for (int k = 0; k < dim_; ++k) coeff[k] = std::polar(vectors_(0, k), -eigenvalues_[k] * s);
    Eigen::VectorXcd c = vectors_.cast<cplx>() * coeff;
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int n = 0; n < dim_; ++n) c[n] *= weight * kIPow[n % 4];
    return c;
  }

 private:
  int dim_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd vectors_;
};

/// Pure joint state of triplets and pump, one amplitude vector per initial
/// pump number: blocks[n_p][n] is the amplitude of |n,n,n,n_p-n>.
struct JointState {
  double tau = 0.0;
  int n_t_max = 0;
  std::vector<Eigen::VectorXcd> blocks;

  int n_p_max() const { return static_cast<int>(blocks.size()) - 1; }

  double norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
  }

  cplx amplitude(int n, int n_p) const {
    if (n_p < 0 || n_p > n_p_max()) return 0.0;
    const auto& b = blocks[static_cast<std::size_t>(n_p)];
    return n < b.size() ? b[n] : cplx{0.0};
  }

  /// Mean triplet occupation <n_a> (= <n_b> = <n_c>).
  double mean_triplets() const {
    double s = 0.0;
    for (const auto& b : blocks)
      for (Eigen::Index n = 0; n < b.size(); ++n) s += static_cast<double>(n) * std::norm(b[n]);
    return s;
  }
};

/// Initial pump weights e^{-|a|^2/2} a^n / sqrt(n!), renormalized over the
/// retained n_p <= n_p_max.
inline Eigen::VectorXcd pump_weights(const SimParams& params) {
  const auto coh = coherent_amplitudes(params.alpha_p, params.cutoffs.n_p_max, params.tail_tolerance);
  return coh.amps / coh.amps.norm();
}

/// Evolves every block and returns one JointState per requested time.
inline std::vector<JointState> evolve(const SimParams& params) {
  params.validate();
  const int np_max = params.cutoffs.n_p_max;
  const int nt_max = params.cutoffs.n_t_max;
  const Eigen::VectorXcd weights = pump_weights(params);

  std::vector<JointState> states(params.times.size());
  for (std::size_t t = 0; t < states.size(); ++t) {
    states[t].tau = params.times[t];
    states[t].n_t_max = nt_max;
    states[t].blocks.resize(static_cast<std::size_t>(np_max + 1));
  }

  parallel_for(static_cast<std::size_t>(np_max + 1), [&](std::size_t block) {
    const int n_p = static_cast<int>(block);
    const BlockPropagator prop(block_generator(n_p, nt_max));
    for (std::size_t t = 0; t < states.size(); ++t) {
      const double s = params.coupling_time(params.times[t]);
      Eigen::VectorXcd c;
      if (s == 0.0) {
        c = Eigen::VectorXcd::Zero(prop.dim());
        c[0] = weights[n_p];
      } else {
        c = prop.from_vacuum(s, weights[n_p]);
      }
      const double drift = std::abs(c.norm() - std::abs(weights[n_p]));
      if (drift > 1e-10)
        throw EvolutionError("norm drift " + std::to_string(drift) + " in pump block n_p=" + std::to_string(n_p));
      states[t].blocks[block] = std::move(c);
    }
  });
  return states;
}

/// Traces out the pump: rho[n,n'] = sum_m c_{n,n+m} conj(c_{n',n'+m}), pairing
/// amplitudes with the same residual pump number m = n_p - n.
inline CorrelatedFockDensity reduce_to_triplets(const JointState& state) {
  const int dim = state.n_t_max + 1;
  const int np_max = state.n_p_max();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int residual = 0; residual <= np_max; ++residual) {
    // column vector v[n] = c_{n, n+residual}
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    bool any = false;
    for (int n = 0; n < dim && n + residual <= np_max; ++n) {
      v[n] = state.amplitude(n, n + residual);
      any = any || v[n] != cplx{0.0};
    }
    if (any) rho.noalias() += v * v.adjoint();
  }
  return CorrelatedFockDensity({Mode::a, Mode::b, Mode::c}, std::move(rho));
}

/// Perturbative triplet state |000> + g t |111> + (g t)^2/2 |222>, truncated
/// at `order` and normalized. Valid only for g t << 1 with an undepleted pump.
inline PureFockVector undepleted_short_time(double g_t, int order, int cutoff) {
  if (order < 0 || order > 2) throw InvalidArgument("undepleted_short_time: order must be 0, 1 or 2");
  if (cutoff < order) throw InvalidArgument("undepleted_short_time: cutoff below order");
  PureFockVector v{3, Eigen::VectorXcd::Zero(cutoff + 1)};
  v.amps[0] = 1.0;
  if (order >= 1) v.amps[1] = g_t;
  if (order >= 2) v.amps[2] = 0.5 * g_t * g_t;
  return v.normalized();
}

}  // namespace ntpsd
