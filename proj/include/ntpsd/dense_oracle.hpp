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

// Brute-force reference for tiny cutoffs: the full four-mode tensor-product
// Hamiltonian with explicit ladder operators, propagated by a dense matrix
// exponential. Deliberately independent of the block machinery in
// dynamics.hpp so the two paths can check each other.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ntpsd/dynamics.hpp"
#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/hermite.hpp"

namespace ntpsd::oracle {

inline constexpr int kMaxTripletCutoff = 3;
inline constexpr int kMaxPumpCutoff = 4;

inline Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Full state on |n_a, n_b, n_c, n_p>, row-major in that order.
struct DenseState {
  int dt = 0;  ///< per-triplet-mode dimension
  int dp = 0;  ///< pump dimension
  Eigen::VectorXcd psi;

  int index(int na, int nb, int nc, int np) const { return ((na * dt + nb) * dt + nc) * dp + np; }

  Eigen::MatrixXcd density() const { return psi * psi.adjoint(); }

  /// rho_abc on the (dt^3)-dimensional triplet space, index (na*dt+nb)*dt+nc.
  Eigen::MatrixXcd triplet_density() const {
    const int d3 = dt * dt * dt;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d3, d3);
    for (int i = 0; i < d3; ++i)
      for (int j = 0; j < d3; ++j) {
        cplx s = 0.0;
        for (int p = 0; p < dp; ++p) s += psi[i * dp + p] * std::conj(psi[j * dp + p]);
        rho(i, j) = s;
      }
    return rho;
  }

  /// Expectation of the number operator of mode 0..3 (a, b, c, p).
  double mean_number(int mode) const {
    double s = 0.0;
    for (int na = 0; na < dt; ++na)
      for (int nb = 0; nb < dt; ++nb)
        for (int nc = 0; nc < dt; ++nc)
          for (int np = 0; np < dp; ++np) {
            const std::array<int, 4> n{na, nb, nc, np};
            s += n[static_cast<std::size_t>(mode)] * std::norm(psi[index(na, nb, nc, np)]);
          }
    return s;
  }
};

/// Propagates |0,0,0> (x) |alpha_p>_truncated under the full Hamiltonian for
/// dimensionless time tau. The pump coherent state is renormalized on the
/// retained Fock states.
inline DenseState dense_oracle(const SimParams& params, double tau) {
  const int nt = params.cutoffs.n_t_max;
  const int np = params.cutoffs.n_p_max;
  if (nt > kMaxTripletCutoff || np > kMaxPumpCutoff)
    throw InvalidArgument("dense_oracle: cutoffs too large for the dense reference");
  const int dt = nt + 1;
  const int dp = np + 1;
  const Eigen::MatrixXcd it = Eigen::MatrixXcd::Identity(dt, dt);
  const Eigen::MatrixXcd ip = Eigen::MatrixXcd::Identity(dp, dp);
  const Eigen::MatrixXcd at = annihilation(dt);
  const Eigen::MatrixXcd ap = annihilation(dp);

  using Eigen::kroneckerProduct;
  const Eigen::MatrixXcd A = kroneckerProduct(kroneckerProduct(kroneckerProduct(at, it).eval(), it).eval(), ip);
  const Eigen::MatrixXcd B = kroneckerProduct(kroneckerProduct(kroneckerProduct(it, at).eval(), it).eval(), ip);
  const Eigen::MatrixXcd C = kroneckerProduct(kroneckerProduct(kroneckerProduct(it, it).eval(), at).eval(), ip);
  const Eigen::MatrixXcd P = kroneckerProduct(kroneckerProduct(kroneckerProduct(it, it).eval(), it).eval(), ap);

  const Eigen::MatrixXcd raise = A.adjoint() * B.adjoint() * C.adjoint() * P;
  const Eigen::MatrixXcd H = cplx{0.0, params.chi} * (raise - raise.adjoint());

  // chi t from tau = |alpha_p| chi t; H already carries chi.
  const double t = (params.chi == 0.0 || std::abs(params.alpha_p) == 0.0)
                       ? 0.0
                       : tau / (std::abs(params.alpha_p) * params.chi);

  DenseState out{dt, dp, Eigen::VectorXcd::Zero(dt * dt * dt * dp)};
  double norm2 = 0.0;
  std::vector<cplx> pump(static_cast<std::size_t>(dp));
  for (int n = 0; n < dp; ++n) {
    const double mag = std::exp(-0.5 * std::norm(params.alpha_p) + n * std::log(std::abs(params.alpha_p) + 1e-300) -
                                0.5 * std::lgamma(n + 1.0));
    pump[static_cast<std::size_t>(n)] = n == 0 ? std::exp(-0.5 * std::norm(params.alpha_p))
                                               : std::polar(mag, n * std::arg(params.alpha_p));
    norm2 += std::norm(pump[static_cast<std::size_t>(n)]);
  }
  for (int n = 0; n < dp; ++n) out.psi[out.index(0, 0, 0, n)] = pump[static_cast<std::size_t>(n)] / std::sqrt(norm2);

  const Eigen::MatrixXcd U = (cplx{0.0, -t} * H).exp();
  out.psi = U * out.psi;
  return out;
}

/// Embeds a correlated-basis JointState into the dense tensor layout.
inline Eigen::VectorXcd embed(const JointState& js, int dt, int dp) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dt * dt * dt * dp);
  for (int n_p = 0; n_p <= js.n_p_max(); ++n_p)
    for (int n = 0; n < js.blocks[static_cast<std::size_t>(n_p)].size(); ++n) {
      const int pump = n_p - n;
      if (n >= dt || pump >= dp) throw InvalidArgument("embed: state exceeds dense dimensions");
      psi[((n * dt + n) * dt + n) * dp + pump] = js.blocks[static_cast<std::size_t>(n_p)][n];
    }
  return psi;
}

/// Embeds a replicated-index density (m=3) into the dt^3 triplet space.
inline Eigen::MatrixXcd embed_triplets(const CorrelatedFockDensity& rho, int dt) {
  const int d3 = dt * dt * dt;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d3, d3);
  for (int n = 0; n < rho.dim(); ++n)
    for (int k = 0; k < rho.dim(); ++k) out((n * dt + n) * dt + n, (k * dt + k) * dt + k) = rho(n, k);
  return out;
}

/// Projects mode `which` (0=a, 1=b, 2=c) of a dense triplet density onto the
/// quadrature eigenstate |x_theta>, returning the unnormalized two-mode
/// density of the remaining modes (index i*dt+j, in mode order).
inline Eigen::MatrixXcd project_mode(const Eigen::MatrixXcd& rho_abc, int dt, int which, double x, Quadrature q) {
  std::vector<cplx> phi(static_cast<std::size_t>(dt));
  for (int n = 0; n < dt; ++n) phi[static_cast<std::size_t>(n)] = quadrature_eigenfunction(n, x, theta_of(q));
  const int d2 = dt * dt;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d2, d2);
  auto split = [&](int idx) {
    return std::array<int, 3>{idx / (dt * dt), (idx / dt) % dt, idx % dt};
  };
  for (int i = 0; i < dt * d2; ++i)
    for (int j = 0; j < dt * d2; ++j) {
      const auto ni = split(i);
      const auto nj = split(j);
      std::array<int, 2> ri{};
      std::array<int, 2> rj{};
      int r = 0;
      for (int mode = 0; mode < 3; ++mode)
        if (mode != which) {
          ri[static_cast<std::size_t>(r)] = ni[static_cast<std::size_t>(mode)];
          rj[static_cast<std::size_t>(r)] = nj[static_cast<std::size_t>(mode)];
          ++r;
        }
      const cplx factor = phi[static_cast<std::size_t>(ni[static_cast<std::size_t>(which)])] *
                          std::conj(phi[static_cast<std::size_t>(nj[static_cast<std::size_t>(which)])]);
      out(ri[0] * dt + ri[1], rj[0] * dt + rj[1]) += rho_abc(i, j) * factor;
    }
  return out;
}

/// Reduced single-mode density of mode `which` (0=a, 1=b, 2=c).
inline Eigen::MatrixXcd single_mode_density(const Eigen::MatrixXcd& rho_abc, int dt, int which) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dt, dt);
  const int d3 = dt * dt * dt;
  for (int i = 0; i < d3; ++i)
    for (int j = 0; j < d3; ++j) {
      const std::array<int, 3> ni{i / (dt * dt), (i / dt) % dt, i % dt};
      const std::array<int, 3> nj{j / (dt * dt), (j / dt) % dt, j % dt};
      bool same_rest = true;
      for (int mode = 0; mode < 3; ++mode)
        if (mode != which && ni[static_cast<std::size_t>(mode)] != nj[static_cast<std::size_t>(mode)]) same_rest = false;
      if (same_rest) out(ni[static_cast<std::size_t>(which)], nj[static_cast<std::size_t>(which)]) += rho_abc(i, j);
    }
  return out;
}

}  // namespace ntpsd::oracle
