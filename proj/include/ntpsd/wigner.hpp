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

// Wigner functions on the quadrature plane (x, p) with x = sqrt(2) Re(beta),
// p = sqrt(2) Im(beta). Grids hold the density W(x, p) normalized as
// int W dx dp = 1 (vacuum peak 1/pi). The beta-plane function used by the
// nonclassicality and macroscopicity integrals is W_beta = 2 W with
// d^2 beta = dx dp / 2, so int W_beta d^2 beta = 1 as well.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntpsd/error.hpp"
#include "ntpsd/fock.hpp"
#include "ntpsd/gauss_legendre.hpp"
#include "ntpsd/parallel.hpp"

namespace ntpsd {

inline std::vector<double> uniform_axis(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw InvalidArgument("uniform_axis: need >= 2 points on a non-empty range");
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return axis;
}

/// Symmetric axis of radius sqrt(2 dim) + 3 with approximately `step` spacing.
inline std::vector<double> default_axis(int dim, double step = 0.05) {
  const double radius = std::sqrt(2.0 * dim) + 3.0;
  const int points = 2 * static_cast<int>(std::ceil(radius / step)) + 1;
  return uniform_axis(-radius, radius, points);
}

namespace detail {

inline double axis_step(const std::vector<double>& axis) {
  return axis.size() > 1 ? axis[1] - axis[0] : 0.0;
}

/// Index of the pair (n, n') with n <= n' in a triangular table of size d.
inline int pair_index(int n, int np, int dim) { return n * dim - n * (n - 1) / 2 + (np - n); }

/// Recurrence coefficients for the normalized Laguerre functions
///   l_n^k(y) = sqrt(n!/(n+k)!) y^{k/2} e^{-y/2} L_n^k(y),
///   l_{n+1}^k = ((2n+1+k-y) l_n^k - sqrt(n(n+k)) l_{n-1}^k) / sqrt((n+1)(n+1+k)),
/// stored per pair index.
struct LaguerreTable {
  int dim = 0;
  std::vector<double> c0, c1, inv;  ///< 2n+1+k, sqrt(n(n+k)), 1/sqrt((n+1)(n+1+k))
  std::vector<double> half_lgamma;  ///< lgamma(k+1)/2

  explicit LaguerreTable(int d) : dim(d) {
    const auto np = static_cast<std::size_t>(d * (d + 1) / 2);
    c0.resize(np);
    c1.resize(np);
    inv.resize(np);
    half_lgamma.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      half_lgamma[static_cast<std::size_t>(k)] = 0.5 * std::lgamma(k + 1.0);
      for (int n = 0; n + k < d; ++n) {
        const auto q = static_cast<std::size_t>(pair_index(n, n + k, d));
        c0[q] = 2.0 * n + 1.0 + k;
        c1[q] = std::sqrt(static_cast<double>(n) * (n + k));
        inv[q] = 1.0 / std::sqrt((n + 1.0) * (n + 1.0 + k));
      }
    }
  }
};

/// Radial parts R_{n,n+k}(r) = (1/pi) (-1)^n l_n^k(2 r^2) for all pairs.
inline void radial_kernels(const LaguerreTable& t, double r, double* out) {
  const int dim = t.dim;
  const double y = 2.0 * r * r;
  const double log_y = y > 0.0 ? std::log(y) : 0.0;
  for (int k = 0; k < dim; ++k) {
    double l_prev = 0.0;
    double l_cur = y > 0.0 ? std::exp(0.5 * k * log_y - 0.5 * y - t.half_lgamma[static_cast<std::size_t>(k)])
                           : (k == 0 ? 1.0 : 0.0);
    for (int n = 0; n + k < dim; ++n) {
      const auto q = static_cast<std::size_t>(pair_index(n, n + k, dim));
      out[q] = ((n % 2 == 0) ? l_cur : -l_cur) / std::numbers::pi;
      const double l_next = ((t.c0[q] - y) * l_cur - t.c1[q] * l_prev) * t.inv[q];
      l_prev = l_cur;
      l_cur = l_next;
    }
  }
}

/// Wigner kernels K_{n,n'}(x,p) = R_{n,n'}(r) e^{i k phi} of |n><n'| for
/// all n <= n' < dim, k = n' - n, (r, phi) the polar form of (x, p).
inline void fock_kernels(const LaguerreTable& t, double x, double p, std::vector<cplx>& out,
                         std::vector<double>& radial) {
  const int dim = t.dim;
  out.resize(static_cast<std::size_t>(dim * (dim + 1) / 2));
  radial.resize(out.size());
  const double r = std::hypot(x, p);
  radial_kernels(t, r, radial.data());
  const cplx unit = r > 0.0 ? cplx{x / r, p / r} : cplx{1.0, 0.0};
  cplx phase = 1.0;
  for (int k = 0; k < dim; ++k) {
    for (int n = 0; n + k < dim; ++n) {
      const auto q = static_cast<std::size_t>(pair_index(n, n + k, dim));
      out[q] = radial[q] * phase;
    }
    phase *= unit;
  }
}

inline void fock_kernels(int dim, double x, double p, std::vector<cplx>& out) {
  const LaguerreTable t(dim);
  std::vector<double> radial;
  fock_kernels(t, x, p, out, radial);
}

/// Pair weights so that W = Re sum_pairs weight * K.
inline std::vector<cplx> pair_weights(const CorrelatedFockDensity& rho) {
  const int d = rho.dim();
  std::vector<cplx> w(static_cast<std::size_t>(d * (d + 1) / 2));
  for (int n = 0; n < d; ++n)
    for (int np = n; np < d; ++np)
      w[static_cast<std::size_t>(pair_index(n, np, d))] = (n == np ? 1.0 : 2.0) * rho(n, np);
  return w;
}

/// W(x, p) = Re sum_k e^{i k phi} sum_n weight_{n,n+k} R_{n,n+k}(r).
inline double wigner_value(const LaguerreTable& t, const std::vector<cplx>& weights, double x, double p,
                           std::vector<double>& radial) {
  const int dim = t.dim;
  radial.resize(weights.size());
  const double r = std::hypot(x, p);
  radial_kernels(t, r, radial.data());
  const cplx unit = r > 0.0 ? cplx{x / r, p / r} : cplx{1.0, 0.0};
  cplx phase = 1.0;
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    cplx b = 0.0;
    for (int n = 0; n + k < dim; ++n) {
      const auto q = static_cast<std::size_t>(pair_index(n, n + k, dim));
      b += weights[q] * radial[q];
    }
    s += (b * phase).real();
    phase *= unit;
  }
  return s;
}

}  // namespace detail

/// Single-point Wigner function by the Fock (displaced-parity) kernel.
inline double wigner_point(const CorrelatedFockDensity& rho, double x, double p) {
  if (rho.m() != 1) throw InvalidArgument("wigner_point: single-mode density required");
  const detail::LaguerreTable t(rho.dim());
  std::vector<double> radial;
  return detail::wigner_value(t, detail::pair_weights(rho), x, p, radial);
}

struct CharacteristicOptions {
  int radial_nodes = 600;
  double radial_extent = 0.0;  ///< 0 picks sqrt(2 dim) + 9
  int padding = 0;             ///< extra Fock levels for D(xi); 0 picks automatically
};

/// Wigner function through the characteristic function
///   chi(xi) = Tr[exp(xi a^dag - xi^* a) rho],
///   W_beta(beta) = pi^{-2} int chi(xi) exp(beta xi^* - beta^* xi) d^2 xi.
/// Writing xi = r e^{i phi}, chi = sum_k c_k(r) e^{i k phi}; the angular
/// integral is 2 pi e^{i k theta} J_k(2|beta| r), leaving a radial Hankel
/// transform done by Gauss-Legendre. D(r) = exp(r (a^dag - a)) comes from an
/// eigendecomposition in a padded Fock space. Returns W(x, p) = W_beta / 2.
inline double wigner_characteristic(const CorrelatedFockDensity& rho, double x, double p,
                                    const CharacteristicOptions& opt = {}) {
  if (rho.m() != 1) throw InvalidArgument("wigner_characteristic: single-mode density required");
  const int d = rho.dim();
  const double extent = opt.radial_extent > 0.0 ? opt.radial_extent : std::sqrt(2.0 * d) + 9.0;
  const int pad = opt.padding > 0 ? opt.padding
                                  : d + static_cast<int>(std::ceil(extent * extent + 10.0 * extent)) + 30;

  // a^dag - a = D (-i T) D^{-1} with D = diag(i^n), T[n-1,n] = sqrt(n).
  Eigen::VectorXd sub(pad - 1);
  for (int n = 1; n < pad; ++n) sub[n - 1] = std::sqrt(static_cast<double>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(Eigen::VectorXd::Zero(pad), sub, Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd V = es.eigenvectors().topRows(d);
  const Eigen::VectorXd lam = es.eigenvalues();
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  const cplx beta = cplx{x, p} / std::sqrt(2.0);
  const double bmag = std::abs(beta);
  const double btheta = std::arg(beta);
  const auto rule = gauss_legendre(opt.radial_nodes, 0.0, extent);

  cplx total = 0.0;
  Eigen::VectorXcd phase(pad);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double r = rule.nodes[q];
    for (int j = 0; j < pad; ++j) phase[j] = std::polar(1.0, -lam[j] * r);
    // E[m,n] = i^m (V e^{-i lam r} V^T)[m,n] i^{-n}
    const Eigen::MatrixXcd E = V.cast<cplx>() * phase.asDiagonal() * V.transpose().cast<cplx>();
    for (int k = -(d - 1); k <= d - 1; ++k) {
      cplx ck = 0.0;
      for (int n = std::max(0, -k); n < d && n + k < d; ++n) {
        const int m = n + k;
        const cplx e = kIPow[m % 4] * E(m, n) * std::conj(kIPow[n % 4]);
        ck += rho(n, m) * e;
      }
      const int ak = std::abs(k);
      double jk = std::cyl_bessel_j(static_cast<double>(ak), 2.0 * bmag * r);
      if (k < 0 && (ak % 2 == 1)) jk = -jk;
      total += rule.weights[q] * r * ck * jk * std::polar(1.0, k * btheta);
    }
  }
  const cplx w_beta = (2.0 / std::numbers::pi) * total;
  return 0.5 * w_beta.real();
}

struct WignerGrid {
  std::vector<double> x_axis;
  std::vector<double> p_axis;
  Eigen::MatrixXd values;  ///< values(i, j) = W(x_axis[i], p_axis[j])
  double dx = 0.0;
  double dp = 0.0;
  std::string convention = "W(x,p) with beta=(x+ip)/sqrt(2), int W dx dp = 1, W_beta = 2W, d2beta = dx dp/2";

  double integral() const { return values.sum() * dx * dp; }
};

/// Evaluates W on the tensor grid x_axis x p_axis by the Fock kernel. Throws
/// GridError when the grid misses more than `coverage_tol` of the norm.
inline WignerGrid wigner(const CorrelatedFockDensity& rho, std::vector<double> x_axis, std::vector<double> p_axis,
                         double coverage_tol = 1e-3) {
  if (rho.m() != 1) throw InvalidArgument("wigner: single-mode density required");
  WignerGrid g;
  g.x_axis = std::move(x_axis);
  g.p_axis = std::move(p_axis);
  g.dx = detail::axis_step(g.x_axis);
  g.dp = detail::axis_step(g.p_axis);
  const auto nx = static_cast<Eigen::Index>(g.x_axis.size());
  const auto np = static_cast<Eigen::Index>(g.p_axis.size());
  g.values = Eigen::MatrixXd::Zero(nx, np);
  const auto weights = detail::pair_weights(rho);
  const detail::LaguerreTable table(rho.dim());
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    std::vector<double> radial;
    for (Eigen::Index j = 0; j < np; ++j)
      g.values(static_cast<Eigen::Index>(i), j) =
          detail::wigner_value(table, weights, g.x_axis[i], g.p_axis[static_cast<std::size_t>(j)], radial);
  });
  const double norm = g.integral();
  if (std::abs(norm - rho.trace()) > coverage_tol)
    throw GridError("Wigner grid captures " + std::to_string(norm) + " of the norm; enlarge the axes");
  return g;
}

/// N = int (|W_beta| - W_beta) d^2 beta = int (|W| - W) dx dp.
inline double negativity(const WignerGrid& g) {
  return (g.values.cwiseAbs() - g.values).sum() * g.dx * g.dp;
}

namespace detail {

/// pi int W (-(1/2) laplacian - 1) W dx dp with the 3-point Laplacian of
/// spacing `stride` grid steps, over nodes at least `stride` from the edge.
inline double macroscopicity_with_stride(const WignerGrid& g, int stride) {
  const auto& W = g.values;
  const double hx = stride * g.dx;
  const double hp = stride * g.dp;
  double s = 0.0;
  for (Eigen::Index i = stride; i + stride < W.rows(); ++i)
    for (Eigen::Index j = stride; j + stride < W.cols(); ++j) {
      const double lap = (W(i + stride, j) - 2.0 * W(i, j) + W(i - stride, j)) / (hx * hx) +
                         (W(i, j + stride) - 2.0 * W(i, j) + W(i, j - stride)) / (hp * hp);
      s += W(i, j) * (-0.5 * lap - W(i, j));
    }
  return std::numbers::pi * s * g.dx * g.dp;
}

inline void check_macroscopicity_grid(const WignerGrid& g) {
  if (g.dx > 0.1 + 1e-12 || g.dp > 0.1 + 1e-12)
    throw GridError("macroscopicity needs phase-space steps <= 0.1");
}

}  // namespace detail

/// M = (pi/2) int W_beta (-d^2/(d beta d beta^*) - 1) W_beta d^2 beta
///   = pi int W (-(1/2) laplacian - 1) W dx dp
/// with second-order central differences on the interior nodes.
inline double macroscopicity(const WignerGrid& g) {
  detail::check_macroscopicity_grid(g);
  return detail::macroscopicity_with_stride(g, 1);
}

struct MacroscopicityEstimate {
  double value = 0.0;
  double error = 0.0;  ///< |M_2h - M_h| / 3, the leading h^2 error of M_h
};

/// macroscopicity() together with its discretization error, estimated from
/// the same grid with the stencil spacing doubled.
inline MacroscopicityEstimate macroscopicity_estimate(const WignerGrid& g) {
  detail::check_macroscopicity_grid(g);
  const double m1 = detail::macroscopicity_with_stride(g, 1);
  const double m2 = detail::macroscopicity_with_stride(g, 2);
  return {m1, std::abs(m2 - m1) / 3.0};
}

/// Fock-space form of the same integral, Tr(rho^2 n) - Tr(rho a rho a^dag),
/// from W_{a rho a^dag + a^dag rho a - a^dag a rho - rho a a^dag} = d^2 W/(d beta d beta^*).
inline double macroscopicity_fock(const CorrelatedFockDensity& rho) {
  if (rho.m() != 1) throw InvalidArgument("macroscopicity_fock: single-mode density required");
  const int d = rho.dim();
  const Eigen::MatrixXcd& r = rho.matrix();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Eigen::VectorXd n_diag(d);
  for (int n = 0; n < d; ++n) n_diag[n] = n;
  const double t1 = (r * r * n_diag.asDiagonal()).trace().real();
  const double t2 = (r * a * r * a.adjoint()).trace().real();
  return t1 - t2;
}

struct PhaseAxes {
  std::vector<double> x;
  std::vector<double> p;
};

/// Two-mode Wigner function W(x_b, p_b, x_c, p_c) of a replicated m=2 density,
/// flattened as values[((ixb * npb + ipb) * nxc + ixc) * npc + ipc].
struct TwoModeWignerGrid {
  PhaseAxes first;
  PhaseAxes second;
  std::vector<double> values;
  double cell = 0.0;  ///< dx_b dp_b dx_c dp_c

  double integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell;
  }
};

namespace detail {

/// Kernel table with one row per grid point of `axes`, one column per pair.
inline Eigen::MatrixXcd kernel_table(int dim, const PhaseAxes& axes) {
  const auto nx = axes.x.size();
  const auto np = axes.p.size();
  Eigen::MatrixXcd table(static_cast<Eigen::Index>(nx * np), dim * (dim + 1) / 2);
  const LaguerreTable lt(dim);
  parallel_for(nx, [&](std::size_t i) {
    std::vector<cplx> k;
    std::vector<double> radial;
    for (std::size_t j = 0; j < np; ++j) {
      fock_kernels(lt, axes.x[i], axes.p[j], k, radial);
      const auto row = static_cast<Eigen::Index>(i * np + j);
      for (std::size_t q = 0; q < k.size(); ++q) table(row, static_cast<Eigen::Index>(q)) = k[q];
    }
  });
  return table;
}

/// Visits W in row blocks of the first mode's grid: visit(first_row, block)
/// with block(r, s) = W(first point first_row + r, second point s).
template <class Visit>
void two_mode_blocks(const CorrelatedFockDensity& rho, const PhaseAxes& first, const PhaseAxes& second,
                     Visit&& visit) {
  if (rho.m() != 2) throw InvalidArgument("two-mode Wigner: m=2 density required");
  const int d = rho.dim();
  const Eigen::MatrixXcd kb = kernel_table(d, first);
  const Eigen::MatrixXcd kc = kernel_table(d, second);
  const auto w = pair_weights(rho);
  Eigen::VectorXcd wv(static_cast<Eigen::Index>(w.size()));
  for (std::size_t q = 0; q < w.size(); ++q) wv[static_cast<Eigen::Index>(q)] = w[q];
  // W = Re( Kb diag(w) Kc^T ): pair (n,n') contributes rho[n,n'] K(beta_b) K(beta_c).
  const Eigen::MatrixXcd kcw = (kc * wv.asDiagonal()).transpose();
  constexpr Eigen::Index kBlock = 512;
  for (Eigen::Index r0 = 0; r0 < kb.rows(); r0 += kBlock) {
    const Eigen::Index rows = std::min(kBlock, kb.rows() - r0);
    const Eigen::MatrixXd block = (kb.middleRows(r0, rows) * kcw).real();
    visit(r0, block);
  }
}

}  // namespace detail

inline TwoModeWignerGrid wigner_two_mode(const CorrelatedFockDensity& rho, PhaseAxes first, PhaseAxes second) {
  TwoModeWignerGrid g;
  g.first = std::move(first);
  g.second = std::move(second);
  g.cell = detail::axis_step(g.first.x) * detail::axis_step(g.first.p) * detail::axis_step(g.second.x) *
           detail::axis_step(g.second.p);
  const std::size_t n2 = g.second.x.size() * g.second.p.size();
  g.values.assign(g.first.x.size() * g.first.p.size() * n2, 0.0);
  detail::two_mode_blocks(rho, g.first, g.second, [&](Eigen::Index r0, const Eigen::MatrixXd& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r)
      for (Eigen::Index s = 0; s < block.cols(); ++s)
        g.values[static_cast<std::size_t>(r0 + r) * n2 + static_cast<std::size_t>(s)] = block(r, s);
  });
  return g;
}

inline double negativity(const TwoModeWignerGrid& g) {
  double s = 0.0;
  for (double v : g.values) s += std::abs(v) - v;
  return s * g.cell;
}

struct TwoModeNegativity {
  double negativity = 0.0;
  double integral = 0.0;
};

/// Negativity of the two-mode Wigner function without storing the 4-D grid.
inline TwoModeNegativity two_mode_negativity(const CorrelatedFockDensity& rho, const PhaseAxes& first,
                                             const PhaseAxes& second) {
  const double cell = detail::axis_step(first.x) * detail::axis_step(first.p) * detail::axis_step(second.x) *
                      detail::axis_step(second.p);
  TwoModeNegativity out;
  detail::two_mode_blocks(rho, first, second, [&](Eigen::Index, const Eigen::MatrixXd& block) {
    out.negativity += (block.cwiseAbs() - block).sum();
    out.integral += block.sum();
  });
  out.negativity *= cell;
  out.integral *= cell;
  return out;
}

struct PolarGridSpec {
  double radius = 0.0;  ///< 0 picks sqrt(2 dim) + 4
  int radial_points = 0;  ///< 0 picks max(160, 4 dim)
  int angle_points = 0;   ///< 0 picks max(96, 3 dim)
};

/// Two-mode negativity through the angular reduction of the product kernel.
/// Each pair (n, n+k) carries the phase e^{i k (phi_b + phi_c)}, so W depends
/// on (r_b, r_c, Phi = phi_b + phi_c) only and
///   int f(W) d^4 = 2 pi int r_b dr_b int r_c dr_c int_0^{2 pi} dPhi f(W).
/// Midpoint rule in both radii, uniform nodes in Phi.
inline TwoModeNegativity two_mode_negativity_polar(const CorrelatedFockDensity& rho, PolarGridSpec spec = {}) {
  if (rho.m() != 2) throw InvalidArgument("two-mode negativity: m=2 density required");
  const int d = rho.dim();
  const double radius = spec.radius > 0.0 ? spec.radius : std::sqrt(2.0 * d) + 4.0;
  const int nr = spec.radial_points > 0 ? spec.radial_points : std::max(160, 4 * d);
  const int na = spec.angle_points > 0 ? spec.angle_points : std::max(96, 3 * d);
  const double h = radius / nr;
  const detail::LaguerreTable table(d);
  const auto npairs = static_cast<std::size_t>(d * (d + 1) / 2);
  std::vector<double> radial(static_cast<std::size_t>(nr) * npairs);
  for (int i = 0; i < nr; ++i) detail::radial_kernels(table, (i + 0.5) * h, radial.data() + i * npairs);
  const auto w = detail::pair_weights(rho);

  // phases[a * d + k] = e^{i k Phi_a}
  std::vector<cplx> phases(static_cast<std::size_t>(na) * d);
  for (int a = 0; a < na; ++a)
    for (int k = 0; k < d; ++k)
      phases[static_cast<std::size_t>(a * d + k)] = std::polar(1.0, 2.0 * std::numbers::pi * a * k / na);

  std::vector<double> neg_rows(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> int_rows(static_cast<std::size_t>(nr), 0.0);
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t i) {
    std::vector<cplx> coeff(static_cast<std::size_t>(d));
    const double* ri = radial.data() + i * npairs;
    double neg = 0.0, tot = 0.0;
    for (int j = 0; j < nr; ++j) {
      const double* rj = radial.data() + static_cast<std::size_t>(j) * npairs;
      for (int k = 0; k < d; ++k) {
        cplx b = 0.0;
        for (int n = 0; n + k < d; ++n) {
          const auto q = static_cast<std::size_t>(detail::pair_index(n, n + k, d));
          b += w[q] * (ri[q] * rj[q]);
        }
        coeff[static_cast<std::size_t>(k)] = b;
      }
      double neg_j = 0.0, tot_j = 0.0;
      for (int a = 0; a < na; ++a) {
        double v = 0.0;
        const cplx* ph = phases.data() + static_cast<std::size_t>(a) * d;
        for (int k = 0; k < d; ++k) v += (coeff[static_cast<std::size_t>(k)] * ph[k]).real();
        neg_j += std::abs(v) - v;
        tot_j += v;
      }
      const double rr = (i + 0.5) * h * (j + 0.5) * h;
      neg += rr * neg_j;
      tot += rr * tot_j;
    }
    neg_rows[i] = neg;
    int_rows[i] = tot;
  });
  const double measure = 2.0 * std::numbers::pi * h * h * (2.0 * std::numbers::pi / na);
  TwoModeNegativity out;
  for (int i = 0; i < nr; ++i) {
    out.negativity += neg_rows[static_cast<std::size_t>(i)];
    out.integral += int_rows[static_cast<std::size_t>(i)];
  }
  out.negativity *= measure;
  out.integral *= measure;
  return out;
}

/// Square axes for the two-mode grid: radius sqrt(2 dim) + 3, `points` nodes.
inline PhaseAxes default_two_mode_axes(int dim, int points = 41) {
  const double radius = std::sqrt(2.0 * dim) + 3.0;
  return {uniform_axis(-radius, radius, points), uniform_axis(-radius, radius, points)};
}

}  // namespace ntpsd
