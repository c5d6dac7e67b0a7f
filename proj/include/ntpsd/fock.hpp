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

// Fock-space building blocks shared by every other module: cutoffs, pure
// states and density matrices on the replicated ("correlated") basis
// |n>^{(x)m}, and the target states used for fidelities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ntpsd/error.hpp"

namespace ntpsd {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTolerance = 1e-8;

enum class Mode { a, b, c, p };

inline char mode_char(Mode m) {
  switch (m) {
    case Mode::a: return 'a';
    case Mode::b: return 'b';
    case Mode::c: return 'c';
    case Mode::p: return 'p';
  }
  return '?';
}

inline Mode mode_from_char(char c) {
  switch (c) {
    case 'a': return Mode::a;
    case 'b': return Mode::b;
    case 'c': return Mode::c;
    case 'p': return Mode::p;
    default: throw InvalidArgument(std::string("unknown mode label '") + c + "'");
  }
}

inline std::string mode_string(const std::vector<Mode>& modes) {
  std::string s;
  for (Mode m : modes) s.push_back(mode_char(m));
  return s;
}

/// Probability mass of Poisson(mean) strictly above `cutoff`, summed from
/// the tail so small values keep full relative precision.
inline double poisson_tail(double mean, int cutoff) {
  if (mean <= 0.0) return 0.0;
  double tail = 0.0;
  const double log_mean = std::log(mean);
  for (int n = cutoff + 1;; ++n) {
    const double term = std::exp(n * log_mean - mean - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term < 1e-20 * std::max(tail, 1e-300)) break;
    if (n > cutoff + 100000) break;
  }
  return std::min(tail, 1.0);
}

/// Smallest cutoff whose Poisson(mean) tail is below `tol`.
inline int poisson_cutoff(double mean, double tol) {
  int n = 0;
  while (poisson_tail(mean, n) > tol) ++n;
  return n;
}

struct FockCutoffs {
  int n_t_max = 1;  ///< max triplet occupation per mode
  int n_p_max = 1;  ///< max initial pump photon number

  static FockCutoffs make(int n_t_max, int n_p_max) {
    if (!(0 < n_t_max && n_t_max <= n_p_max))
      throw InvalidArgument("FockCutoffs: need 0 < n_t_max <= n_p_max, got n_t_max=" +
                            std::to_string(n_t_max) + ", n_p_max=" + std::to_string(n_p_max));
    return FockCutoffs{n_t_max, n_p_max};
  }

  /// Cutoffs sized for a coherent pump: n_p_max is the smallest value with
  /// tail mass below `tol`; n_t_max defaults to n_p_max (the full triplet
  /// space, since no block can convert more photons than it holds).
  static FockCutoffs for_pump(cplx alpha_p, std::optional<int> n_t_max = std::nullopt,
                              double tol = kDefaultTailTolerance) {
    const int np = std::max(1, poisson_cutoff(std::norm(alpha_p), tol));
    const int nt = n_t_max ? std::min(*n_t_max, np) : np;
    return make(nt, np);
  }

  /// Throws if Poisson(|alpha_p|^2) leaks more than `tol` beyond n_p_max.
  void check_tail(cplx alpha_p, double tol) const {
    const double tail = poisson_tail(std::norm(alpha_p), n_p_max);
    if (tail > tol)
      throw TruncationError("pump cutoff n_p_max=" + std::to_string(n_p_max) + " leaves tail mass " +
                            std::to_string(tail) + " > tolerance " + std::to_string(tol));
  }
};

class CorrelatedFockDensity;

/// Pure state sum_n amps[n] |n>^{(x)m}.
struct PureFockVector {
  int m = 1;
  Eigen::VectorXcd amps;

  int dim() const { return static_cast<int>(amps.size()); }
  double norm() const { return amps.norm(); }
  PureFockVector normalized() const { return {m, amps / amps.norm()}; }
  /// Zero-padded (or truncated) copy with `dim` entries.
  PureFockVector resized(int dim) const {
    PureFockVector out{m, Eigen::VectorXcd::Zero(dim)};
    const int keep = std::min(dim, this->dim());
    out.amps.head(keep) = amps.head(keep);
    return out;
  }
  CorrelatedFockDensity density() const;
};

inline std::vector<Mode> default_modes(int m) {
  switch (m) {
    case 1: return {Mode::a};
    case 2: return {Mode::b, Mode::c};
    case 3: return {Mode::a, Mode::b, Mode::c};
    default: throw InvalidArgument("replicated mode count must be 1, 2 or 3");
  }
}

/// Density matrix rho[n][n'] weighting |n>^{(x)m} <n'|^{(x)m}. The mode
/// labels record which physical modes the replicated index stands for.
class CorrelatedFockDensity {
 public:
  CorrelatedFockDensity() = default;
  CorrelatedFockDensity(std::vector<Mode> modes, Eigen::MatrixXcd rho)
      : modes_(std::move(modes)), rho_(std::move(rho)) {
    if (modes_.empty() || modes_.size() > 3) throw InvalidArgument("CorrelatedFockDensity: need 1-3 modes");
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
      throw InvalidArgument("CorrelatedFockDensity: matrix must be square and non-empty");
  }

  static CorrelatedFockDensity diagonal(std::vector<Mode> modes, const std::vector<double>& populations) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(populations.size()),
                                                  static_cast<Eigen::Index>(populations.size()));
    for (std::size_t i = 0; i < populations.size(); ++i)
      rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = populations[i];
    return {std::move(modes), std::move(rho)};
  }

  static CorrelatedFockDensity vacuum(int m, int dim = 1) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return {default_modes(m), std::move(rho)};
  }

  int m() const { return static_cast<int>(modes_.size()); }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const std::vector<Mode>& modes() const { return modes_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  cplx operator()(int n, int np) const { return rho_(n, np); }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  std::vector<double> populations() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int n = 0; n < dim(); ++n) p[static_cast<std::size_t>(n)] = rho_(n, n).real();
    return p;
  }

  CorrelatedFockDensity normalized() const {
    const double t = trace();
    if (!(t > 0.0)) throw InvalidArgument("cannot normalize a density with non-positive trace");
    return {modes_, rho_ / t};
  }

  /// Drops trailing basis states whose population is below `threshold`
  /// (relative to the trace). Coherences with those states are bounded by
  /// sqrt(population) and are dropped too.
  CorrelatedFockDensity trimmed(double threshold = 1e-16) const {
    const double t = std::abs(trace());
    int keep = dim();
    while (keep > 1 && std::abs(rho_(keep - 1, keep - 1).real()) <= threshold * t) --keep;
    return {modes_, rho_.topLeftCorner(keep, keep)};
  }

  /// Zero-padded copy with `dim` basis states (must not shrink).
  CorrelatedFockDensity padded(int new_dim) const {
    if (new_dim < dim()) throw InvalidArgument("padded: cannot shrink");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(new_dim, new_dim);
    rho.topLeftCorner(dim(), dim()) = rho_;
    return {modes_, std::move(rho)};
  }

  /// Checks the density-matrix invariants; throws InvalidArgument on failure.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-9, double eig_tol = 1e-8) const {
    if (hermiticity_error() > herm_tol) throw InvalidArgument("density matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > trace_tol) throw InvalidArgument("density matrix trace differs from 1");
    if (min_eigenvalue() < -eig_tol) throw InvalidArgument("density matrix has a negative eigenvalue");
  }

 private:
  std::vector<Mode> modes_;
  Eigen::MatrixXcd rho_;
};

inline CorrelatedFockDensity PureFockVector::density() const {
  return {default_modes(m), amps * amps.adjoint()};
}

struct CoherentAmplitudes {
  Eigen::VectorXcd amps;
  double tail_mass = 0.0;
};

/// Entries e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n = 0..cutoff.
inline CoherentAmplitudes coherent_amplitudes(cplx alpha, int cutoff, double tol = kDefaultTailTolerance) {
  if (cutoff < 0) throw InvalidArgument("coherent_amplitudes: negative cutoff");
  const double mean = std::norm(alpha);
  CoherentAmplitudes out{Eigen::VectorXcd::Zero(cutoff + 1), poisson_tail(mean, cutoff)};
  if (out.tail_mass > tol)
    throw TruncationError("coherent state |alpha|^2=" + std::to_string(mean) + " truncated at " +
                          std::to_string(cutoff) + " leaves tail mass " + std::to_string(out.tail_mass));
  if (mean == 0.0) {
    out.amps[0] = 1.0;
    return out;
  }
  const double r = std::abs(alpha);
  const double phi = std::arg(alpha);
  for (int n = 0; n <= cutoff; ++n) {
    const double mag = std::exp(-0.5 * mean + n * std::log(r) - 0.5 * std::lgamma(n + 1.0));
    out.amps[n] = std::polar(mag, n * phi);
  }
  return out;
}

/// Smallest cutoff that represents cat_state(alpha) with tail below `tol`.
inline int cat_cutoff(cplx alpha, double tol = 1e-8) {
  // Even cat populations are at most 2/(1+e^{-2|a|^2}) <= 2 times Poisson.
  return poisson_cutoff(std::norm(alpha), 0.5 * tol);
}

/// (|i alpha> + |-i alpha>) / sqrt(2 (1 + e^{-2|alpha|^2})), single mode.
inline PureFockVector cat_state(cplx alpha, int cutoff, double tol = 1e-8) {
  if (cutoff < 0) throw InvalidArgument("cat_state: negative cutoff");
  const double mean = std::norm(alpha);
  const double tail = 2.0 * poisson_tail(mean, cutoff);
  if (tail > tol)
    throw TruncationError("cat_state: cutoff " + std::to_string(cutoff) + " too small for |alpha|=" +
                          std::to_string(std::sqrt(mean)));
  PureFockVector cat{1, Eigen::VectorXcd::Zero(cutoff + 1)};
  const cplx ia = cplx{0, 1} * alpha;
  const double r = std::abs(ia);
  const double phi = std::arg(ia);
  const double norm = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * mean)));
  for (int n = 0; n <= cutoff; n += 2) {
    const double mag = n == 0 ? std::exp(-0.5 * mean)
                              : std::exp(-0.5 * mean + n * std::log(r) - 0.5 * std::lgamma(n + 1.0));
    cat.amps[n] = 2.0 * norm * std::polar(mag, n * phi);
  }
  return cat.normalized();
}

/// (|0,0> + |1,1>)/sqrt(2) on the two conditioned-out modes.
inline PureFockVector bell_target() {
  PureFockVector v{2, Eigen::VectorXcd::Zero(2)};
  v.amps << std::sqrt(0.5), std::sqrt(0.5);
  return v;
}

/// Three-level entangled target 0.63|00> + 0.613|11> + 0.423|22>,
/// renormalized (the quoted weights sum to 1.0015 in square).
inline PureFockVector qudit_target() {
  PureFockVector v{2, Eigen::VectorXcd::Zero(3)};
  v.amps << 0.63, 0.613, 0.423;
  return v.normalized();
}

}  // namespace ntpsd
