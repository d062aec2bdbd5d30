#pragma once

#include "sdfir/fir.hpp"
#include "sdfir/state_space.hpp"

#include <span>
#include <vector>

namespace sdfir {

/// One delayed term e^{-delay*h*s} G(s) of a (multi-)delay target.
struct DelayedTerm {
  int delay;
  StateSpace system;
};

/// Bookkeeping for an assembled error system. States are ordered
/// [target path | sampled characteristic | FIR shift register].
struct ErrorSystemLayout {
  Index target_states = 0;          // T1, including the m*N delay registers
  Index characteristic_states = 0;  // T2
  Index filter_states = 0;          // M - 1
  double period = 0.0;              // h
  int delay = 0;                    // m (single-term systems)
  int upsampling = 1;               // L
};

/// Fast-sample/hold error system E(a) = [A B; C(a) D(a)] with
///   C(a) = C0 + sum_k a_k C_lin[k],  D(a) = D0 + sum_k a_k D_lin[k].
/// A and B do not depend on the filter coefficients.
struct AffineErrorSystem {
  Matrix A;
  Matrix B;
  Matrix C0;
  std::vector<Matrix> C_lin;
  Matrix D0;
  std::vector<Matrix> D_lin;
  int taps = 0;    // M
  int factor = 0;  // N
  ErrorSystemLayout layout;

  Index states() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C0.rows(); }

  Matrix C(std::span<const double> a) const;
  Matrix D(std::span<const double> a) const;
  /// Discrete-time system E(a) at the slow period h.
  StateSpace realize(std::span<const double> a) const;
  StateSpace realize(const FirFilter& k) const { return realize(k.coeffs()); }
};

/// Single-rate E_N: the filter runs at period h with hold H_N.
AffineErrorSystem build_single_rate(const StateSpace& target, const StateSpace& characteristic,
                                    double h, int m, int taps, int n);

/// Multi-rate E_mr,N: the filter runs at h/L behind an L-fold upsampler with
/// the polyphase-lifted realization and hold blkdiag(1_p, ..., 1_p).
AffineErrorSystem build_multi_rate(const StateSpace& target, const StateSpace& characteristic,
                                   double h, int m, int taps, int l, int n);

/// Multi-rate error system for a target sum_i e^{-m_i h s} G_i(s).
AffineErrorSystem build_multi_rate_terms(std::span<const DelayedTerm> terms,
                                         const StateSpace& characteristic, double h,
                                         int taps, int l, int n);

/// Throws StabilityError / ParameterError when the pair cannot be used as a
/// design target and input characteristic.
void validate_design_systems(const StateSpace& target, const StateSpace& characteristic);

}  // namespace sdfir
