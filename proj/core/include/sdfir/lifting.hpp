#pragma once

#include "sdfir/fir.hpp"
#include "sdfir/state_space.hpp"

namespace sdfir {

/// A discrete-time system lifted by `factor`: `inner` runs at
/// factor * base_period and has factor times the inputs and outputs of the
/// original system.
struct LiftedSystem {
  StateSpace inner;
  int factor;
  double base_period;
};

/// Discrete-time lifting by N:
///   A^N | [A^{N-1}B ... B]
///   ----+------------------
///   [C; CA; ...; CA^{N-1}] | lower block Toeplitz with D on the diagonal
LiftedSystem lift(const StateSpace& g, int n);

/// H_N: column of N ones.
Matrix make_hold_vector(int n);

/// S_N: row [1, 0, ..., 0] of length N.
Matrix make_sample_row(int n);

/// blkdiag(1_p, ..., 1_p) with L blocks, p = N / L.
Matrix make_multirate_hold(int n, int l);

/// lift(realize_ss(K), L) restricted to its first input. The result runs at
/// L * K.tap_period() and has L outputs.
StateSpace lift_fir_polyphase(const FirFilter& k, int l);

}  // namespace sdfir
