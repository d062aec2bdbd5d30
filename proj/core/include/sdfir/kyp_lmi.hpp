#pragma once

#include "sdfir/error_system.hpp"
#include "sdfir/sdp.hpp"

namespace sdfir {

// Symmetric n x n matrices are packed column-major over the lower triangle.
// The variable for an off-diagonal entry (i, j) multiplies
// e_i e_j^T + e_j e_i^T, a diagonal one multiplies e_i e_i^T, so
// unvech(vech(X)) == X.
Index vech_size(Index n);
/// Position of X(i, j) (either triangle) in vech(X).
Index vech_index(Index n, Index i, Index j);
Vector vech(const Matrix& x);
Matrix unvech(const Vector& packed, Index n);

/// Balanced coordinates for the minimal part of a realization: states are
/// restricted to the controllable subspace of (A, B), then balanced against
/// the observability Gramian of all output maps `c_all` (stacked rows), and
/// directions with Hankel singular value below rel_tol * sigma_1 are dropped.
/// x_reduced = to_reduced * x, and x ~ from_reduced * x_reduced.
struct StateCoordinates {
  Matrix to_reduced;    // r x n
  Matrix from_reduced;  // n x r
  Vector hankel;        // kept Hankel singular values
  Index states() const { return to_reduced.rows(); }
};

StateCoordinates minimal_coordinates(const Matrix& a, const Matrix& b, const Matrix& c_all,
                                     double rel_tol = 1e-12);

/// Bounded-real LMI for FIR synthesis over x = (gamma, a_0..a_{M-1}, vech X):
///   [A'XA - X   A'XB         C(a)' ]
///   [B'XA       B'XB - gI    D(a)' ]  < 0,     -X < 0.
///   [C(a)       D(a)         -gI   ]
/// (A, B, C(a)) are first expressed in minimal_coordinates over every
/// coefficient's output map. The dropped modes cannot affect E(a) for any a;
/// kept in the LMI they would give X (near-)recession directions along which
/// the barrier is unbounded or hopelessly ill-conditioned.
struct KypDesignProblem {
  LmiProblem problem;
  StateCoordinates coords;
  Index states = 0;  // size of X
  Index taps = 0;

  static constexpr Index gamma_index = 0;
  static constexpr Index coeff_offset = 1;
  Index x_offset() const { return coeff_offset + taps; }

  /// (gamma, 0, x_scale * vech(I)).
  Vector start_point(double gamma, double x_scale = 1.0) const;
  std::vector<double> coefficients(const Vector& x) const;
  Matrix lyapunov(const Vector& x) const;
};

KypDesignProblem make_kyp_design_problem(const AffineErrorSystem& e);

/// Same LMI for a fixed system and fixed gamma (also in minimal
/// coordinates); the variables are vech(X), the objective is zero. Systems
/// without a minimal state yield a problem with no variables.
LmiProblem make_kyp_feasibility_problem(const StateSpace& g, double gamma);

}  // namespace sdfir
