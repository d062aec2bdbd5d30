#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace sdfir {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Throws DimensionError if `m` is not square. `what` names the argument.
void require_square(const Matrix& m, const char* what);

/// Throws NumericError if any entry of `m` is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

bool all_finite(const Matrix& m);

/// Matrix exponential e^M (scaling-and-squaring with Pade approximants).
Matrix expm(const Matrix& m);

/// max |lambda_i(M)|. Empty matrices have spectral radius 0.
double spectral_radius(const Matrix& m);

/// max Re lambda_i(M); -infinity for an empty matrix.
double spectral_abscissa(const Matrix& m);

/// Outcome of a positive-definiteness test by Cholesky factorization.
struct CholeskyResult {
  std::optional<Matrix> lower;  // L with L L^T = M, present iff M is PD
  Index failed_pivot = 0;       // 1-based pivot that failed; 0 on success

  bool positive_definite() const { return lower.has_value(); }
};

/// Cholesky factorization of a symmetric matrix. The input is symmetrized
/// as (M + M^T)/2 first; relative asymmetry above `asymmetry_tol` is
/// rejected with ParameterError.
CholeskyResult cholesky_pd(const Matrix& m, double asymmetry_tol = 1e-8);

/// (M + M^T) / 2
Matrix symmetrize(const Matrix& m);

/// W solving A W A^T - W + Q = 0 for Schur-stable A (Smith doubling).
Matrix discrete_lyapunov(const Matrix& a, const Matrix& q);

/// Integer power of a square matrix by repeated squaring.
Matrix matrix_power(const Matrix& m, int exponent);

}  // namespace sdfir
