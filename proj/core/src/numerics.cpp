#include "sdfir/numerics.hpp"

#include "sdfir/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <sstream>

namespace sdfir {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Dimension: return "DimensionError";
    case ErrorCode::Parameter: return "ParameterError";
    case ErrorCode::Numeric: return "NumericError";
    case ErrorCode::Interconnection: return "InterconnectionError";
    case ErrorCode::PoleEvaluation: return "PoleEvaluationError";
    case ErrorCode::Stability: return "StabilityError";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Solver: return "SolverError";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Invariant: return "InvariantError";
  }
  return "Error";
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str(), what);
  }
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string(what) + " has non-finite entries", what);
  }
}

Matrix expm(const Matrix& m) {
  require_square(m, "expm argument");
  require_finite(m, "expm argument");
  if (m.rows() == 0) return m;
  Matrix result = m.exp();
  require_finite(result, "expm result");
  return result;
}

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius argument");
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigenvalue iteration did not converge for " << m.rows() << "x"
       << m.cols() << " matrix (norm " << m.norm() << ")";
    throw NumericError(os.str());
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_abscissa(const Matrix& m) {
  require_square(m, "spectral_abscissa argument");
  if (m.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().real().maxCoeff();
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

CholeskyResult cholesky_pd(const Matrix& m, double asymmetry_tol) {
  require_square(m, "cholesky_pd argument");
  require_finite(m, "cholesky_pd argument");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > asymmetry_tol * scale) {
    std::ostringstream os;
    os << "matrix is not symmetric (relative asymmetry " << asym / scale << ")";
    throw ParameterError(os.str());
  }

  const Index n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  const Matrix s = symmetrize(m);
  for (Index j = 0; j < n; ++j) {
    double d = s(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) return CholeskyResult{std::nullopt, j + 1};
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (s(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return CholeskyResult{std::move(l), 0};
}

Matrix matrix_power(const Matrix& m, int exponent) {
  require_square(m, "matrix_power argument");
  if (exponent < 0) throw ParameterError("matrix_power exponent must be >= 0");
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  Matrix base = m;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Matrix discrete_lyapunov(const Matrix& a, const Matrix& q) {
  require_square(a, "A");
  require_square(q, "Q");
  if (q.rows() != a.rows()) throw DimensionError("Lyapunov operands differ in size");
  if (a.rows() > 0 && !(spectral_radius(a) < 1.0)) {
    throw NumericError("discrete Lyapunov equation needs a Schur-stable A");
  }
  // Smith doubling: W_{k+1} = W_k + A_k W_k A_k^T, A_{k+1} = A_k^2.
  Matrix w = symmetrize(q);
  Matrix ak = a;
  for (int it = 0; it < 64; ++it) {
    const Matrix step = ak * w * ak.transpose();
    w += step;
    ak = ak * ak;
    if (step.norm() <= 1e-17 * w.norm() || ak.norm() == 0.0) break;
  }
  return symmetrize(w);
}

}  // namespace sdfir
