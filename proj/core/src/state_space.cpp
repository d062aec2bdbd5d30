#include "sdfir/state_space.hpp"

#include "sdfir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace sdfir {
namespace {

std::string dims(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_compatible_domains(const StateSpace& g1, const StateSpace& g2) {
  if (g1.domain() != g2.domain()) {
    throw InterconnectionError("cannot interconnect continuous- and discrete-time systems");
  }
  if (g1.is_discrete() && *g1.sample_period() != *g2.sample_period()) {
    std::ostringstream os;
    os << "sample periods differ (" << *g1.sample_period() << " vs "
       << *g2.sample_period() << ")";
    throw InterconnectionError(os.str());
  }
}

}  // namespace

StateSpace::StateSpace(Matrix a, Matrix b, Matrix c, Matrix d, TimeDomain domain,
                       std::optional<double> sample_period)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      domain_(domain),
      sample_period_(sample_period) {
  const Index n = a_.rows();
  if (a_.cols() != n || b_.rows() != n || c_.cols() != n ||
      d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw DimensionError("inconsistent state-space dimensions: A " + dims(a_) +
                         ", B " + dims(b_) + ", C " + dims(c_) + ", D " + dims(d_));
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(d_, "D");
  if (domain_ == TimeDomain::Discrete) {
    if (!sample_period_ || !(*sample_period_ > 0.0) || !std::isfinite(*sample_period_)) {
      throw ParameterError("discrete-time system needs a positive sample period");
    }
  } else if (sample_period_) {
    throw ParameterError("continuous-time system cannot carry a sample period");
  }
}

StateSpace StateSpace::continuous(Matrix a, Matrix b, Matrix c, Matrix d) {
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d),
                    TimeDomain::Continuous);
}

StateSpace StateSpace::discrete(Matrix a, Matrix b, Matrix c, Matrix d,
                                double sample_period) {
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d),
                    TimeDomain::Discrete, sample_period);
}

StateSpace StateSpace::static_gain(Matrix d, TimeDomain domain,
                                   std::optional<double> sample_period) {
  const Index p = d.rows();
  const Index q = d.cols();
  return StateSpace(Matrix(0, 0), Matrix(0, q), Matrix(p, 0), std::move(d), domain,
                    sample_period);
}

bool StateSpace::is_stable() const {
  if (states() == 0) return true;
  if (is_discrete()) return spectral_radius(a_) < 1.0 - kStabilityMargin;
  return spectral_abscissa(a_) < -kStabilityMargin;
}

StateSpace add(const StateSpace& g1, const StateSpace& g2, Sign sign) {
  require_compatible_domains(g1, g2);
  if (g1.outputs() != g2.outputs() || g1.inputs() != g2.inputs()) {
    throw InterconnectionError("add: input/output dimensions differ");
  }
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  const Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = g1.A();
  a.bottomRightCorner(n2, n2) = g2.A();
  Matrix b(n1 + n2, g1.inputs());
  b << g1.B(), s * g2.B();
  Matrix c(g1.outputs(), n1 + n2);
  c << g1.C(), g2.C();
  Matrix d = g1.D() + s * g2.D();
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d),
                    g1.domain(), g1.sample_period());
}

StateSpace series(const StateSpace& g1, const StateSpace& g2) {
  require_compatible_domains(g1, g2);
  if (g1.inputs() != g2.outputs()) {
    std::ostringstream os;
    os << "series: G1 has " << g1.inputs() << " inputs but G2 has "
       << g2.outputs() << " outputs";
    throw InterconnectionError(os.str());
  }
  const Index n1 = g1.states(), n2 = g2.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n2, n2) = g2.A();
  a.bottomLeftCorner(n1, n2) = g1.B() * g2.C();
  a.bottomRightCorner(n1, n1) = g1.A();
  Matrix b(n1 + n2, g2.inputs());
  b << g2.B(), g1.B() * g2.D();
  Matrix c(g1.outputs(), n1 + n2);
  c << g1.D() * g2.C(), g1.C();
  Matrix d = g1.D() * g2.D();
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d),
                    g1.domain(), g1.sample_period());
}

StateSpace zoh_discretize(const StateSpace& g, double period) {
  if (g.is_discrete()) throw DomainError("zoh_discretize needs a continuous-time system");
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ParameterError("discretization period must be positive");
  }
  const Index n = g.states(), q = g.inputs();
  Matrix aug = Matrix::Zero(n + q, n + q);
  aug.topLeftCorner(n, n) = g.A() * period;
  aug.topRightCorner(n, q) = g.B() * period;
  const Matrix e = expm(aug);
  return StateSpace::discrete(e.topLeftCorner(n, n), e.topRightCorner(n, q), g.C(),
                              g.D(), period);
}

CMatrix freq_response(const StateSpace& g, Complex point) {
  const Index n = g.states();
  CMatrix d = g.D().cast<Complex>();
  if (n == 0) return d;
  CMatrix resolvent = -g.A().cast<Complex>();
  resolvent.diagonal().array() += point;
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  // PartialPivLU does not report singularity; check the pivots directly.
  const double scale = std::max(1.0, resolvent.cwiseAbs().maxCoeff());
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 1e-14 * scale)) {
    std::ostringstream os;
    os << "resolvent is singular at point (" << point.real() << ", " << point.imag() << ")";
    throw PoleEvaluationError(os.str());
  }
  return g.C().cast<Complex>() * lu.solve(g.B().cast<Complex>()) + d;
}

StateSpace delay_augment(const StateSpace& g, int d) {
  if (!g.is_discrete()) throw DomainError("delay_augment needs a discrete-time system");
  if (d < 0) throw ParameterError("delay must be nonnegative");
  if (d == 0) return g;
  const Index n = g.states(), p = g.outputs(), q = g.inputs();
  const Index total = n + d * p;
  Matrix a = Matrix::Zero(total, total);
  a.topLeftCorner(n, n) = g.A();
  a.block(n, 0, p, n) = g.C();
  for (int k = 1; k < d; ++k) {
    a.block(n + k * p, n + (k - 1) * p, p, p) = Matrix::Identity(p, p);
  }
  Matrix b = Matrix::Zero(total, q);
  b.topRows(n) = g.B();
  b.block(n, 0, p, q) = g.D();
  Matrix c = Matrix::Zero(p, total);
  c.rightCols(p) = Matrix::Identity(p, p);
  return StateSpace::discrete(std::move(a), std::move(b), std::move(c),
                              Matrix::Zero(p, q), *g.sample_period());
}

namespace {

StateSpace canonical_realization(std::span<const double> num, std::span<const double> den,
                                 TimeDomain domain, std::optional<double> period) {
  // Strip leading zeros so the degrees are meaningful.
  auto strip = [](std::span<const double> p) {
    std::size_t k = 0;
    while (k < p.size() && p[k] == 0.0) ++k;
    return std::vector<double>(p.begin() + static_cast<std::ptrdiff_t>(k), p.end());
  };
  std::vector<double> b = strip(num);
  std::vector<double> a = strip(den);
  if (a.empty()) throw ParameterError("denominator polynomial is zero");
  for (double v : a) {
    if (!std::isfinite(v)) throw ParameterError("denominator has non-finite coefficients");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw ParameterError("numerator has non-finite coefficients");
  }
  const std::size_t n = a.size() - 1;
  if (b.size() > a.size()) {
    throw ParameterError("transfer function is improper (numerator degree exceeds denominator degree)");
  }
  const double lead = a.front();
  for (double& v : a) v /= lead;
  for (double& v : b) v /= lead;
  // Pad numerator to n+1 coefficients.
  std::vector<double> bp(n + 1, 0.0);
  std::copy(b.begin(), b.end(), bp.begin() + static_cast<std::ptrdiff_t>(n + 1 - b.size()));

  const double d0 = bp[0];
  Matrix am = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  Matrix bm = Matrix::Zero(static_cast<Index>(n), 1);
  Matrix cm = Matrix::Zero(1, static_cast<Index>(n));
  // States x_1..x_n with x_{k+1} = x_k' ; last row carries -a coefficients.
  for (std::size_t k = 0; k + 1 < n; ++k) am(static_cast<Index>(k), static_cast<Index>(k + 1)) = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    am(static_cast<Index>(n - 1), static_cast<Index>(k)) = -a[n - k];
    cm(0, static_cast<Index>(k)) = bp[n - k] - d0 * a[n - k];
  }
  if (n > 0) bm(static_cast<Index>(n - 1), 0) = 1.0;
  Matrix dm(1, 1);
  dm(0, 0) = d0;
  return StateSpace(std::move(am), std::move(bm), std::move(cm), std::move(dm), domain, period);
}

}  // namespace

StateSpace from_transfer_function(std::span<const double> num, std::span<const double> den) {
  return canonical_realization(num, den, TimeDomain::Continuous, std::nullopt);
}

StateSpace from_transfer_function(std::span<const double> num, std::span<const double> den,
                                  double sample_period) {
  return canonical_realization(num, den, TimeDomain::Discrete, sample_period);
}

StateSpace scale(const StateSpace& g, double c) {
  return StateSpace(g.A(), g.B(), c * g.C(), c * g.D(), g.domain(), g.sample_period());
}

}  // namespace sdfir

namespace sdfir {

ResponseEvaluator::ResponseEvaluator(const StateSpace& g) : d_(g.D().cast<Complex>()) {
  const Index n = g.states();
  if (n == 0) {
    h_ = Matrix(0, 0);
    bq_ = CMatrix(0, g.inputs());
    cq_ = CMatrix(g.outputs(), 0);
    return;
  }
  Eigen::HessenbergDecomposition<Matrix> hd(g.A());
  h_ = hd.matrixH();
  const Matrix q = hd.matrixQ();
  bq_ = (q.transpose() * g.B()).cast<Complex>();
  cq_ = (g.C() * q).cast<Complex>();
}

CMatrix ResponseEvaluator::operator()(Complex point) const {
  const Index n = h_.rows();
  if (n == 0) return d_;
  // Solve (pI - H) X = Q^T B by Gaussian elimination with adjacent-row
  // pivoting; the subdiagonal is the only fill below the diagonal.
  CMatrix m = -h_.cast<Complex>();
  m.diagonal().array() += point;
  CMatrix x = bq_;
  const double scale = std::max(1.0, std::abs(point) + h_.cwiseAbs().maxCoeff());
  for (Index k = 0; k + 1 < n; ++k) {
    if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
      m.row(k).tail(n - k).swap(m.row(k + 1).tail(n - k));
      x.row(k).swap(x.row(k + 1));
    }
    if (m(k, k) == Complex(0.0)) continue;
    const Complex f = m(k + 1, k) / m(k, k);
    if (f != Complex(0.0)) {
      m.row(k + 1).tail(n - k) -= f * m.row(k).tail(n - k);
      x.row(k + 1) -= f * x.row(k);
    }
  }
  for (Index k = 0; k < n; ++k) {
    if (!(std::abs(m(k, k)) > 1e-14 * scale)) {
      std::ostringstream os;
      os << "resolvent is singular at point (" << point.real() << ", " << point.imag() << ")";
      throw PoleEvaluationError(os.str());
    }
  }
  m.triangularView<Eigen::Upper>().solveInPlace(x);
  return cq_ * x + d_;
}

double ResponseEvaluator::sigma_max_on_circle(double theta) const {
  return sigma_max((*this)(std::polar(1.0, theta)));
}

double sigma_max(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

Matrix controllable_basis(const Matrix& a, const Matrix& b, double rel_tol) {
  require_square(a, "A");
  if (b.rows() != a.rows()) throw DimensionError("B must have as many rows as A");
  const Index n = a.rows();
  const double scale = std::max({a.norm(), b.norm(), std::numeric_limits<double>::min()});
  const double tol = rel_tol * scale;

  Matrix basis(n, 0);
  // Orthonormalizes the new candidate columns against the basis (twice, for
  // stability) and appends the numerically independent part.
  auto extend = [&](Matrix w) -> Index {
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) {
      w -= basis * (basis.transpose() * w);
    }
    if (w.cols() == 0) return 0;
    Eigen::ColPivHouseholderQR<Matrix> qr(w);
    Index rank = 0;
    const Matrix r = qr.matrixR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < std::min(r.rows(), r.cols()); ++i) {
      if (std::abs(r(i, i)) > tol) ++rank;
    }
    rank = std::min(rank, n - basis.cols());
    if (rank == 0) return 0;
    const Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
    Matrix fresh = q;
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) {
      fresh -= basis * (basis.transpose() * fresh);
    }
    Eigen::HouseholderQR<Matrix> reorth(fresh);
    const Matrix qn = reorth.householderQ() * Matrix::Identity(n, rank);
    Matrix grown(n, basis.cols() + rank);
    grown << basis, qn;
    basis = std::move(grown);
    return rank;
  };

  Index added = extend(b);
  while (added > 0 && basis.cols() < n) {
    const Matrix latest = basis.rightCols(added);
    added = extend(a * latest);
  }
  return basis;
}

}  // namespace sdfir
