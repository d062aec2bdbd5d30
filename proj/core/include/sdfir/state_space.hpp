#pragma once

#include "sdfir/numerics.hpp"

#include <optional>
#include <span>

namespace sdfir {

enum class TimeDomain { Continuous, Discrete };

enum class Sign { Plus, Minus };

/// Linear time-invariant system (A, B, C, D). Discrete-time systems carry
/// their sample period; continuous-time systems do not. A zero-state
/// realization (n = 0) is a static gain.
class StateSpace {
 public:
  StateSpace(Matrix a, Matrix b, Matrix c, Matrix d, TimeDomain domain,
             std::optional<double> sample_period = std::nullopt);

  static StateSpace continuous(Matrix a, Matrix b, Matrix c, Matrix d);
  static StateSpace discrete(Matrix a, Matrix b, Matrix c, Matrix d,
                             double sample_period);
  static StateSpace static_gain(Matrix d, TimeDomain domain,
                                std::optional<double> sample_period = std::nullopt);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }

  Index states() const { return a_.rows(); }
  Index inputs() const { return b_.cols(); }
  Index outputs() const { return c_.rows(); }

  TimeDomain domain() const { return domain_; }
  bool is_discrete() const { return domain_ == TimeDomain::Discrete; }
  /// Present iff the system is discrete-time.
  std::optional<double> sample_period() const { return sample_period_; }

  /// Discrete: spectral radius < 1 - 1e-9. Continuous: max Re lambda < -1e-9.
  bool is_stable() const;
  bool is_strictly_proper() const { return d_.isZero(0.0); }

 private:
  Matrix a_, b_, c_, d_;
  TimeDomain domain_;
  std::optional<double> sample_period_;
};

inline constexpr double kStabilityMargin = 1e-9;

/// G1 +/- G2 (parallel connection).
StateSpace add(const StateSpace& g1, const StateSpace& g2, Sign sign = Sign::Plus);

/// G1 * G2: the output of G2 feeds the input of G1.
StateSpace series(const StateSpace& g1, const StateSpace& g2);

/// Zero-order-hold discretization with a single augmented exponential.
StateSpace zoh_discretize(const StateSpace& g, double period);

/// C (pI - A)^{-1} B + D evaluated at the complex point p.
CMatrix freq_response(const StateSpace& g, Complex point);

/// Realization of z^{-d} G, with d p-dimensional shift registers placed on
/// the output.
StateSpace delay_augment(const StateSpace& g, int d);

/// Controllable canonical realization of num(s)/den(s) (coefficients in
/// descending powers). The denominator degree must be at least that of the
/// numerator.
StateSpace from_transfer_function(std::span<const double> num,
                                  std::span<const double> den);

/// Same as from_transfer_function but discrete-time in z.
StateSpace from_transfer_function(std::span<const double> num,
                                  std::span<const double> den,
                                  double sample_period);

/// c * G
StateSpace scale(const StateSpace& g, double c);

/// Repeated evaluation of C (zI - A)^{-1} B + D. A is reduced to upper
/// Hessenberg form once, so each point costs O(n^2 (1 + inputs)).
class ResponseEvaluator {
 public:
  explicit ResponseEvaluator(const StateSpace& g);

  CMatrix operator()(Complex point) const;
  /// Largest singular value of the response at e^{j theta}.
  double sigma_max_on_circle(double theta) const;

 private:
  Matrix h_;
  CMatrix bq_;  // Q^T B
  CMatrix cq_;  // C Q
  CMatrix d_;
};

/// Largest singular value of a complex matrix (0 for empty matrices).
double sigma_max(const CMatrix& m);

/// Orthonormal basis (n x r) of the controllable subspace of (A, B), built
/// by block Arnoldi with rank-revealing QR. Directions whose residual falls
/// below rel_tol times the scale of [A B] are treated as uncontrollable.
Matrix controllable_basis(const Matrix& a, const Matrix& b, double rel_tol = 1e-10);

}  // namespace sdfir
