#pragma once

#include "sdfir/numerics.hpp"

#include <optional>
#include <vector>

namespace sdfir {

/// Rank-two symmetric term coef * (z_p z_q^T + z_q z_p^T) over a block's
/// vector pool.
struct Dyad {
  Index p;
  Index q;
  double coef;
};

/// Symmetric affine matrix function F(x) = F0 + sum_i x_i F_i, constrained
/// to F(x) < 0. Each F_i is held as a short list of dyads over a shared pool
/// of vectors, so structured coefficients (KYP blocks, unit patterns) stay
/// cheap; `coefficient(i)` materializes the dense matrix.
class AffineBlock {
 public:
  AffineBlock(Index dim, Index num_vars);

  Index dim() const { return dim_; }
  Index num_vars() const { return static_cast<Index>(terms_.size()); }

  const Matrix& constant() const { return f0_; }
  /// Symmetrized on assignment.
  void set_constant(const Matrix& f0);

  /// Adds z to the pool and returns its index.
  Index add_vector(const Vector& z);
  /// Pool index of the unit vector e_i (added on first use).
  Index unit_vector(Index i);
  void add_dyad(Index var, Index p, Index q, double coef);
  /// Replaces F_var by the symmetric part of `fi`.
  void set_coefficient(Index var, const Matrix& fi);

  Matrix coefficient(Index var) const;
  Matrix evaluate(const Vector& x) const;
  /// sum_i v_i F_i (no constant term).
  Matrix linear_part(const Vector& v) const;

  Index pool_size() const { return static_cast<Index>(pool_.size()); }
  const Vector& pool_vector(Index k) const { return pool_[static_cast<std::size_t>(k)]; }
  const std::vector<Dyad>& terms(Index var) const { return terms_[static_cast<std::size_t>(var)]; }

  /// Appends a decision variable with F_new = 0 and returns its index.
  Index add_variable();

 private:
  Index dim_;
  Matrix f0_;
  std::vector<Vector> pool_;
  std::vector<Index> unit_index_;
  std::vector<std::vector<Dyad>> terms_;
};

/// minimize c^T x subject to every block F_b(x) < 0.
struct LmiProblem {
  Index num_vars = 0;
  Vector objective;
  std::vector<AffineBlock> blocks;

  Index constraint_rows() const;
};

struct SolverOptions {
  double gap_tol = 1e-7;
  int max_newton = 200;
  double barrier_mult = 10.0;
  /// Strictness margin per unit of block dimension: blocks are required to
  /// satisfy F_b(x) <= -epsilon_margin * dim(b) * I.
  double epsilon_margin = 1e-8;
  /// Centering stops when lambda^2 / 2 falls below this.
  double newton_tol = 1e-7;
};

enum class SdpStatus { Optimal, Infeasible, MaxIter };

struct SdpResult {
  Vector x_opt;
  double objective_value = 0.0;
  SdpStatus status = SdpStatus::MaxIter;
  /// max_b lambda_max(F_b(x_opt)); negative when every block is strict.
  double max_block_eig = 0.0;
  int iterations = 0;         // Newton steps, both phases
  int phase1_iterations = 0;  // included in `iterations`
  /// c^T x after each completed centering of the optimization phase.
  std::vector<double> objective_history;
  /// Independent Cholesky check of -F_b(x_opt) - eps_b I on every block.
  bool certified = false;
};

enum class FeasibilityStatus { Feasible, Infeasible, Indeterminate };

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Indeterminate;
  Vector x;                // interior point when Feasible
  double phase1_value = 0;  // last auxiliary level t (max eigenvalue bound)
  int iterations = 0;
};

/// Barrier interior-point minimization. `start` is used directly when it is
/// strictly feasible; otherwise a Phase-I search starts from it (or from 0).
SdpResult solve_min(const LmiProblem& problem, const SolverOptions& opts = {},
                    std::optional<Vector> start = std::nullopt);

/// Phase-I search for a point with every block <= -eps_b I.
FeasibilityResult feasibility(const LmiProblem& problem, const SolverOptions& opts = {},
                              std::optional<Vector> start = std::nullopt);

/// The problem with variable `var` fixed at `value` (folded into F0) and
/// removed; later variables shift down by one.
LmiProblem fix_variable(const LmiProblem& problem, Index var, double value);

/// True when -F_b(x) - eps_b I passes cholesky_pd on every block.
bool certify(const LmiProblem& problem, const Vector& x, const SolverOptions& opts);

/// max_b lambda_max(F_b(x)).
double max_block_eigenvalue(const LmiProblem& problem, const Vector& x);

namespace detail {

/// Value, gradient and Hessian of sum_b -log det(-F_b(x) - eps_b I); value is
/// +infinity outside the domain. Exposed for derivative checks.
struct BarrierEval {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};
BarrierEval barrier_eval(const LmiProblem& problem, const Vector& x, const SolverOptions& opts);

}  // namespace detail

}  // namespace sdfir
