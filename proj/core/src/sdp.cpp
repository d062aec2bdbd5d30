#include "sdfir/sdp.hpp"

#include "sdfir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace sdfir {

// ---------------------------------------------------------------------------
// AffineBlock

AffineBlock::AffineBlock(Index dim, Index num_vars)
    : dim_(dim),
      f0_(Matrix::Zero(dim, dim)),
      unit_index_(static_cast<std::size_t>(dim), -1),
      terms_(static_cast<std::size_t>(num_vars)) {
  if (dim < 1) throw DimensionError("LMI block needs a positive dimension");
  if (num_vars < 0) throw DimensionError("negative variable count");
}

void AffineBlock::set_constant(const Matrix& f0) {
  if (f0.rows() != dim_ || f0.cols() != dim_) throw DimensionError("constant term has wrong size");
  require_finite(f0, "F0");
  f0_ = symmetrize(f0);
}

Index AffineBlock::add_vector(const Vector& z) {
  if (z.size() != dim_) throw DimensionError("pool vector has wrong length");
  require_finite(z, "pool vector");
  pool_.push_back(z);
  return static_cast<Index>(pool_.size()) - 1;
}

Index AffineBlock::unit_vector(Index i) {
  if (i < 0 || i >= dim_) throw DimensionError("unit vector index out of range");
  auto& slot = unit_index_[static_cast<std::size_t>(i)];
  if (slot < 0) slot = add_vector(Vector::Unit(dim_, i));
  return slot;
}

void AffineBlock::add_dyad(Index var, Index p, Index q, double coef) {
  if (var < 0 || var >= num_vars()) throw DimensionError("variable index out of range");
  if (p < 0 || q < 0 || p >= pool_size() || q >= pool_size()) {
    throw DimensionError("pool index out of range");
  }
  if (!std::isfinite(coef)) throw NumericError("dyad coefficient is not finite");
  if (coef == 0.0) return;
  terms_[static_cast<std::size_t>(var)].push_back(Dyad{p, q, coef});
}

void AffineBlock::set_coefficient(Index var, const Matrix& fi) {
  if (fi.rows() != dim_ || fi.cols() != dim_) throw DimensionError("coefficient has wrong size");
  require_finite(fi, "F_i");
  if (var < 0 || var >= num_vars()) throw DimensionError("variable index out of range");
  terms_[static_cast<std::size_t>(var)].clear();
  const Matrix s = symmetrize(fi);
  for (Index j = 0; j < dim_; ++j) {
    for (Index i = j; i < dim_; ++i) {
      if (s(i, j) == 0.0) continue;
      const Index pi = unit_vector(i);
      const Index pj = unit_vector(j);
      add_dyad(var, pi, pj, i == j ? 0.5 * s(i, j) : s(i, j));
    }
  }
}

Index AffineBlock::add_variable() {
  terms_.emplace_back();
  return num_vars() - 1;
}

Matrix AffineBlock::coefficient(Index var) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const Dyad& d : terms(var)) {
    const Vector& zp = pool_vector(d.p);
    const Vector& zq = pool_vector(d.q);
    out.noalias() += d.coef * (zp * zq.transpose() + zq * zp.transpose());
  }
  return out;
}

Matrix AffineBlock::linear_part(const Vector& v) const {
  if (v.size() != num_vars()) throw DimensionError("variable vector has wrong length");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (Index i = 0; i < num_vars(); ++i) {
    if (v(i) == 0.0) continue;
    for (const Dyad& d : terms(i)) {
      const Vector& zp = pool_vector(d.p);
      const Vector& zq = pool_vector(d.q);
      out.noalias() += (v(i) * d.coef) * (zp * zq.transpose() + zq * zp.transpose());
    }
  }
  return out;
}

Matrix AffineBlock::evaluate(const Vector& x) const { return f0_ + linear_part(x); }

LmiProblem fix_variable(const LmiProblem& problem, Index var, double value) {
  if (var < 0 || var >= problem.num_vars) throw DimensionError("variable index out of range");
  if (problem.num_vars < 2) throw DimensionError("cannot remove the only variable");
  LmiProblem out;
  out.num_vars = problem.num_vars - 1;
  out.objective.resize(out.num_vars);
  out.objective << problem.objective.head(var), problem.objective.tail(out.num_vars - var);
  for (const auto& b : problem.blocks) {
    AffineBlock nb(b.dim(), out.num_vars);
    std::vector<Index> remap(static_cast<std::size_t>(b.pool_size()));
    for (Index k = 0; k < b.pool_size(); ++k) {
      remap[static_cast<std::size_t>(k)] = nb.add_vector(b.pool_vector(k));
    }
    nb.set_constant(b.constant() + value * b.coefficient(var));
    for (Index i = 0; i < problem.num_vars; ++i) {
      if (i == var) continue;
      const Index j = i < var ? i : i - 1;
      for (const Dyad& d : b.terms(i)) {
        nb.add_dyad(j, remap[static_cast<std::size_t>(d.p)], remap[static_cast<std::size_t>(d.q)], d.coef);
      }
    }
    out.blocks.push_back(std::move(nb));
  }
  return out;
}

Index LmiProblem::constraint_rows() const {
  Index rows = 0;
  for (const auto& b : blocks) rows += b.dim();
  return rows;
}

// ---------------------------------------------------------------------------
// Barrier machinery

namespace {

constexpr double kArmijo = 0.01;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;

struct PackedBlock {
  Index dim = 0;
  Matrix f0;
  Matrix z;                  // dim x K pool
  std::vector<Index> start;  // CSR offsets into dyads, size V + 1
  std::vector<Dyad> dyads;
  double eps = 0.0;
};

void validate(const LmiProblem& problem) {
  if (problem.num_vars < 1) throw DimensionError("LMI problem needs at least one variable");
  if (problem.objective.size() != problem.num_vars) {
    throw DimensionError("objective length does not match the variable count");
  }
  require_finite(problem.objective, "objective");
  if (problem.blocks.empty()) throw DimensionError("LMI problem has no blocks");
  for (const auto& b : problem.blocks) {
    if (b.num_vars() != problem.num_vars) {
      throw DimensionError("block variable count does not match the problem");
    }
  }
}

// Evaluates slacks S_b(x) = -F_b(x) - eps_b I, gradients and Hessians of
// sum_b -log det S_b(x).
class Barrier {
 public:
  Barrier(const LmiProblem& problem, const SolverOptions& opts) : num_vars_(problem.num_vars) {
    for (const auto& b : problem.blocks) {
      PackedBlock pb;
      pb.dim = b.dim();
      pb.f0 = b.constant();
      pb.z.resize(b.dim(), b.pool_size());
      for (Index k = 0; k < b.pool_size(); ++k) pb.z.col(k) = b.pool_vector(k);
      pb.start.reserve(static_cast<std::size_t>(num_vars_) + 1);
      pb.start.push_back(0);
      for (Index i = 0; i < num_vars_; ++i) {
        const auto& t = b.terms(i);
        pb.dyads.insert(pb.dyads.end(), t.begin(), t.end());
        pb.start.push_back(static_cast<Index>(pb.dyads.size()));
      }
      pb.eps = opts.epsilon_margin * static_cast<double>(b.dim());
      blocks_.push_back(std::move(pb));
    }
  }

  Index num_vars() const { return num_vars_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  Index rows() const {
    Index r = 0;
    for (const auto& b : blocks_) r += b.dim;
    return r;
  }

  // sum_i v_i F_i for block b.
  Matrix image(std::size_t b, const Vector& v) const {
    const PackedBlock& pb = blocks_[b];
    const Index k = pb.z.cols();
    Matrix s = Matrix::Zero(k, k);
    for (Index i = 0; i < num_vars_; ++i) {
      const double vi = v(i);
      if (vi == 0.0) continue;
      for (Index t = pb.start[static_cast<std::size_t>(i)]; t < pb.start[static_cast<std::size_t>(i) + 1]; ++t) {
        const Dyad& d = pb.dyads[static_cast<std::size_t>(t)];
        s(d.p, d.q) += vi * d.coef;
        s(d.q, d.p) += vi * d.coef;
      }
    }
    Matrix out = pb.z * s * pb.z.transpose();
    return symmetrize(out);
  }

  Matrix slack(std::size_t b, const Vector& x) const {
    const PackedBlock& pb = blocks_[b];
    Matrix s = -(pb.f0 + image(b, x));
    s.diagonal().array() -= pb.eps;
    return s;
  }

  double eps(std::size_t b) const { return blocks_[b].eps; }

  // Adds the barrier gradient and Hessian (upper triangle) of block b, given
  // W = S_b^{-1}.
  void accumulate(std::size_t b, const Matrix& w, Vector& grad, Matrix& hess) const {
    const PackedBlock& pb = blocks_[b];
    const Matrix g = pb.z.transpose() * w * pb.z;
    for (Index i = 0; i < num_vars_; ++i) {
      const auto i0 = pb.start[static_cast<std::size_t>(i)];
      const auto i1 = pb.start[static_cast<std::size_t>(i) + 1];
      for (Index t = i0; t < i1; ++t) {
        const Dyad& a = pb.dyads[static_cast<std::size_t>(t)];
        grad(i) += 2.0 * a.coef * g(a.p, a.q);
        const auto gp = g.col(a.p);
        const auto gq = g.col(a.q);
        // tr(W F_a W F_c) for dyads a = (p, q) and c = (r, s):
        //   2 (G_qr G_sp + G_qs G_rp)
        for (Index j = i; j < num_vars_; ++j) {
          const auto j0 = pb.start[static_cast<std::size_t>(j)];
          const auto j1 = pb.start[static_cast<std::size_t>(j) + 1];
          double acc = 0.0;
          for (Index u = j0; u < j1; ++u) {
            const Dyad& c = pb.dyads[static_cast<std::size_t>(u)];
            acc += c.coef * (gq(c.p) * gp(c.q) + gq(c.q) * gp(c.p));
          }
          hess(i, j) += 2.0 * a.coef * acc;
        }
      }
    }
  }

 private:
  Index num_vars_;
  std::vector<PackedBlock> blocks_;
};

// -log det S from a successful factorization.
double neg_log_det(const Eigen::LLT<Matrix>& llt) {
  return -2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

struct Point {
  Vector x;
  std::vector<Matrix> slacks;
  std::vector<Eigen::LLT<Matrix>> factors;
  double barrier = 0.0;
};

// Fills slacks/factors for x; false if some slack is not positive definite.
bool evaluate_point(const Barrier& bar, Point& pt) {
  pt.slacks.clear();
  pt.factors.clear();
  pt.barrier = 0.0;
  for (std::size_t b = 0; b < bar.num_blocks(); ++b) {
    pt.slacks.push_back(bar.slack(b, pt.x));
    pt.factors.emplace_back(pt.slacks.back());
    if (pt.factors.back().info() != Eigen::Success) return false;
    const double v = neg_log_det(pt.factors.back());
    if (!std::isfinite(v)) return false;
    pt.barrier += v;
  }
  return true;
}

struct Derivatives {
  Vector grad;
  Matrix hess;  // upper triangle filled
};

Derivatives barrier_derivatives(const Barrier& bar, const Point& pt) {
  const Index v = bar.num_vars();
  Derivatives d{Vector::Zero(v), Matrix::Zero(v, v)};
  for (std::size_t b = 0; b < bar.num_blocks(); ++b) {
    const Index n = pt.slacks[b].rows();
    const Matrix w = pt.factors[b].solve(Matrix::Identity(n, n));
    bar.accumulate(b, symmetrize(w), d.grad, d.hess);
  }
  return d;
}

// Solves H d = rhs with H symmetric PSD (upper triangle given), using Jacobi
// scaling and a small diagonal shift when the factorization breaks down.
Vector solve_newton(const Matrix& hess_upper, const Vector& rhs) {
  const Index n = rhs.size();
  Vector scale(n);
  for (Index i = 0; i < n; ++i) {
    const double h = hess_upper(i, i);
    scale(i) = h > 0.0 && std::isfinite(h) ? 1.0 / std::sqrt(h) : 1.0;
  }
  Matrix hs = scale.asDiagonal() * hess_upper.triangularView<Eigen::Upper>().toDenseMatrix() *
              scale.asDiagonal();
  const Vector rs = scale.cwiseProduct(rhs);
  double shift = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (shift > 0.0) hs.diagonal().array() += shift - (attempt > 1 ? shift / 10.0 : 0.0);
    Eigen::LLT<Matrix, Eigen::Upper> llt(hs);
    if (llt.info() == Eigen::Success) {
      Vector d = scale.cwiseProduct(llt.solve(rs));
      if (d.allFinite()) return d;
    }
    shift = shift == 0.0 ? 1e-14 : shift * 10.0;
  }
  throw NumericError("Newton system could not be factored");
}

enum class PathOutcome { Converged, MaxIter, Stopped };

struct PathState {
  Point pt;
  double tau = 1.0;
  int newton = 0;
  std::vector<double> history;
};

// Hook evaluated after every Newton step (centered = false) and after every
// completed centering (centered = true). Returning true stops the path.
using StopHook = std::function<bool(const PathState&, bool centered)>;

PathOutcome follow_path(const Barrier& bar, const Vector& c, PathState& st,
                        const SolverOptions& opts, int budget, const StopHook& stop) {
  const double rows = static_cast<double>(bar.rows());
  for (;;) {
    // Centering at fixed tau.
    for (;;) {
      if (st.newton >= budget) return PathOutcome::MaxIter;
      const Derivatives der = barrier_derivatives(bar, st.pt);
      const Vector g = st.tau * c + der.grad;
      const Vector dir = solve_newton(der.hess, -g);
      const double slope = g.dot(dir);
      const double lambda2 = -slope;
      if (!(lambda2 / 2.0 > opts.newton_tol)) break;

      std::vector<Matrix> images;
      images.reserve(bar.num_blocks());
      for (std::size_t b = 0; b < bar.num_blocks(); ++b) images.push_back(bar.image(b, dir));

      const double f0 = st.tau * c.dot(st.pt.x) + st.pt.barrier;
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                           (std::abs(st.tau * c.dot(st.pt.x)) + std::abs(st.pt.barrier) + 1.0);
      double s = 1.0;
      bool accepted = false;
      double f_new = f0;
      Point trial;
      for (int k = 0; k < kMaxBacktracks && !accepted; ++k, s *= kBacktrack) {
        trial.x = st.pt.x + s * dir;
        trial.slacks.clear();
        trial.factors.clear();
        trial.barrier = 0.0;
        bool interior = true;
        for (std::size_t b = 0; b < bar.num_blocks() && interior; ++b) {
          trial.slacks.push_back(st.pt.slacks[b] - s * images[b]);
          trial.factors.emplace_back(trial.slacks.back());
          if (trial.factors.back().info() != Eigen::Success) {
            interior = false;
            break;
          }
          trial.barrier += neg_log_det(trial.factors.back());
        }
        if (!interior || !std::isfinite(trial.barrier)) continue;
        const double f = st.tau * c.dot(trial.x) + trial.barrier;
        if (f <= f0 + kArmijo * s * slope + noise) {
          accepted = true;
          f_new = f;
        }
      }
      ++st.newton;
      if (!accepted) break;  // no progress possible at this precision
      // Recompute slacks from x to keep the affine map from drifting.
      st.pt.x = std::move(trial.x);
      if (!evaluate_point(bar, st.pt)) {
        st.pt.slacks = std::move(trial.slacks);
        st.pt.factors = std::move(trial.factors);
        st.pt.barrier = trial.barrier;
      }
      if (stop && stop(st, false)) return PathOutcome::Stopped;
      // Steps accepted only within rounding noise cannot improve centering.
      if (!(f0 - f_new > noise)) break;
    }
    st.history.push_back(c.dot(st.pt.x));
    if (stop && stop(st, true)) return PathOutcome::Stopped;
    if (rows / st.tau < opts.gap_tol) return PathOutcome::Converged;
    st.tau *= opts.barrier_mult;
  }
}

// tau minimizing || tau c + grad ||_{H^{-1}} at the start point.
double initial_tau(const Barrier& bar, const Vector& c, const Point& pt) {
  const Derivatives der = barrier_derivatives(bar, pt);
  const Vector hc = solve_newton(der.hess, c);
  const Vector hg = solve_newton(der.hess, der.grad);
  const double denom = c.dot(hc);
  double tau = denom > 0.0 ? -c.dot(hg) / denom : 0.0;
  const double fallback = static_cast<double>(bar.rows()) / std::max(std::abs(c.dot(pt.x)), 1.0);
  if (!std::isfinite(tau) || tau <= 0.0) tau = fallback;
  return tau;
}

bool strictly_interior(const Barrier& bar, const Vector& x) {
  Point pt;
  pt.x = x;
  return evaluate_point(bar, pt);
}

FeasibilityResult phase_one(const LmiProblem& problem, const SolverOptions& opts,
                            const Vector& start, int budget) {
  LmiProblem aug;
  aug.num_vars = problem.num_vars + 1;
  aug.objective = Vector::Unit(aug.num_vars, problem.num_vars);
  for (const auto& b : problem.blocks) {
    AffineBlock ab = b;
    const Index t = ab.add_variable();
    for (Index j = 0; j < ab.dim(); ++j) {
      const Index e = ab.unit_vector(j);
      ab.add_dyad(t, e, e, -0.5);
    }
    aug.blocks.push_back(std::move(ab));
  }

  double level = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
    const Matrix f = problem.blocks[b].evaluate(start);
    const double eps = opts.epsilon_margin * static_cast<double>(f.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(f, Eigen::EigenvaluesOnly);
    level = std::max(level, es.eigenvalues().maxCoeff() + eps);
  }
  const Barrier bar(aug, opts);
  PathState st;
  st.pt.x.resize(aug.num_vars);
  st.pt.x << start, level + std::max(1.0, 0.1 * std::abs(level));
  if (!evaluate_point(bar, st.pt)) throw NumericError("phase-I start is not interior");
  st.tau = initial_tau(bar, aug.objective, st.pt);

  const Index t_index = problem.num_vars;
  const double rows = static_cast<double>(bar.rows());
  FeasibilityStatus verdict = FeasibilityStatus::Indeterminate;
  // The original blocks may already be strictly feasible while t is still
  // a loose upper bound (e.g. along recession directions of the problem).
  const Barrier original(problem, opts);
  auto stop = [&](const PathState& s, bool centered) {
    const double t = s.pt.x(t_index);
    if (t < 0.0 || strictly_interior(original, s.pt.x.head(problem.num_vars))) {
      verdict = FeasibilityStatus::Feasible;
      return true;
    }
    if (centered && t - rows / s.tau > 0.0) {
      verdict = FeasibilityStatus::Infeasible;
      return true;
    }
    return false;
  };
  const PathOutcome outcome = follow_path(bar, aug.objective, st, opts, budget, stop);
  if (outcome == PathOutcome::Converged) verdict = FeasibilityStatus::Infeasible;

  FeasibilityResult res;
  res.status = verdict;
  res.x = st.pt.x.head(problem.num_vars);
  res.phase1_value = st.pt.x(t_index);
  res.iterations = st.newton;
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------

bool certify(const LmiProblem& problem, const Vector& x, const SolverOptions& opts) {
  for (const auto& b : problem.blocks) {
    Matrix s = -b.evaluate(x);
    s.diagonal().array() -= opts.epsilon_margin * static_cast<double>(b.dim());
    if (!cholesky_pd(s).positive_definite()) return false;
  }
  return true;
}

double max_block_eigenvalue(const LmiProblem& problem, const Vector& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& b : problem.blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b.evaluate(x), Eigen::EigenvaluesOnly);
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

namespace detail {

BarrierEval barrier_eval(const LmiProblem& problem, const Vector& x, const SolverOptions& opts) {
  validate(problem);
  const Barrier bar(problem, opts);
  Point pt;
  pt.x = x;
  BarrierEval out;
  if (!evaluate_point(bar, pt)) {
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  Derivatives d = barrier_derivatives(bar, pt);
  out.value = pt.barrier;
  out.grad = std::move(d.grad);
  out.hess = d.hess.selfadjointView<Eigen::Upper>();
  return out;
}

}  // namespace detail

FeasibilityResult feasibility(const LmiProblem& problem, const SolverOptions& opts,
                              std::optional<Vector> start) {
  validate(problem);
  const Vector x0 = start ? *start : Vector::Zero(problem.num_vars);
  if (x0.size() != problem.num_vars) throw DimensionError("start point has wrong length");
  const Barrier bar(problem, opts);
  if (strictly_interior(bar, x0)) {
    FeasibilityResult res;
    res.status = FeasibilityStatus::Feasible;
    res.x = x0;
    res.phase1_value = max_block_eigenvalue(problem, x0);
    return res;
  }
  FeasibilityResult res = phase_one(problem, opts, x0, opts.max_newton);
  if (res.status == FeasibilityStatus::Feasible && !certify(problem, res.x, opts)) {
    res.status = FeasibilityStatus::Indeterminate;
  }
  return res;
}

SdpResult solve_min(const LmiProblem& problem, const SolverOptions& opts,
                    std::optional<Vector> start) {
  validate(problem);
  Vector x0 = start ? *start : Vector::Zero(problem.num_vars);
  if (x0.size() != problem.num_vars) throw DimensionError("start point has wrong length");

  SdpResult res;
  const Barrier bar(problem, opts);
  if (!strictly_interior(bar, x0)) {
    const FeasibilityResult p1 = phase_one(problem, opts, x0, opts.max_newton);
    res.phase1_iterations = p1.iterations;
    res.iterations = p1.iterations;
    if (p1.status != FeasibilityStatus::Feasible) {
      res.x_opt = p1.x;
      res.objective_value = problem.objective.dot(p1.x);
      res.status = p1.status == FeasibilityStatus::Infeasible ? SdpStatus::Infeasible
                                                              : SdpStatus::MaxIter;
      res.max_block_eig = max_block_eigenvalue(problem, p1.x);
      return res;
    }
    x0 = p1.x;
  }

  PathState st;
  st.pt.x = x0;
  if (!evaluate_point(bar, st.pt)) throw NumericError("start point is not interior");
  st.newton = res.iterations;
  st.tau = initial_tau(bar, problem.objective, st.pt);
  const PathOutcome outcome = follow_path(bar, problem.objective, st, opts, opts.max_newton, {});

  res.x_opt = st.pt.x;
  res.objective_value = problem.objective.dot(st.pt.x);
  res.iterations = st.newton;
  res.objective_history = std::move(st.history);
  res.status = outcome == PathOutcome::Converged ? SdpStatus::Optimal : SdpStatus::MaxIter;
  res.max_block_eig = max_block_eigenvalue(problem, res.x_opt);
  res.certified = certify(problem, res.x_opt, opts);
  if (res.status == SdpStatus::Optimal && !res.certified) {
    std::ostringstream os;
    os << "solver returned a point that fails certification (max block eigenvalue "
       << res.max_block_eig << ")";
    throw SolverError(os.str());
  }
  return res;
}

}  // namespace sdfir
