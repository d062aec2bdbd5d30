#include "sdfir/synth.hpp"

#include "sdfir/errors.hpp"
#include "sdfir/kyp_lmi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdfir {

namespace {

// Starting gamma when the uncompensated error has zero norm.
constexpr double kFallbackGamma = 1.0;

const char* status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::MaxIter: return "MaxIter";
  }
  return "?";
}

}  // namespace

void validate_spec(const DesignSpec& spec) {
  if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw ParameterError("h must be positive", "h");
  if (spec.m < 0) throw ParameterError("delay step m must be >= 0", "m");
  if (spec.M < 1) throw ParameterError("FIR length M must be >= 1", "M");
  if (spec.N < 1) throw ParameterError("fast-sampling factor N must be >= 1", "N");
  if (spec.L < 1) throw ParameterError("upsampling ratio L must be >= 1", "L");
  if (spec.N % spec.L != 0) throw ParameterError("L must divide N", "L");
  if (spec.norm_grid < 2) throw ParameterError("norm grid needs at least two points", "norm_grid");
  const SolverOptions& s = spec.solver;
  if (!(s.gap_tol > 0.0)) throw ParameterError("gap_tol must be positive", "solver.gap_tol");
  if (s.max_newton < 1) throw ParameterError("max_newton must be >= 1", "solver.max_newton");
  if (!(s.barrier_mult > 1.0)) throw ParameterError("barrier_mult must exceed 1", "solver.barrier_mult");
  if (!(s.epsilon_margin >= 0.0)) {
    throw ParameterError("epsilon_margin must be nonnegative", "solver.epsilon_margin");
  }
  validate_design_systems(spec.target, spec.characteristic);
}

AffineErrorSystem build_error_system(const DesignSpec& spec, DesignRoute route) {
  validate_spec(spec);
  if (spec.L == 1 && route == DesignRoute::Auto) {
    return build_single_rate(spec.target, spec.characteristic, spec.h, spec.m, spec.M, spec.N);
  }
  return build_multi_rate(spec.target, spec.characteristic, spec.h, spec.m, spec.M, spec.L, spec.N);
}

DesignResult design_fir(const DesignSpec& spec, DesignRoute route) {
  const AffineErrorSystem e = build_error_system(spec, route);
  const KypDesignProblem kyp = make_kyp_design_problem(e);

  const std::vector<double> zero(static_cast<std::size_t>(spec.M), 0.0);
  const double open_norm = hinf_norm(e.realize(zero), 1e-9, spec.norm_grid).value;
  const double gamma0 = open_norm > 0.0 ? 2.0 * open_norm : kFallbackGamma;

  // Start at (gamma0, a = 0, X = I). When X = I is not a certificate, a
  // Phase-I search over (a, X) with gamma held at gamma0 supplies one; with
  // gamma free, Phase I would chase the trivial direction gamma -> infinity.
  Vector start = kyp.start_point(gamma0);
  int phase1 = 0;
  if (!certify(kyp.problem, start, spec.solver)) {
    const LmiProblem fixed = fix_variable(kyp.problem, KypDesignProblem::gamma_index, gamma0);
    const FeasibilityResult fr = feasibility(fixed, spec.solver, Vector(start.tail(fixed.num_vars)));
    phase1 = fr.iterations;
    if (fr.status == FeasibilityStatus::Feasible) {
      start.tail(fixed.num_vars) = fr.x;
    }
  }
  SolverOptions remaining = spec.solver;
  remaining.max_newton = std::max(1, spec.solver.max_newton - phase1);
  SdpResult sol = solve_min(kyp.problem, remaining, start);
  sol.iterations += phase1;
  sol.phase1_iterations += phase1;
  if (sol.status != SdpStatus::Optimal) {
    std::ostringstream os;
    os << "design LMI solve ended with status " << status_name(sol.status) << " after "
       << sol.iterations << " Newton steps (max block eigenvalue " << sol.max_block_eig << ")";
    throw SolverError(os.str());
  }

  FirFilter filter(kyp.coefficients(sol.x_opt), spec.h / spec.L);
  DesignResult res{filter, sol.x_opt(KypDesignProblem::gamma_index),
                   hinf_norm(e.realize(filter), 1e-9, spec.norm_grid).value, kyp.lyapunov(sol.x_opt), {}};
  res.diagnostics.iterations = sol.iterations;
  res.diagnostics.phase1_iterations = sol.phase1_iterations;
  res.diagnostics.max_block_eig = sol.max_block_eig;
  res.diagnostics.certified = sol.certified;
  res.diagnostics.num_vars = kyp.problem.num_vars;
  res.diagnostics.states = e.states();
  res.diagnostics.lmi_states = kyp.states;
  res.diagnostics.initial_gamma = gamma0;
  res.diagnostics.objective_history = sol.objective_history;
  return res;
}

MultiDelayResult design_multi_delay(std::span<const DelayedTerm> terms, const DesignSpec& base) {
  if (terms.empty()) throw ParameterError("multi-delay design needs at least one term");
  MultiDelayResult out{FirFilter(std::vector<double>(static_cast<std::size_t>(base.M), 0.0),
                                 base.h / base.L),
                       {}, 0.0, {}};
  for (std::size_t i = 0; i < terms.size(); ++i) {
    DesignSpec spec = base;
    spec.target = terms[i].system;
    spec.m = terms[i].delay;
    try {
      out.per_term.push_back(design_fir(spec));
    } catch (const Error& err) {
      std::ostringstream os;
      os << "term " << i << ": " << err.what();
      throw Error(err.code(), os.str(), "term " + std::to_string(i));
    }
    const DesignResult& r = out.per_term.back();
    out.filter = add_taps(out.filter, r.filter);
    out.gammas.push_back(r.gamma);
    out.bound += r.gamma;
  }
  return out;
}

BoundCheck verify_bound(std::span<const DelayedTerm> terms, const FirFilter& filter,
                        std::span<const double> gammas, const DesignSpec& base, double tol) {
  if (gammas.size() != terms.size()) throw DimensionError("one gamma per term is required");
  if (filter.taps() != static_cast<std::size_t>(base.M)) {
    throw DimensionError("filter length does not match M");
  }
  const AffineErrorSystem e =
      build_multi_rate_terms(terms, base.characteristic, base.h, base.M, base.L, base.N);
  BoundCheck out;
  out.lhs = hinf_norm(e.realize(filter), 1e-9, base.norm_grid).value;
  for (double g : gammas) out.rhs += g;
  if (out.lhs > out.rhs + tol) {
    std::ostringstream os;
    os << "multi-delay bound violated: " << out.lhs << " > " << out.rhs;
    throw InvariantError(os.str());
  }
  return out;
}

}  // namespace sdfir
