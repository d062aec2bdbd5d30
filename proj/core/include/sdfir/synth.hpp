#pragma once

#include "sdfir/error_system.hpp"
#include "sdfir/fir.hpp"
#include "sdfir/hinf.hpp"
#include "sdfir/sdp.hpp"

#include <span>
#include <vector>

namespace sdfir {

/// One synthesis run: approximate e^{-m h s} target(s) on inputs shaped by
/// characteristic(s) with an M-tap FIR filter running at h / L, using an
/// N-fold fast sample/hold approximation.
struct DesignSpec {
  StateSpace target;
  StateSpace characteristic;
  double h = 1.0;
  int m = 0;
  int L = 1;
  int M = 1;
  int N = 1;
  SolverOptions solver;
  int norm_grid = kDefaultNormGrid;  // frequency grid for every hinf_norm call
};

struct DesignDiagnostics {
  int iterations = 0;
  int phase1_iterations = 0;
  double max_block_eig = 0.0;
  bool certified = false;
  Index num_vars = 0;
  Index states = 0;      // error-system realization
  Index lmi_states = 0;  // controllable part, size of lyapunov_X
  double initial_gamma = 0.0;
  std::vector<double> objective_history;
};

struct DesignResult {
  FirFilter filter;
  double gamma = 0.0;
  /// Grid-based H-infinity norm of the error system with the designed filter.
  double verified_norm = 0.0;
  Matrix lyapunov_X;
  DesignDiagnostics diagnostics;
};

enum class DesignRoute {
  Auto,            // single-rate construction when L == 1
  ForceMultiRate,  // always use the polyphase construction
};

/// Throws ParameterError / StabilityError for unusable specs.
void validate_spec(const DesignSpec& spec);

AffineErrorSystem build_error_system(const DesignSpec& spec, DesignRoute route = DesignRoute::Auto);

DesignResult design_fir(const DesignSpec& spec, DesignRoute route = DesignRoute::Auto);

struct MultiDelayResult {
  FirFilter filter;             // tapwise sum of the per-term filters
  std::vector<double> gammas;   // per-term optimal bounds
  double bound = 0.0;           // sum of gammas
  std::vector<DesignResult> per_term;
};

/// Designs one filter per delayed term (reusing `base` for everything but
/// the target and delay) and sums them. `base.target` is ignored.
MultiDelayResult design_multi_delay(std::span<const DelayedTerm> terms, const DesignSpec& base);

struct BoundCheck {
  double lhs = 0.0;  // norm of the full multi-delay error system
  double rhs = 0.0;  // sum of the per-term bounds
};

/// Evaluates the multi-delay error system with `filter` and compares it with
/// the sum of `gammas`. Throws InvariantError when lhs > rhs + tol.
BoundCheck verify_bound(std::span<const DelayedTerm> terms, const FirFilter& filter,
                        std::span<const double> gammas, const DesignSpec& base,
                        double tol = 1e-6);

}  // namespace sdfir
