#pragma once

#include "sdfir/sdp.hpp"
#include "sdfir/state_space.hpp"

namespace sdfir {

enum class NormMethod { GridBisection, KypBisection };

struct NormResult {
  double value = 0.0;
  double peak_frequency = 0.0;  // radians per sample, in [0, pi]
  NormMethod method = NormMethod::GridBisection;
  double tolerance_achieved = 0.0;
};

inline constexpr int kDefaultNormGrid = 2048;

/// max over theta in [0, pi] of sigma_max(G(e^{j theta})): dense grid, then
/// golden-section refinement around the three largest local maxima.
NormResult hinf_norm(const StateSpace& g, double tol = 1e-9, int grid = kDefaultNormGrid);

/// Bisection on gamma over the bounded-real LMI feasibility test, until the
/// bracket satisfies hi / lo - 1 < tol.
NormResult kyp_norm_bisect(const StateSpace& g, double tol = 1e-4,
                           const SolverOptions& opts = {});

/// Feasibility of the bounded-real LMI at a given gamma.
FeasibilityStatus kyp_feasible(const StateSpace& g, double gamma, const SolverOptions& opts = {});

}  // namespace sdfir
