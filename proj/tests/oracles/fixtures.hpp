#pragma once

// Shared problem instances for the unit, property and acceptance tests.

#include "oracles.hpp"

#include <sdfir/synth.hpp>

#include <vector>

namespace fixtures {

using sdfir::DesignSpec;
using sdfir::StateSpace;

inline StateSpace tf(const std::vector<double>& num, const std::vector<double>& den) {
  return sdfir::from_transfer_function(num, den);
}

/// 1 / (s + a)
inline StateSpace lag(double a) { return tf({1.0}, {1.0, a}); }

inline StateSpace zero_target() { return tf({0.0}, {1.0}); }

struct Design {
  StateSpace target;
  StateSpace characteristic;
};

/// Sixth-order elliptic low-pass (3 dB ripple) and F(s) = 1/(s+1).
inline Design design_example() {
  using oracle::convolve;
  std::vector<double> num = convolve(convolve({1.0, 0.0, 1.33}, {1.0, 0.0, 1.899}), {1.0, 0.0, 10.31});
  for (double& v : num) v *= 0.0031623;
  const std::vector<double> den =
      convolve(convolve({1.0, 0.3705, 0.1681}, {1.0, 0.1596, 0.7062}), {1.0, 0.03557, 0.9805});
  return {tf(num, den), lag(1.0)};
}

/// h = 1, m = 5, L = 2, M = 32, N = 6.
inline DesignSpec design_example_spec() {
  Design d = design_example();
  return DesignSpec{d.target, d.characteristic, 1.0, 5, 2, 32, 6, {}};
}

/// K_c = 1/(s+1), F = 1/(s+2), h = 1, m = 1, L = 1, M = 2, N = 2.
inline DesignSpec tiny_spec() { return DesignSpec{lag(1.0), lag(2.0), 1.0, 1, 1, 2, 2, {}}; }

/// Delayed, hold-spread step-invariant response of the design-example target
/// (an M = 32 filter that is reasonable but not optimal).
inline std::vector<double> design_example_reference_taps() {
  const Design d = design_example();
  const std::vector<double> g = oracle::impulse(sdfir::zoh_discretize(d.target, 0.5), 32);
  std::vector<double> a(32, 0.0);
  for (std::size_t k = 10; k < 32; ++k) a[k] = g[k - 10] + (k > 10 ? g[k - 11] : 0.0);
  return a;
}

}  // namespace fixtures
