#pragma once

#include "sdfir/state_space.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sdfir {

/// FIR filter K(z) = sum_k a_k z^{-k} running at `tap_period` seconds.
class FirFilter {
 public:
  FirFilter(std::vector<double> coeffs, double tap_period);

  const std::vector<double>& coeffs() const { return coeffs_; }
  double tap_period() const { return tap_period_; }
  std::size_t taps() const { return coeffs_.size(); }
  double operator[](std::size_t k) const { return coeffs_[k]; }

  /// K(e^{j theta}) with theta in radians per tap.
  Complex response(double theta) const;

  friend bool operator==(const FirFilter&, const FirFilter&) = default;

 private:
  std::vector<double> coeffs_;
  double tap_period_;
};

/// Shift-register realization: A_K upper shift, B_K last unit vector,
/// C_K = [a_{M-1} ... a_1], D_K = a_0.
StateSpace realize_ss(const FirFilter& k);

/// (a_0, ..., a_{M-1}, 0, ...) truncated or zero padded to `length`.
std::vector<double> impulse_response(const FirFilter& k, std::size_t length);

/// Tapwise sum; the shorter filter is zero padded. Tap periods must agree.
FirFilter add_taps(const FirFilter& lhs, const FirFilter& rhs);

// Coefficient text format: optional '#' comment lines, then one coefficient
// per line in %.17e notation; line k holds a_k.
void write_coefficients(std::ostream& os, const FirFilter& k,
                        const std::vector<std::string>& header = {});
std::vector<double> read_coefficients(std::istream& is);

}  // namespace sdfir
