#include "sdfir/fir.hpp"

#include "sdfir/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace sdfir {

FirFilter::FirFilter(std::vector<double> coeffs, double tap_period)
    : coeffs_(std::move(coeffs)), tap_period_(tap_period) {
  if (coeffs_.empty()) throw ParameterError("FIR filter needs at least one tap");
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw NumericError("FIR coefficient is not finite");
  }
  if (!(tap_period_ > 0.0) || !std::isfinite(tap_period_)) {
    throw ParameterError("FIR tap period must be positive");
  }
}

Complex FirFilter::response(double theta) const {
  // Horner in z^{-1}.
  const Complex zinv = std::polar(1.0, -theta);
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * zinv + *it;
  return acc;
}

StateSpace realize_ss(const FirFilter& k) {
  const Index m = static_cast<Index>(k.taps());
  const Index n = m - 1;
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  Matrix b = Matrix::Zero(n, 1);
  if (n > 0) b(n - 1, 0) = 1.0;
  Matrix c(1, n);
  for (Index j = 0; j < n; ++j) c(0, j) = k[static_cast<std::size_t>(m - 1 - j)];
  Matrix d(1, 1);
  d(0, 0) = k[0];
  return StateSpace::discrete(std::move(a), std::move(b), std::move(c), std::move(d),
                              k.tap_period());
}

std::vector<double> impulse_response(const FirFilter& k, std::size_t length) {
  std::vector<double> out(length, 0.0);
  for (std::size_t i = 0; i < length && i < k.taps(); ++i) out[i] = k[i];
  return out;
}

FirFilter add_taps(const FirFilter& lhs, const FirFilter& rhs) {
  if (lhs.tap_period() != rhs.tap_period()) {
    throw ParameterError("cannot sum FIR filters with different tap periods");
  }
  std::vector<double> sum(std::max(lhs.taps(), rhs.taps()), 0.0);
  for (std::size_t i = 0; i < lhs.taps(); ++i) sum[i] += lhs[i];
  for (std::size_t i = 0; i < rhs.taps(); ++i) sum[i] += rhs[i];
  return FirFilter(std::move(sum), lhs.tap_period());
}

void write_coefficients(std::ostream& os, const FirFilter& k,
                        const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
  char buf[64];
  for (double a : k.coeffs()) {
    std::snprintf(buf, sizeof buf, "%.17e", a);
    os << buf << '\n';
  }
}

std::vector<double> read_coefficients(std::istream& is) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!out.empty()) {
        throw ConfigError("comment after coefficients on line " + std::to_string(lineno));
      }
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw ConfigError("bad coefficient on line " + std::to_string(lineno));
    }
    const auto rest = line.find_first_not_of(" \t\r", first + used);
    if (rest != std::string::npos || !std::isfinite(v)) {
      throw ConfigError("bad coefficient on line " + std::to_string(lineno));
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("coefficient file holds no coefficients");
  return out;
}

}  // namespace sdfir
