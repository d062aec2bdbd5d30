#include "sdfir/error_system.hpp"

#include "sdfir/errors.hpp"
#include "sdfir/lifting.hpp"

#include <cmath>
#include <sstream>

namespace sdfir {
namespace {

void validate_target(const StateSpace& g, const std::string& name) {
  if (g.is_discrete()) throw DomainError(name + " must be continuous-time", name);
  if (g.inputs() != 1 || g.outputs() != 1) {
    throw ParameterError(name + " must be single-input single-output", name);
  }
  if (!g.is_stable()) throw StabilityError(name + " is not stable", name);
}

void validate_parameters(double h, int taps, int l, int n) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("sampling period h must be positive", "h");
  if (taps < 1) throw ParameterError("FIR length M must be >= 1", "M");
  if (n < 1) throw ParameterError("fast-sampling factor N must be >= 1", "N");
  if (l < 1) throw ParameterError("upsampling ratio L must be >= 1", "L");
  if (n % l != 0) throw ParameterError("upsampling ratio L must divide N", "L");
}

struct Paths {
  StateSpace t1;
  StateSpace t2;
};

// T1 = sum_i z^{-m_i} K_{i,N} F_N at the slow rate, T2 = S_N F_N.
Paths build_paths(std::span<const DelayedTerm> terms, const StateSpace& characteristic,
                  double h, int n) {
  const double fast = h / n;
  const StateSpace f_n = lift(zoh_discretize(characteristic, fast), n).inner;

  std::optional<StateSpace> t1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& term = terms[i];
    if (term.delay < 0) throw ParameterError("delay step must be >= 0", "m");
    const StateSpace k_n = lift(zoh_discretize(term.system, fast), n).inner;
    StateSpace path = delay_augment(series(k_n, f_n), term.delay);
    t1 = t1 ? add(*t1, path) : std::move(path);
  }
  if (!t1) throw ParameterError("target needs at least one term");

  const StateSpace sampler =
      StateSpace::static_gain(make_sample_row(n), TimeDomain::Discrete, h);
  return Paths{std::move(*t1), series(sampler, f_n)};
}

// Common block layout
//   A = [A1 0 0; 0 A2 0; 0 Bq C2 Aq],  B = [B1; B2; 0]
//   C(a) = [C1, -Hq Dq(a) C2, -Hq Cq(a)],  D(a) = D1 - Hq Dq(a) D2
// where (Aq, Bq, Cq(a), Dq(a)) realizes the filter seen from the slow-rate
// sample and Hq is the hold into the N fast slots.
template <typename FilterRealization>
AffineErrorSystem assemble(const Paths& paths, const Matrix& hold, int taps, int n,
                           FilterRealization&& realize_unit, ErrorSystemLayout layout) {
  const StateSpace& t1 = paths.t1;
  const StateSpace& t2 = paths.t2;
  const Index n1 = t1.states(), n2 = t2.states();

  // Filter structure (A, B) is coefficient independent; take it from a_0 = 1.
  const StateSpace unit0 = realize_unit(0);
  const Index nk = unit0.states();
  const Index total = n1 + n2 + nk;
  const Index q = t1.inputs();
  const Index p = t1.outputs();

  AffineErrorSystem e;
  e.A = Matrix::Zero(total, total);
  e.A.topLeftCorner(n1, n1) = t1.A();
  e.A.block(n1, n1, n2, n2) = t2.A();
  e.A.block(n1 + n2, n1, nk, n2) = unit0.B() * t2.C();
  e.A.bottomRightCorner(nk, nk) = unit0.A();

  e.B = Matrix::Zero(total, q);
  e.B.topRows(n1) = t1.B();
  e.B.middleRows(n1, n2) = t2.B();

  e.C0 = Matrix::Zero(p, total);
  e.C0.leftCols(n1) = t1.C();
  e.D0 = t1.D();

  e.C_lin.reserve(static_cast<std::size_t>(taps));
  e.D_lin.reserve(static_cast<std::size_t>(taps));
  for (int k = 0; k < taps; ++k) {
    const StateSpace unit = realize_unit(k);
    Matrix c = Matrix::Zero(p, total);
    c.middleCols(n1, n2) = -hold * unit.D() * t2.C();
    c.rightCols(nk) = -hold * unit.C();
    e.C_lin.push_back(std::move(c));
    e.D_lin.push_back(-hold * unit.D() * t2.D());
  }
  e.taps = taps;
  e.factor = n;
  layout.target_states = n1;
  layout.characteristic_states = n2;
  layout.filter_states = nk;
  e.layout = layout;
  return e;
}

FirFilter unit_filter(int taps, int k, double tap_period) {
  std::vector<double> a(static_cast<std::size_t>(taps), 0.0);
  a[static_cast<std::size_t>(k)] = 1.0;
  return FirFilter(std::move(a), tap_period);
}

}  // namespace

void validate_design_systems(const StateSpace& target, const StateSpace& characteristic) {
  validate_target(target, "target");
  validate_target(characteristic, "characteristic");
  if (!characteristic.is_strictly_proper()) {
    throw StabilityError("characteristic must be strictly proper", "characteristic");
  }
}

Matrix AffineErrorSystem::C(std::span<const double> a) const {
  if (a.size() != C_lin.size()) throw DimensionError("coefficient vector has wrong length");
  Matrix c = C0;
  for (std::size_t k = 0; k < a.size(); ++k) c += a[k] * C_lin[k];
  return c;
}

Matrix AffineErrorSystem::D(std::span<const double> a) const {
  if (a.size() != D_lin.size()) throw DimensionError("coefficient vector has wrong length");
  Matrix d = D0;
  for (std::size_t k = 0; k < a.size(); ++k) d += a[k] * D_lin[k];
  return d;
}

StateSpace AffineErrorSystem::realize(std::span<const double> a) const {
  return StateSpace::discrete(A, B, C(a), D(a), layout.period);
}

AffineErrorSystem build_single_rate(const StateSpace& target, const StateSpace& characteristic,
                                    double h, int m, int taps, int n) {
  validate_design_systems(target, characteristic);
  validate_parameters(h, taps, 1, n);
  if (m < 0) throw ParameterError("delay step m must be >= 0", "m");
  const DelayedTerm term{m, target};
  const Paths paths = build_paths(std::span<const DelayedTerm>(&term, 1), characteristic, h, n);
  return assemble(paths, make_hold_vector(n), taps, n,
                  [&](int k) { return realize_ss(unit_filter(taps, k, h)); },
                  ErrorSystemLayout{0, 0, 0, h, m, 1});
}

AffineErrorSystem build_multi_rate(const StateSpace& target, const StateSpace& characteristic,
                                   double h, int m, int taps, int l, int n) {
  const DelayedTerm term{m, target};
  AffineErrorSystem e =
      build_multi_rate_terms(std::span<const DelayedTerm>(&term, 1), characteristic, h, taps, l, n);
  e.layout.delay = m;
  return e;
}

AffineErrorSystem build_multi_rate_terms(std::span<const DelayedTerm> terms,
                                         const StateSpace& characteristic, double h,
                                         int taps, int l, int n) {
  if (terms.empty()) throw ParameterError("target needs at least one term");
  for (const auto& term : terms) validate_design_systems(term.system, characteristic);
  validate_parameters(h, taps, l, n);
  const Paths paths = build_paths(terms, characteristic, h, n);
  const double tap_period = h / l;
  return assemble(paths, make_multirate_hold(n, l), taps, n,
                  [&](int k) { return lift_fir_polyphase(unit_filter(taps, k, tap_period), l); },
                  ErrorSystemLayout{0, 0, 0, h, 0, l});
}

}  // namespace sdfir
