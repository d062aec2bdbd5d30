#include "sdfir/hinf.hpp"

#include "sdfir/errors.hpp"
#include "sdfir/kyp_lmi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdfir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRefinedPeaks = 3;
constexpr double kBracketWidth = 1e-12;

double feedthrough_norm(const StateSpace& g) {
  return g.D().size() == 0 ? 0.0 : sigma_max(g.D().cast<Complex>());
}

void require_stable_discrete(const StateSpace& g) {
  if (!g.is_discrete()) throw DomainError("H-infinity norm needs a discrete-time system");
  if (!g.is_stable()) throw DomainError("H-infinity norm of an unstable system is infinite");
}

struct Peak {
  double theta;
  double value;
  double spread;
};

// Golden-section maximization of f over [lo, hi].
template <class F>
Peak golden_max(const F& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > kBracketWidth; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? Peak{x1, f1, std::abs(f1 - f2)} : Peak{x2, f2, std::abs(f1 - f2)};
}

}  // namespace

NormResult hinf_norm(const StateSpace& g, double tol, int grid) {
  require_stable_discrete(g);
  if (!(tol > 0.0 && tol < 1.0)) throw ParameterError("norm tolerance must lie in (0, 1)");
  if (grid < 2) throw ParameterError("norm grid needs at least two points");

  NormResult res;
  res.method = NormMethod::GridBisection;
  const double dnorm = feedthrough_norm(g);
  if (g.states() == 0 || g.inputs() == 0 || g.outputs() == 0) {
    res.value = dnorm;
    return res;
  }

  const ResponseEvaluator eval(g);
  auto f = [&](double theta) { return eval.sigma_max_on_circle(theta); };

  const auto count = static_cast<std::size_t>(grid);
  std::vector<double> theta(count), val(count);
  for (std::size_t k = 0; k < count; ++k) {
    theta[k] = kPi * static_cast<double>(k) / static_cast<double>(count - 1);
    val[k] = f(theta[k]);
  }

  std::vector<std::size_t> maxima;
  for (std::size_t k = 0; k < count; ++k) {
    const bool left = k == 0 || val[k] >= val[k - 1];
    const bool right = k + 1 == count || val[k] >= val[k + 1];
    if (left && right) maxima.push_back(k);
  }
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) {
    return val[a] > val[b] || (val[a] == val[b] && a < b);
  });
  if (maxima.size() > kRefinedPeaks) maxima.resize(kRefinedPeaks);

  Peak best{theta[maxima.front()], val[maxima.front()], 0.0};
  for (std::size_t k : maxima) {
    const double lo = theta[k == 0 ? 0 : k - 1];
    const double hi = theta[k + 1 == count ? k : k + 1];
    Peak p = golden_max(f, lo, hi);
    if (val[k] > p.value) p = Peak{theta[k], val[k], p.spread};
    if (p.value > best.value) best = p;
  }

  res.peak_frequency = best.theta;
  res.value = std::max(best.value, dnorm);
  res.tolerance_achieved = res.value > 0.0 ? best.spread / res.value : 0.0;
  return res;
}

FeasibilityStatus kyp_feasible(const StateSpace& g, double gamma, const SolverOptions& opts) {
  require_stable_discrete(g);
  const LmiProblem problem = make_kyp_feasibility_problem(g, gamma);
  if (problem.num_vars == 0) {
    // No dynamics left: the LMI reduces to [-gI D'; D -gI] < -eps I.
    const double eps = opts.epsilon_margin * static_cast<double>(problem.blocks.front().dim());
    return gamma - eps > feedthrough_norm(g) ? FeasibilityStatus::Feasible
                                             : FeasibilityStatus::Infeasible;
  }
  Index n = 0;
  while (vech_size(n) < problem.num_vars) ++n;
  return feasibility(problem, opts, vech(Matrix::Identity(n, n))).status;
}

NormResult kyp_norm_bisect(const StateSpace& g, double tol, const SolverOptions& opts) {
  require_stable_discrete(g);
  if (!(tol > 0.0 && tol < 1.0)) throw ParameterError("bisection tolerance must lie in (0, 1)");

  NormResult res;
  res.method = NormMethod::KypBisection;
  const double dnorm = feedthrough_norm(g);
  const NormResult grid = hinf_norm(g);
  res.peak_frequency = grid.peak_frequency;
  if (g.states() == 0 || grid.value == 0.0) {
    res.value = std::max(dnorm, grid.value);
    return res;
  }

  auto feasible = [&](double gamma) {
    return kyp_feasible(g, gamma, opts) == FeasibilityStatus::Feasible;
  };

  double lo = dnorm;
  const double hi0 = 1.5 * grid.value;
  double hi = hi0;
  while (!feasible(hi)) {
    hi *= 2.0;
    if (hi > hi0 * 1048576.0) throw NumericError("no feasible gamma found for the bisection bracket");
  }
  for (int it = 0; it < 200 && !(lo > 0.0 && hi / lo - 1.0 < tol); ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  res.value = 0.5 * (lo + hi);
  res.tolerance_achieved = lo > 0.0 ? hi / lo - 1.0 : 1.0;
  return res;
}

}  // namespace sdfir
