#include "error_oracle.hpp"
#include "oracles.hpp"

#include <sdfir/errors.hpp>
#include <sdfir/hinf.hpp>
#include <sdfir/synth.hpp>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace sdfir;

namespace {

// Small multi-delay family: F = 1/(s+1), h = 1, L = 1, M = 3, N = 2.
DesignSpec small_base() { return DesignSpec{fixtures::zero_target(), fixtures::lag(1.0), 1.0, 0, 1, 3, 2, {}}; }

std::vector<double> brute_force_taps(const DesignSpec& s, std::vector<double> start) {
  const oracle::LiftedPieces p = oracle::lifted_pieces(s.target, s.characteristic, s.h, s.N);
  const auto f = [&](const std::vector<double>& a) { return oracle::expected_norm(p, s.m, a, s.L, s.N, 1024); };
  return oracle::nelder_mead(f, std::move(start), 0.2, 800, 3);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST(DesignFir, ZeroTargetGivesZeroFilter) {
  DesignSpec s = fixtures::tiny_spec();
  s.target = fixtures::zero_target();
  const DesignResult r = design_fir(s);
  EXPECT_LE(r.gamma, 1e-6);
  for (double a : r.filter.coeffs()) EXPECT_LE(std::abs(a), 1e-6);
}

TEST(DesignFir, TinyInstanceMatchesBruteForce) {
  const DesignSpec s = fixtures::tiny_spec();
  const DesignResult r = design_fir(s);
  const std::vector<double> a = brute_force_taps(s, {0.0, 0.0});
  const oracle::LiftedPieces p = oracle::lifted_pieces(s.target, s.characteristic, s.h, s.N);
  const double best = oracle::expected_norm(p, s.m, a, 1, s.N, 8192);
  EXPECT_NEAR(r.gamma, best, 1e-3);
  EXPECT_LT(max_abs_diff(r.filter.coeffs(), a), 1e-3);
  // Frozen reference values of the tiny instance.
  EXPECT_NEAR(r.gamma, 0.266965572796, 1e-6);
  EXPECT_NEAR(r.filter[0], -0.0364309745, 1e-5);
  EXPECT_NEAR(r.filter[1], 0.564484393, 1e-5);
  EXPECT_EQ(r.filter.tap_period(), 1.0);
}

TEST(DesignFir, CertificateBracketsVerifiedNorm) {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    DesignSpec s = small_base();
    s.target = oracle::random_stable_continuous(rng, 1 + trial % 2, 1, 1, trial % 3 == 0);
    s.m = trial % 3;
    const DesignResult r = design_fir(s);
    EXPECT_LE(r.verified_norm, r.gamma * (1 + 1e-3)) << "trial " << trial;
    EXPECT_TRUE(r.diagnostics.certified);
    EXPECT_TRUE(cholesky_pd(r.lyapunov_X).positive_definite());
    // Without the strictness margin the certificate is tight.
    s.solver.epsilon_margin = 0.0;
    const DesignResult tight = design_fir(s);
    EXPECT_GE(tight.gamma, tight.verified_norm * (1 - 1e-6)) << "trial " << trial;
    EXPECT_LE(tight.verified_norm, tight.gamma * (1 + 1e-3)) << "trial " << trial;
  }
}

TEST(DesignFir, AgreesWithKypBisection) {
  const DesignSpec s = fixtures::tiny_spec();
  const DesignResult r = design_fir(s);
  const StateSpace e = build_error_system(s).realize(r.filter);
  const double kyp = kyp_norm_bisect(e, 1e-6).value;
  EXPECT_NEAR(kyp, r.gamma, 1e-4 * r.gamma);
}

TEST(DesignFir, MoreTapsNeverHurt) {
  DesignSpec s = fixtures::tiny_spec();
  double prev = 1e300;
  for (int m = 1; m <= 4; ++m) {
    s.M = m;
    const double g = design_fir(s).gamma;
    EXPECT_LE(g, prev + 1e-6) << "M=" << m;
    prev = g;
  }
}

TEST(DesignFir, SingleRatePathEqualsPolyphasePath) {
  const DesignSpec s = fixtures::tiny_spec();
  const DesignResult a = design_fir(s, DesignRoute::Auto);
  const DesignResult b = design_fir(s, DesignRoute::ForceMultiRate);
  EXPECT_NEAR(a.gamma, b.gamma, 1e-6);
  EXPECT_LT(max_abs_diff(a.filter.coeffs(), b.filter.coeffs()), 1e-5);
}

TEST(DesignFir, DelayCanBeAbsorbedByLongerFilter) {
  // Shifting an undelayed design by m*L taps reproduces its error norm, so the
  // delayed problem with m*L extra taps is never worse.
  for (int l : {1, 2}) {
    DesignSpec s = fixtures::tiny_spec();
    s.L = l;
    s.N = 2;
    s.m = 0;
    const double base = design_fir(s).gamma;
    s.m = 1;
    s.M += l;
    EXPECT_LE(design_fir(s).gamma, base + 1e-6) << "L=" << l;
  }
}

TEST(DesignFir, MultiRateRespectsTapPeriod) {
  DesignSpec s = fixtures::tiny_spec();
  s.L = 2;
  s.M = 4;
  const DesignResult r = design_fir(s);
  EXPECT_EQ(r.filter.taps(), 4u);
  EXPECT_DOUBLE_EQ(r.filter.tap_period(), 0.5);
  EXPECT_LE(r.verified_norm, r.gamma * (1 + 1e-3));
}

TEST(DesignFir, RejectsBadSpecs) {
  DesignSpec s = fixtures::tiny_spec();
  s.N = 3;
  s.L = 2;
  try {
    design_fir(s);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_EQ(e.subject(), "L");
  }
  s = fixtures::tiny_spec();
  s.target = fixtures::tf({1.0}, {1.0, -1.0});
  try {
    design_fir(s);
    FAIL();
  } catch (const StabilityError& e) {
    EXPECT_EQ(e.subject(), "target");
  }
  s = fixtures::tiny_spec();
  s.solver.barrier_mult = 1.0;
  EXPECT_THROW(design_fir(s), ParameterError);
  s = fixtures::tiny_spec();
  s.solver.max_newton = 3;
  EXPECT_THROW(design_fir(s), SolverError);
}

TEST(MultiDelay, SingleTermEqualsPlainDesign) {
  DesignSpec base = small_base();
  const std::vector<DelayedTerm> terms{{1, fixtures::lag(1.5)}};
  const MultiDelayResult md = design_multi_delay(terms, base);
  base.target = fixtures::lag(1.5);
  base.m = 1;
  const DesignResult r = design_fir(base);
  EXPECT_EQ(md.filter.coeffs(), r.filter.coeffs());
  ASSERT_EQ(md.gammas.size(), 1u);
  EXPECT_EQ(md.bound, r.gamma);
}

TEST(MultiDelay, DuplicateTermsDoubleEverything) {
  const DesignSpec base = small_base();
  const std::vector<DelayedTerm> one{{1, fixtures::lag(1.5)}};
  const std::vector<DelayedTerm> two{{1, fixtures::lag(1.5)}, {1, fixtures::lag(1.5)}};
  const MultiDelayResult a = design_multi_delay(one, base);
  const MultiDelayResult b = design_multi_delay(two, base);
  for (std::size_t k = 0; k < a.filter.taps(); ++k) EXPECT_NEAR(b.filter[k], 2.0 * a.filter[k], 1e-15);
  EXPECT_NEAR(b.bound, 2.0 * a.bound, 1e-15);
  const BoundCheck chk = verify_bound(two, b.filter, b.gammas, base);
  EXPECT_NEAR(chk.lhs, 2.0 * a.per_term[0].verified_norm, 1e-6);
}

TEST(MultiDelay, SmithPredictorStructure) {
  // G(s) - e^{-2 h s} G(s)
  const DesignSpec base = small_base();
  const StateSpace g = fixtures::lag(0.8);
  const std::vector<DelayedTerm> terms{{0, g}, {2, scale(g, -1.0)}};
  const MultiDelayResult md = design_multi_delay(terms, base);
  const BoundCheck chk = verify_bound(terms, md.filter, md.gammas, base);
  EXPECT_LE(chk.lhs, chk.rhs + 1e-6);
  EXPECT_NEAR(chk.rhs, md.bound, 1e-15);
}

TEST(MultiDelay, TriangleBoundOnRandomDraws) {
  std::mt19937 rng(102);
  std::uniform_int_distribution<int> delay(0, 2);
  const DesignSpec base = small_base();
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<DelayedTerm> terms{
        {delay(rng), oracle::random_stable_continuous(rng, 1, 1, 1, true)},
        {delay(rng), oracle::random_stable_continuous(rng, 1 + trial % 2, 1, 1, false)}};
    const MultiDelayResult md = design_multi_delay(terms, base);
    const BoundCheck chk = verify_bound(terms, md.filter, md.gammas, base);
    EXPECT_LE(chk.lhs, chk.rhs + 1e-6) << "trial " << trial;
  }
}

TEST(MultiDelay, VerifyBoundRejects) {
  const DesignSpec base = small_base();
  const std::vector<DelayedTerm> terms{{0, fixtures::lag(1.0)}};
  const FirFilter zero(std::vector<double>(3, 0.0), 1.0);
  const std::vector<double> tiny{1e-3};
  EXPECT_THROW(verify_bound(terms, zero, tiny, base), InvariantError);
  const std::vector<double> two{1.0, 1.0};
  EXPECT_THROW(verify_bound(terms, zero, two, base), DimensionError);
  const FirFilter short_filter(std::vector<double>(2, 0.0), 1.0);
  EXPECT_THROW(verify_bound(terms, short_filter, tiny, base), DimensionError);
  EXPECT_THROW(design_multi_delay(std::vector<DelayedTerm>{}, base), ParameterError);
}
