#include "oracles.hpp"

#include <sdfir/errors.hpp>
#include <sdfir/hinf.hpp>
#include <sdfir/state_space.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sdfir;

namespace {

StateSpace gain(double k, double period = 1.0) {
  return StateSpace::static_gain(Matrix::Constant(1, 1, k), TimeDomain::Discrete, period);
}

std::vector<Complex> circle_points(int count) {
  std::vector<Complex> z;
  for (int k = 0; k < count; ++k) z.push_back(std::polar(1.0, 0.05 + 3.0 * k / count));
  return z;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(StateSpace, RejectsInconsistentDimensions) {
  EXPECT_THROW(StateSpace::discrete(Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Zero(1, 2),
                                    Matrix::Zero(1, 1), 1.0),
               DimensionError);
  EXPECT_THROW(StateSpace::discrete(Matrix::Zero(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                                    Matrix::Zero(1, 1), 0.0),
               ParameterError);
}

TEST(StateSpace, StabilityQueriesUseMargin) {
  EXPECT_TRUE(StateSpace::discrete(Matrix::Constant(1, 1, 0.999), Matrix::Ones(1, 1),
                                   Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1.0)
                  .is_stable());
  EXPECT_FALSE(StateSpace::discrete(Matrix::Constant(1, 1, 1.0 - 1e-10), Matrix::Ones(1, 1),
                                    Matrix::Ones(1, 1), Matrix::Zero(1, 1), 1.0)
                   .is_stable());
  EXPECT_FALSE(StateSpace::continuous(Matrix::Constant(1, 1, -1e-10), Matrix::Ones(1, 1),
                                      Matrix::Ones(1, 1), Matrix::Zero(1, 1))
                   .is_stable());
}

TEST(Add, StaticGains) {
  const StateSpace g = add(gain(3), gain(2), Sign::Minus);
  EXPECT_EQ(g.states(), 0);
  EXPECT_DOUBLE_EQ(g.D()(0, 0), 1.0);
}

TEST(Add, BlockDiagonalLayout) {
  std::mt19937 rng(21);
  const StateSpace g1 = oracle::random_stable_discrete(rng, 2, 1, 1);
  const StateSpace g2 = oracle::random_stable_discrete(rng, 1, 1, 1);
  const StateSpace g = add(g1, g2, Sign::Minus);
  ASSERT_EQ(g.states(), 3);
  EXPECT_EQ(g.A().topLeftCorner(2, 2), g1.A());
  EXPECT_EQ(g.A().bottomRightCorner(1, 1), g2.A());
  EXPECT_TRUE(g.A().topRightCorner(2, 1).isZero(0.0));
  EXPECT_TRUE(g.A().bottomLeftCorner(1, 2).isZero(0.0));
  EXPECT_EQ(g.B().bottomRows(1), -g2.B());
  EXPECT_DOUBLE_EQ(g.D()(0, 0), g1.D()(0, 0) - g2.D()(0, 0));
}

TEST(Add, RejectsMixedDomains) {
  const StateSpace c = StateSpace::static_gain(Matrix::Ones(1, 1), TimeDomain::Continuous);
  EXPECT_THROW(add(gain(1), c), InterconnectionError);
  EXPECT_THROW(add(gain(1, 1.0), gain(1, 0.5)), InterconnectionError);
  EXPECT_THROW(add(gain(1), StateSpace::static_gain(Matrix::Ones(2, 1), TimeDomain::Discrete, 1.0)),
               InterconnectionError);
}

TEST(Series, StaticGains) { EXPECT_DOUBLE_EQ(series(gain(2), gain(3)).D()(0, 0), 6.0); }

TEST(Series, LowerBlockTriangularWithSecondSystemFirst) {
  std::mt19937 rng(22);
  const StateSpace g1 = oracle::random_stable_discrete(rng, 2, 1, 1);
  const StateSpace g2 = oracle::random_stable_discrete(rng, 3, 1, 1);
  const StateSpace g = series(g1, g2);
  ASSERT_EQ(g.states(), 5);
  EXPECT_EQ(g.A().topLeftCorner(3, 3), g2.A());
  EXPECT_EQ(g.A().bottomRightCorner(2, 2), g1.A());
  EXPECT_TRUE(g.A().topRightCorner(3, 2).isZero(0.0));
  EXPECT_LT((g.A().bottomLeftCorner(2, 3) - g1.B() * g2.C()).norm(), 1e-15);
  EXPECT_LT((g.C().leftCols(3) - g1.D() * g2.C()).norm(), 1e-15);
}

TEST(Series, RejectsInnerDimensionMismatch) {
  EXPECT_THROW(series(gain(1), StateSpace::static_gain(Matrix::Ones(2, 1), TimeDomain::Discrete, 1.0)),
               InterconnectionError);
}

TEST(Interconnection, FrequencyDomainHomomorphism) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const StateSpace g1 = oracle::random_stable_discrete(rng, 3, 1, 1);
    const StateSpace g2 = oracle::random_stable_discrete(rng, 2, 1, 1);
    const StateSpace sum = add(g1, g2, Sign::Plus);
    const StateSpace diff = add(g1, g2, Sign::Minus);
    const StateSpace prod = series(g1, g2);
    for (Complex z : circle_points(16)) {
      const CMatrix r1 = oracle::resolvent(g1, z), r2 = oracle::resolvent(g2, z);
      EXPECT_LT(max_abs(freq_response(sum, z) - (r1 + r2)), 1e-12);
      EXPECT_LT(max_abs(freq_response(diff, z) - (r1 - r2)), 1e-12);
      EXPECT_LT(max_abs(freq_response(prod, z) - r1 * r2), 1e-10);
    }
  }
}

TEST(Interconnection, MimoHomomorphism) {
  std::mt19937 rng(24);
  const StateSpace g1 = oracle::random_stable_discrete(rng, 3, 2, 3);
  const StateSpace g2 = oracle::random_stable_discrete(rng, 2, 3, 2);
  const StateSpace prod = series(g1, g2);
  for (Complex z : circle_points(8)) {
    EXPECT_LT(max_abs(freq_response(prod, z) - oracle::resolvent(g1, z) * oracle::resolvent(g2, z)), 1e-9);
  }
}

TEST(Zoh, Integrator) {
  const StateSpace g = StateSpace::continuous(Matrix::Zero(1, 1), Matrix::Ones(1, 1),
                                              Matrix::Ones(1, 1), Matrix::Zero(1, 1));
  const StateSpace d = zoh_discretize(g, 0.3);
  EXPECT_NEAR(d.A()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(d.B()(0, 0), 0.3, 1e-12);
  EXPECT_EQ(d.sample_period(), 0.3);
}

TEST(Zoh, FirstOrderLag) {
  const StateSpace g = StateSpace::continuous(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1),
                                              Matrix::Ones(1, 1), Matrix::Zero(1, 1));
  const StateSpace d = zoh_discretize(g, 1.0);
  EXPECT_NEAR(d.A()(0, 0), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(d.B()(0, 0), 1.0 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(d.A()(0, 0), 0.3678794, 1e-7);
  EXPECT_NEAR(d.B()(0, 0), 0.6321206, 1e-7);
}

TEST(Zoh, MatchesQuadrature) {
  std::mt19937 rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpace g = oracle::random_stable_continuous(rng, 3, 1, 1, false);
    const StateSpace d = zoh_discretize(g, 0.8);
    EXPECT_LT((d.B() - oracle::simpson_hold_integral(g.A(), g.B(), 0.8)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(d.C(), g.C());
    EXPECT_EQ(d.D(), g.D());
  }
}

TEST(Zoh, PreservesStability) {
  std::mt19937 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpace g = oracle::random_stable_continuous(rng, 4, 1, 1, true);
    ASSERT_TRUE(g.is_stable());
    EXPECT_TRUE(zoh_discretize(g, 0.5 + trial * 0.1).is_stable());
  }
}

TEST(Zoh, ExactOnSteps) {
  // y(t) = (b/a)(1 - e^{-a t}) for G = b / (s + a) under a unit step.
  for (double a : {0.5, 1.0, 3.0}) {
    const double b = 2.0, h = 0.25;
    const StateSpace g = StateSpace::continuous(Matrix::Constant(1, 1, -a), Matrix::Constant(1, 1, b),
                                                Matrix::Ones(1, 1), Matrix::Zero(1, 1));
    const Matrix y = oracle::simulate(zoh_discretize(g, h), Matrix::Ones(1, 40));
    for (int k = 0; k < 40; ++k) {
      EXPECT_NEAR(y(0, k), b / a * (1.0 - std::exp(-a * h * k)), 1e-9) << "a=" << a << " k=" << k;
    }
  }
}

TEST(Zoh, RejectsDiscreteInput) { EXPECT_THROW(zoh_discretize(gain(1), 1.0), DomainError); }

TEST(FreqResponse, StaticGain) {
  const StateSpace g = gain(2.5);
  EXPECT_EQ(freq_response(g, Complex(0.3, 0.7))(0, 0), Complex(2.5, 0.0));
}

TEST(FreqResponse, SimplePole) {
  const std::vector<double> num{1.0}, den{1.0, -0.5};
  const StateSpace g = from_transfer_function(num, den, 1.0);
  EXPECT_NEAR(std::abs(freq_response(g, 1.0)(0, 0) - 2.0), 0.0, 1e-14);
}

TEST(FreqResponse, MatchesTransferPolynomial) {
  std::mt19937 rng(27);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    // Stable denominator from random roots inside the disc.
    std::vector<double> den{1.0};
    for (int k = 0; k < 2; ++k) {
      const Complex r = std::polar(0.3 + 0.5 * std::abs(std::sin(nd(rng))), nd(rng));
      den = oracle::convolve(den, {1.0, -2.0 * r.real(), std::norm(r)});
    }
    std::vector<double> num(4);
    for (double& v : num) v = nd(rng);
    const StateSpace g = from_transfer_function(num, den, 1.0);
    for (Complex z : circle_points(16)) {
      const Complex expected = oracle::polyval(num, z) / oracle::polyval(den, z);
      EXPECT_LT(std::abs(freq_response(g, z)(0, 0) - expected), 1e-9);
    }
  }
}

TEST(FreqResponse, PoleRaises) {
  const std::vector<double> num{1.0}, den{1.0, -0.5};
  EXPECT_THROW(freq_response(from_transfer_function(num, den, 1.0), 0.5), PoleEvaluationError);
}

TEST(ResponseEvaluator, MatchesResolvent) {
  std::mt19937 rng(28);
  const StateSpace g = oracle::random_stable_discrete(rng, 6, 2, 3);
  const ResponseEvaluator eval(g);
  for (Complex z : circle_points(20)) EXPECT_LT(max_abs(eval(z) - oracle::resolvent(g, z)), 1e-11);
}

TEST(DelayAugment, ZeroDelayIsIdentity) {
  std::mt19937 rng(29);
  const StateSpace g = oracle::random_stable_discrete(rng, 2, 1, 1);
  const StateSpace d = delay_augment(g, 0);
  EXPECT_EQ(d.A(), g.A());
  EXPECT_EQ(d.C(), g.C());
}

TEST(DelayAugment, PureDelayImpulse) {
  const StateSpace d = delay_augment(gain(1), 2);
  EXPECT_EQ(d.states(), 2);
  const std::vector<double> y = oracle::impulse(d, 5);
  EXPECT_EQ(y, (std::vector<double>{0, 0, 1, 0, 0}));
}

TEST(DelayAugment, ShiftsResponse) {
  std::mt19937 rng(30);
  const StateSpace g = oracle::random_stable_discrete(rng, 3, 2, 1);
  const StateSpace d = delay_augment(g, 3);
  EXPECT_EQ(d.states(), 3 + 3 * 2);
  for (Complex z : circle_points(16)) {
    EXPECT_LT(max_abs(freq_response(d, z) - std::pow(z, -3) * oracle::resolvent(g, z)), 1e-10);
  }
}

TEST(DelayAugment, PreservesNorm) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpace g = oracle::random_stable_discrete(rng, 2, 1, 1);
    EXPECT_NEAR(hinf_norm(delay_augment(g, 1 + trial)).value, hinf_norm(g).value,
                1e-6 * hinf_norm(g).value);
  }
}

TEST(TransferFunction, ControllableCanonicalMatchesPolynomial) {
  const std::vector<double> num{2.0, 1.0}, den{1.0, 3.0, 2.0};
  const StateSpace g = from_transfer_function(num, den);
  EXPECT_FALSE(g.is_discrete());
  for (double w : {0.1, 1.0, 7.0}) {
    const Complex s(0.0, w);
    EXPECT_LT(std::abs(freq_response(g, s)(0, 0) - oracle::polyval(num, s) / oracle::polyval(den, s)),
              1e-12);
  }
}

TEST(TransferFunction, RejectsImproper) {
  const std::vector<double> num{1.0, 0.0, 0.0}, den{1.0, 1.0};
  EXPECT_THROW(from_transfer_function(num, den), ParameterError);
}

TEST(ControllableBasis, FindsReachableSubspace) {
  // Two identical first-order modes driven by the same input: rank one.
  Matrix a = Matrix::Identity(2, 2) * 0.5;
  Matrix b = Matrix::Ones(2, 1);
  EXPECT_EQ(controllable_basis(a, b).cols(), 1);
  a(1, 1) = 0.3;
  EXPECT_EQ(controllable_basis(a, b).cols(), 2);
}
