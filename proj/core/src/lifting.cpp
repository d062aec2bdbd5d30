#include "sdfir/lifting.hpp"

#include "sdfir/errors.hpp"

#include <vector>

namespace sdfir {

LiftedSystem lift(const StateSpace& g, int n) {
  if (!g.is_discrete()) throw DomainError("lift needs a discrete-time system");
  if (n < 1) throw ParameterError("lifting factor must be >= 1");
  const Index ns = g.states(), p = g.outputs(), q = g.inputs();
  const double base = *g.sample_period();

  // powers[k] = A^k, k = 0..N
  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(n) + 1);
  powers.push_back(Matrix::Identity(ns, ns));
  for (int k = 1; k <= n; ++k) powers.push_back(powers.back() * g.A());

  Matrix b(ns, q * n);
  for (int j = 0; j < n; ++j) b.middleCols(q * j, q) = powers[static_cast<std::size_t>(n - 1 - j)] * g.B();

  Matrix c(p * n, ns);
  for (int i = 0; i < n; ++i) c.middleRows(p * i, p) = g.C() * powers[static_cast<std::size_t>(i)];

  // Markov parameters: h[0] = D, h[k] = C A^{k-1} B.
  std::vector<Matrix> markov;
  markov.push_back(g.D());
  for (int k = 1; k < n; ++k) markov.push_back(g.C() * powers[static_cast<std::size_t>(k - 1)] * g.B());
  Matrix d = Matrix::Zero(p * n, q * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) d.block(p * i, q * j, p, q) = markov[static_cast<std::size_t>(i - j)];
  }
  return LiftedSystem{StateSpace::discrete(powers.back(), std::move(b), std::move(c),
                                           std::move(d), base * n),
                      n, base};
}

Matrix make_hold_vector(int n) {
  if (n < 1) throw ParameterError("hold length must be >= 1");
  return Matrix::Ones(n, 1);
}

Matrix make_sample_row(int n) {
  if (n < 1) throw ParameterError("sampler length must be >= 1");
  Matrix s = Matrix::Zero(1, n);
  s(0, 0) = 1.0;
  return s;
}

Matrix make_multirate_hold(int n, int l) {
  if (n < 1 || l < 1) throw ParameterError("multirate hold needs N, L >= 1");
  if (n % l != 0) throw ParameterError("upsampling ratio L must divide N");
  const int p = n / l;
  Matrix h = Matrix::Zero(n, l);
  for (int j = 0; j < l; ++j) h.block(j * p, j, p, 1).setOnes();
  return h;
}

StateSpace lift_fir_polyphase(const FirFilter& k, int l) {
  if (l < 1) throw ParameterError("polyphase factor must be >= 1");
  const StateSpace ks = realize_ss(k);
  const Index n = ks.states();
  const Matrix& ak = ks.A();
  const Matrix& bk = ks.B();
  const Matrix& ck = ks.C();

  Matrix c(l, n);
  Matrix d(l, 1);
  Matrix ck_pow = ck;  // C_K A_K^i
  d(0, 0) = ks.D()(0, 0);
  for (int i = 0; i < l; ++i) {
    c.row(i) = ck_pow;
    if (i + 1 < l) d(i + 1, 0) = (ck_pow * bk)(0, 0);
    ck_pow = ck_pow * ak;
  }
  Matrix a = matrix_power(ak, l);
  Matrix b = matrix_power(ak, l - 1) * bk;
  return StateSpace::discrete(std::move(a), std::move(b), std::move(c), std::move(d),
                              k.tap_period() * l);
}

}  // namespace sdfir
