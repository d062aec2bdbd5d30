#include "sdfir/kyp_lmi.hpp"

#include "sdfir/errors.hpp"

#include <algorithm>

namespace sdfir {

Index vech_size(Index n) { return n * (n + 1) / 2; }

Index vech_index(Index n, Index i, Index j) {
  if (i < 0 || j < 0 || i >= n || j >= n) throw DimensionError("vech index out of range");
  if (i < j) std::swap(i, j);
  return j * n - j * (j - 1) / 2 + (i - j);
}

Vector vech(const Matrix& x) {
  require_square(x, "X");
  const Index n = x.rows();
  Vector out(vech_size(n));
  Index k = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) out(k++) = 0.5 * (x(i, j) + x(j, i));
  return out;
}

Matrix unvech(const Vector& packed, Index n) {
  if (packed.size() != vech_size(n)) throw DimensionError("packed vector has wrong length");
  Matrix x(n, n);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      x(i, j) = packed(k);
      x(j, i) = packed(k);
      ++k;
    }
  }
  return x;
}

namespace {

struct LinearOutput {
  Index var;
  Matrix c;
  Matrix d;
};

struct KypData {
  const Matrix& a;
  const Matrix& b;
  const Matrix& c0;
  const Matrix& d0;
  std::vector<LinearOutput> linear;
  std::optional<Index> gamma_var;  // otherwise gamma_const is folded into F0
  double gamma_const = 0.0;
  Index x_offset = 0;
  Index num_vars = 0;
};

// Row r of [C D 0] as a vector of the block dimension, or empty when zero.
Vector output_row(const Matrix& c, const Matrix& d, Index r, Index dim) {
  Vector w = Vector::Zero(dim);
  w.head(c.cols()) = c.row(r).transpose();
  w.segment(c.cols(), d.cols()) = d.row(r).transpose();
  return w;
}

LmiProblem build(const KypData& in) {
  const Index n = in.a.rows();
  const Index q = in.b.cols();
  const Index p = in.c0.rows();
  const Index dim = n + q + p;

  AffineBlock kyp(dim, in.num_vars);
  AffineBlock pos(std::max<Index>(n, 1), in.num_vars);

  Matrix f0 = Matrix::Zero(dim, dim);
  f0.block(n + q, 0, p, n) = in.c0;
  f0.block(n + q, n, p, q) = in.d0;
  f0.block(0, n + q, n, p) = in.c0.transpose();
  f0.block(n, n + q, q, p) = in.d0.transpose();
  if (!in.gamma_var) f0.diagonal().tail(q + p).array() -= in.gamma_const;
  kyp.set_constant(f0);

  // Rows of [A B 0], i.e. x' [A B]' X [A B] x = sum_ij X_ij (row_i x)(row_j x).
  std::vector<Index> prow(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Vector r = Vector::Zero(dim);
    r.head(n) = in.a.row(i).transpose();
    r.segment(n, q) = in.b.row(i).transpose();
    prow[static_cast<std::size_t>(i)] = kyp.add_vector(r);
  }

  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const Index v = in.x_offset + vech_index(n, i, j);
      const double w = i == j ? 0.5 : 1.0;
      kyp.add_dyad(v, prow[static_cast<std::size_t>(i)], prow[static_cast<std::size_t>(j)], w);
      kyp.add_dyad(v, kyp.unit_vector(i), kyp.unit_vector(j), -w);
      pos.add_dyad(v, pos.unit_vector(i), pos.unit_vector(j), -w);
    }
  }

  if (in.gamma_var) {
    for (Index k = n; k < dim; ++k) {
      const Index e = kyp.unit_vector(k);
      kyp.add_dyad(*in.gamma_var, e, e, -0.5);
    }
  }

  for (const auto& lin : in.linear) {
    for (Index r = 0; r < p; ++r) {
      const Vector w = output_row(lin.c, lin.d, r, dim);
      if (w.isZero(0.0)) continue;
      kyp.add_dyad(lin.var, kyp.unit_vector(n + q + r), kyp.add_vector(w), 1.0);
    }
  }

  LmiProblem out;
  out.num_vars = in.num_vars;
  out.objective = Vector::Zero(in.num_vars);
  out.blocks.push_back(std::move(kyp));
  if (n > 0) out.blocks.push_back(std::move(pos));
  return out;
}

}  // namespace

StateCoordinates minimal_coordinates(const Matrix& a, const Matrix& b, const Matrix& c_all,
                                     double rel_tol) {
  require_square(a, "A");
  const Index n = a.rows();
  if (b.rows() != n || c_all.cols() != n) throw DimensionError("realization sizes disagree");
  const Matrix v = controllable_basis(a, b);
  StateCoordinates out;
  if (v.cols() == 0) {
    out.to_reduced.resize(0, n);
    out.from_reduced.resize(n, 0);
    return out;
  }
  const Matrix ar = v.transpose() * a * v;
  const Matrix br = v.transpose() * b;
  const Matrix cr = c_all * v;
  const Matrix wc = discrete_lyapunov(ar, br * br.transpose());
  const Matrix wo = discrete_lyapunov(ar.transpose(), cr.transpose() * cr);

  auto sqrt_factor = [](const Matrix& w) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(w);
    return Matrix(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal());
  };
  const Matrix rc = sqrt_factor(wc);
  const Matrix ro = sqrt_factor(wo);
  Eigen::JacobiSVD<Matrix> svd(ro.transpose() * rc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  Index r = 0;
  while (r < sigma.size() && sigma(r) > rel_tol * sigma(0)) ++r;

  const Vector inv_sqrt = sigma.head(r).cwiseSqrt().cwiseInverse();
  const Matrix t = rc * svd.matrixV().leftCols(r) * inv_sqrt.asDiagonal();
  const Matrix tinv = inv_sqrt.asDiagonal() * svd.matrixU().leftCols(r).transpose() * ro.transpose();
  out.from_reduced = v * t;
  out.to_reduced = tinv * v.transpose();
  out.hankel = sigma.head(r);
  return out;
}

Vector KypDesignProblem::start_point(double gamma, double x_scale) const {
  Vector x = Vector::Zero(problem.num_vars);
  x(gamma_index) = gamma;
  for (Index i = 0; i < states; ++i) x(x_offset() + vech_index(states, i, i)) = x_scale;
  return x;
}

std::vector<double> KypDesignProblem::coefficients(const Vector& x) const {
  std::vector<double> a(static_cast<std::size_t>(taps));
  for (Index k = 0; k < taps; ++k) a[static_cast<std::size_t>(k)] = x(coeff_offset + k);
  return a;
}

Matrix KypDesignProblem::lyapunov(const Vector& x) const {
  return unvech(x.segment(x_offset(), vech_size(states)), states);
}

KypDesignProblem make_kyp_design_problem(const AffineErrorSystem& e) {
  KypDesignProblem out;
  Matrix c_all(e.outputs() * (e.taps + 1), e.states());
  c_all.topRows(e.outputs()) = e.C0;
  for (Index k = 0; k < e.taps; ++k) {
    c_all.middleRows((k + 1) * e.outputs(), e.outputs()) = e.C_lin[static_cast<std::size_t>(k)];
  }
  out.coords = minimal_coordinates(e.A, e.B, c_all);
  const Matrix& v = out.coords.from_reduced;
  const Matrix& w = out.coords.to_reduced;
  out.states = out.coords.states();
  out.taps = e.taps;
  const Matrix a = w * e.A * v;
  const Matrix b = w * e.B;
  const Matrix c0 = e.C0 * v;
  KypData in{a, b, c0, e.D0, {}, KypDesignProblem::gamma_index, 0.0,
             out.x_offset(), out.x_offset() + vech_size(out.states)};
  for (Index k = 0; k < e.taps; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    in.linear.push_back({KypDesignProblem::coeff_offset + k, e.C_lin[idx] * v, e.D_lin[idx]});
  }
  out.problem = build(in);
  out.problem.objective(KypDesignProblem::gamma_index) = 1.0;
  return out;
}

LmiProblem make_kyp_feasibility_problem(const StateSpace& g, double gamma) {
  if (!g.is_discrete()) throw DomainError("KYP test needs a discrete-time system");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be positive");
  const StateCoordinates coords = minimal_coordinates(g.A(), g.B(), g.C());
  const Matrix a = coords.to_reduced * g.A() * coords.from_reduced;
  const Matrix b = coords.to_reduced * g.B();
  const Matrix c = g.C() * coords.from_reduced;
  KypData in{a, b, c, g.D(), {}, std::nullopt, gamma, 0, vech_size(coords.states())};
  return build(in);
}

}  // namespace sdfir
