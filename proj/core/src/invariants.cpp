#include "lax/invariants.hpp"

#include <Eigen/LU>

namespace lax {

int char_coeff_count(const AlgebraSpec& alg) {
  return alg.family == Family::A ? alg.dim_rep : alg.rank;
}

int char_coeff_degree(const AlgebraSpec& alg, int index) {
  return alg.family == Family::A ? index : 2 * index;
}

void validate_invariant(const InvariantId& id, const AlgebraSpec& alg) {
  switch (id.kind) {
    case InvariantKind::TracePower:
      if (id.index < 1) throw LaxError("invariant: trace power index must be >= 1");
      break;
    case InvariantKind::CharCoeff:
      if (id.index < 1 || id.index > char_coeff_count(alg))
        throw LaxError("invariant: char coefficient index out of range");
      break;
    case InvariantKind::Det:
      break;
    case InvariantKind::Pfaffian:
      if (alg.family != Family::D) throw LaxError("invariant: pfaffian requires family D");
      break;
  }
}

Complex eval_invariant(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg) {
  validate_invariant(id, alg);
  switch (id.kind) {
    case InvariantKind::TracePower: {
      Matrix p = l;
      for (int t = 1; t < id.index; ++t) p = p * l;
      return p.trace();
    }
    case InvariantKind::CharCoeff:
      return char_coeffs(l)[char_coeff_degree(alg, id.index) - 1];
    case InvariantKind::Det:
      return l.determinant();
    case InvariantKind::Pfaffian:
      return pfaffian(l, alg);
  }
  throw LaxError("invariant: unknown kind");
}

Matrix grad_trace_power(const Matrix& l, int n) {
  int d = static_cast<int>(l.rows());
  Matrix p = Matrix::Identity(d, d);
  for (int t = 0; t < n; ++t) p = p * l;
  return static_cast<double>(n + 1) * p;
}

// grad r_i = -(L^{i-1} + r_1 L^{i-2} + ... + r_{i-1} I): the degree-(i-1)
// truncation of -det(lambda - L)(lambda - L)^{-1} at lambda = L, which is
// division-free and hence valid for singular L (the family-B case).  By
// Cayley-Hamilton it equals sum_{j >= i} r_j L^{i-j-1} on invertible L,
// fixing the sign in the negative-power form of the gradient.
Matrix grad_char_coeff(const Matrix& l, int i) {
  int d = static_cast<int>(l.rows());
  if (i < 1 || i > d) throw LaxError("grad_char_coeff: index out of range");
  auto r = char_coeffs(l);
  Matrix acc = -Matrix::Identity(d, d);  // -r_0 I
  for (int t = 1; t < i; ++t) acc = acc * l - r[t - 1] * Matrix::Identity(d, d);
  return acc;
}

Matrix grad_det(const Matrix& l) {
  int d = static_cast<int>(l.rows());
  double sgn = (d % 2 == 0) ? 1.0 : -1.0;  // det L = (-1)^d r_d
  return sgn * grad_char_coeff(l, d);
}

Matrix grad_pfaffian(const Matrix& l, const AlgebraSpec& alg) {
  Complex pf = pfaffian(l, alg);
  Eigen::PartialPivLU<Matrix> lu(l);
  double rc = lu.rcond();
  if (!(rc > 1e-12)) throw LaxError("grad_pfaffian: singular L");
  return 0.5 * pf * lu.solve(Matrix::Identity(l.rows(), l.cols()));
}

Matrix grad_invariant(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg) {
  validate_invariant(id, alg);
  switch (id.kind) {
    case InvariantKind::TracePower: {
      // Restricted to g the trace pairing picks out the g-component; for
      // B/C/D this kills the odd powers (tr L^p vanishes identically).
      Matrix g = grad_trace_power(l, id.index - 1);
      return alg.family == Family::A ? g : project_to_algebra(g, alg);
    }
    case InvariantKind::CharCoeff:
      return grad_char_coeff(l, char_coeff_degree(alg, id.index));
    case InvariantKind::Det:
      return grad_det(l);
    case InvariantKind::Pfaffian:
      return grad_pfaffian(l, alg);
  }
  throw LaxError("invariant: unknown kind");
}

Matrix fd_gradient(const std::function<Complex(const Matrix&)>& chi, const Matrix& l,
                   const AlgebraSpec& alg, double eps) {
  if (eps < 1e-9 || eps > 1e-3) throw LaxError("fd_gradient: eps outside [1e-9, 1e-3]");
  auto basis = algebra_basis(alg);
  int m = static_cast<int>(basis.size());
  Vector rhs(m);
  for (int i = 0; i < m; ++i)
    rhs(i) = (chi(l + eps * basis[i]) - chi(l - eps * basis[i])) / (2.0 * eps);
  Matrix gram(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = (basis[i] * basis[j]).trace();
  Vector a = gram.fullPivLu().solve(rhs);
  Matrix g = Matrix::Zero(l.rows(), l.cols());
  for (int i = 0; i < m; ++i) g += a(i) * basis[i];
  return g;
}

Matrix fd_gradient(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg,
                   double eps) {
  return fd_gradient([&](const Matrix& x) { return eval_invariant(id, x, alg); }, l, alg,
                     eps);
}

Complex exponent_mu(const std::vector<Complex>& r, Complex lambda_j, int i) {
  int d = static_cast<int>(r.size());
  if (std::abs(lambda_j) < 1e-14) throw LaxError("exponent_mu: zero eigenvalue sheet");
  if (i < 1 || i > d) throw LaxError("exponent_mu: index out of range");
  Complex mu = 0;
  for (int jp = i; jp <= d; ++jp) mu += r[jp - 1] * std::pow(lambda_j, Complex(i - jp - 1));
  return mu;
}

}  // namespace lax
