#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "lax/invariants.hpp"

using namespace lax;

namespace {

ConfigPtr one_of_each(Family fam, uint64_t conj_seed = 11) {
  auto alg = make_algebra(fam, 2);
  int d = alg.dim_rep;
  IntVector h = IntVector::Zero(d);
  h(0) = 1;
  h(d - 1) = -1;
  Rng rng(conj_seed);
  Matrix g = random_group_element(alg, rng, 0.2);
  return make_config(alg, {{Complex(0.3, 0.1), 1}}, {{Complex(-1.0, 0.4), h}}, {g});
}

// Independent Pfaffian oracle: recursive expansion along the first row.
Complex pfaffian_recursive(const Matrix& s) {
  int d = static_cast<int>(s.rows());
  if (d == 0) return 1.0;
  if (d % 2 == 1) return 0.0;
  Complex pf = 0;
  double sgn = 1.0;
  for (int j = 1; j < d; ++j) {
    Matrix minor(d - 2, d - 2);
    int a = 0;
    for (int r = 1; r < d; ++r) {
      if (r == j) continue;
      int b = 0;
      for (int c = 1; c < d; ++c) {
        if (c == j) continue;
        minor(a, b++) = s(r, c);
      }
      ++a;
    }
    pf += sgn * s(0, j) * pfaffian_recursive(minor);
    sgn = -sgn;
  }
  return pf;
}

std::vector<Complex> eigen_poly(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  std::vector<Complex> poly{1.0};
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<Complex> next(poly.size() + 1, 0.0);
    for (size_t t = 0; t < poly.size(); ++t) {
      next[t] += poly[t] * (-es.eigenvalues()(i));
      next[t + 1] += poly[t];
    }
    poly = next;
  }
  return poly;  // ascending in lambda
}

}  // namespace

TEST_CASE("char_coeffs: trivial and eigenvalue oracle") {
  CHECK(std::abs(char_coeffs(Matrix::Zero(3, 3))[0]) == 0);
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = Complex(1.5, 0.5);
  diag(1, 1) = -diag(0, 0);
  auto c = char_coeffs(diag);
  CHECK(std::abs(c[0]) < 1e-15);
  CHECK(std::abs(c[1] + diag(0, 0) * diag(0, 0)) < 1e-15);

  Rng rng(3);
  for (Family fam : {Family::A, Family::B, Family::C, Family::D}) {
    auto alg = make_algebra(fam, 2);
    Matrix m = random_member(alg, rng);
    auto r = char_coeffs(m);
    auto poly = eigen_poly(m);
    int d = alg.dim_rep;
    for (int j = 1; j <= d; ++j) CHECK(std::abs(r[j - 1] - poly[d - j]) < 1e-8);
    // gauge invariance
    Matrix g = random_group_element(alg, rng, 0.3);
    auto rg = char_coeffs(g * m * g.inverse());
    for (int j = 0; j < d; ++j) CHECK(std::abs(rg[j] - r[j]) < 1e-9);
  }
}

TEST_CASE("pfaffian: conventions and oracle") {
  auto alg = make_algebra(Family::D, 2);
  Matrix s(2, 2);
  s << 0.0, Complex(2.0, 1.0), Complex(-2.0, -1.0), 0.0;
  CHECK(std::abs(pfaffian_skew(s) - Complex(2.0, 1.0)) < 1e-14);

  Rng rng(8);
  for (int t = 0; t < 5; ++t) {
    Matrix a = random_matrix(6, 6, rng);
    Matrix skew = a - a.transpose();
    CHECK(std::abs(pfaffian_skew(skew) - pfaffian_recursive(skew)) <
          1e-10 * std::max(1.0, std::abs(pfaffian_recursive(skew))));
  }
  for (int t = 0; t < 5; ++t) {
    Matrix l = random_member(alg, rng);
    Complex pf = pfaffian(l, alg);
    CHECK(std::abs(pf * pf - l.determinant()) < 1e-10 * std::max(1.0, std::abs(pf * pf)));
  }
  // normalization: Pf(diag Cartan) = product of the h_i
  Matrix cart = Matrix::Zero(4, 4);
  cart(0, 0) = 2.0;
  cart(1, 1) = 3.0;
  cart(2, 2) = -3.0;
  cart(3, 3) = -2.0;
  CHECK(std::abs(pfaffian(cart, alg) - 6.0) < 1e-12);
  CHECK_THROWS_AS(pfaffian(cart, make_algebra(Family::C, 2)), LaxError);
}

TEST_CASE("spectral curve: divisor bounds, involution, holomorphy") {
  for (Family fam : {Family::B, Family::C, Family::D}) {
    auto cfg = one_of_each(fam);
    LaxElement l = sample_lax(build_constraint_system(cfg), 5u);
    SpectralCurveData curve = spectral_curve(l);
    for (double r : curve.fit_residuals) CHECK(r < 1e-8);
    CHECK(involution_defect(l, curve.sample_points) < 1e-10);
    CHECK(holomorphy_at_tyurin(l, 0) < 1e-9);
    if (fam == Family::B) {
      for (const auto& vals : curve.sample_values)
        CHECK(std::abs(vals.back()) < 1e-10 * std::max(1.0, std::abs(vals[1])));
    }
    // controlled corruption of the filtration constraint is visible
    LaxElement bad = l;
    Rng rng(4);
    bad.at_tyurin[0][0] += 0.1 * project_to_algebra(random_matrix(cfg->alg.dim_rep, cfg->alg.dim_rep, rng),
                                                    cfg->alg);
    CHECK(holomorphy_at_tyurin(bad, 0) > 1e-6);
  }
  // generic gl(2) has order-one involution defect
  auto alg = make_algebra(Family::A, 2);
  auto cfg = make_config(alg, {{Complex(0.5, 0), 1}}, {});
  LaxElement l = sample_lax(build_constraint_system(cfg), 2u);
  CHECK(involution_defect(l, curve_sample_points(*cfg, 8)) > 1e-3);
}

TEST_CASE("constant element has constant curve coefficients") {
  auto alg = make_algebra(Family::C, 2);
  auto cfg = make_config(alg, {{Complex(0.5, 0), 1}}, {});
  LaxElement l = LaxElement::zero(cfg);
  Rng rng(6);
  l.constant = random_member(alg, rng);
  RationalFunction r2 = reconstruct_rational(l, 2);
  Complex v1 = r2(Complex(2.0, 1.0)), v2 = r2(Complex(-3.0, 0.4));
  CHECK(std::abs(v1 - v2) < 1e-9 * std::max(1.0, std::abs(v1)));
}

TEST_CASE("gradients match the finite-difference oracle") {
  for (Family fam : {Family::A, Family::B, Family::C, Family::D}) {
    auto alg = make_algebra(fam, 2);
    Rng rng(17);
    for (int rep = 0; rep < 3; ++rep) {
      Matrix l = random_member(alg, rng);
      std::vector<InvariantId> ids{{InvariantKind::TracePower, 2},
                                   {InvariantKind::TracePower, 3}};
      for (int i = 1; i <= char_coeff_count(alg); ++i)
        ids.push_back({InvariantKind::CharCoeff, i});
      if (fam != Family::B) ids.push_back({InvariantKind::Det, 0});
      if (fam == Family::D) ids.push_back({InvariantKind::Pfaffian, 0});
      for (const auto& id : ids) {
        Matrix cf = grad_invariant(id, l, alg);
        Matrix fd = fd_gradient(id, l, alg, 1e-5);
        CHECK(inf_norm(cf - fd) / std::max(1.0, inf_norm(cf)) < 1e-6);
        CHECK(inf_norm(cf * l - l * cf) < 1e-9 * std::max(1.0, inf_norm(cf)));
        if (fam != Family::A && !(id.kind == InvariantKind::TracePower && id.index % 2))
          CHECK(membership_residual(cf, alg) < 1e-9);
      }
    }
  }
}

TEST_CASE("gradient closed forms: paper examples") {
  Rng rng(23);
  auto alg = make_algebra(Family::C, 2);
  Matrix l = random_member(alg, rng);
  // tr L^2 -> 2L, and the determinant example det(L) L^{-1}
  CHECK(inf_norm(grad_trace_power(l, 1) - 2.0 * l) < 1e-14);
  Matrix gd = grad_det(l);
  Matrix expect = l.determinant() * l.inverse();
  CHECK(inf_norm(gd - expect) < 1e-10 * inf_norm(expect));
  // d = 2 baseline: gradient of r_1 is -I
  auto gl2 = make_algebra(Family::A, 2);
  Matrix m = random_member(gl2, rng);
  CHECK(inf_norm(grad_char_coeff(m, 1) + Matrix::Identity(2, 2)) < 1e-14);
  // equivariance
  Matrix g = random_group_element(alg, rng, 0.3);
  Matrix lhs = g * grad_char_coeff(l, 2) * g.inverse();
  Matrix rhs = grad_char_coeff(g * l * g.inverse(), 2);
  CHECK(inf_norm(lhs - rhs) < 1e-9 * std::max(1.0, inf_norm(lhs)));
  // antiinvariance under the involution on the diagonal spectrum
  Matrix cart = Matrix::Zero(4, 4);
  cart(0, 0) = 1.7;
  cart(1, 1) = 0.6;
  cart(2, 2) = -0.6;
  cart(3, 3) = -1.7;
  Matrix ga = grad_char_coeff(cart, 2), gb = grad_char_coeff(Matrix(-cart), 2);
  CHECK(inf_norm(ga + gb) < 1e-12);
  CHECK_THROWS_AS(fd_gradient({InvariantKind::Det, 0}, l, alg, 1e-2), LaxError);
}

TEST_CASE("fd oracle is Richardson-consistent across eps") {
  auto alg = make_algebra(Family::D, 2);
  Rng rng(31);
  Matrix l = random_member(alg, rng);
  InvariantId id{InvariantKind::CharCoeff, 2};
  Matrix a = fd_gradient(id, l, alg, 1e-4);
  Matrix b = fd_gradient(id, l, alg, 1e-5);
  CHECK(inf_norm(a - b) < 1e-7);
}

TEST_CASE("exponent mu equals gradient eigenvalues") {
  for (Family fam : {Family::B, Family::C}) {
    auto alg = make_algebra(fam, 2);
    Rng rng(41);
    Matrix l = random_member(alg, rng);
    auto r = char_coeffs(l);
    Eigen::ComplexEigenSolver<Matrix> es(l);
    for (int i : {char_coeff_degree(alg, 1), char_coeff_degree(alg, 2)}) {
      Matrix g = grad_char_coeff(l, i);
      for (int j = 0; j < alg.dim_rep; ++j) {
        Complex lam = es.eigenvalues()(j);
        if (std::abs(lam) < 1e-8) continue;  // family B zero sheet excluded
        Vector v = es.eigenvectors().col(j);
        CHECK((g * v - exponent_mu(r, lam, i) * v).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
    CHECK_THROWS_AS(exponent_mu(r, Complex(0, 0), 2), LaxError);
  }
}
