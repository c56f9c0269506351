#include <doctest.h>

#include "lax/laxspace.hpp"

using namespace lax;

namespace {

ConfigPtr small_config(Family fam, uint64_t conj_seed = 11) {
  auto alg = make_algebra(fam, 2);
  int d = alg.dim_rep;
  IntVector h = IntVector::Zero(d);
  h(0) = 1;
  h(d - 1) = -1;
  Rng rng(conj_seed);
  Matrix g = random_group_element(alg, rng, 0.2);
  return make_config(alg, {{Complex(0.3, 0.1), 1}}, {{Complex(-1.0, 0.4), h}}, {g});
}

}  // namespace

TEST_CASE("algebra dimensions and membership") {
  struct Row {
    Family fam;
    int n, dim_rep, dim_alg;
  };
  for (Row row : {Row{Family::A, 2, 2, 4}, Row{Family::B, 2, 5, 10}, Row{Family::C, 2, 4, 10},
                  Row{Family::D, 2, 4, 6}, Row{Family::B, 3, 7, 21}, Row{Family::C, 3, 6, 21},
                  Row{Family::D, 3, 6, 15}}) {
    auto alg = make_algebra(row.fam, row.n);
    CHECK(alg.dim_rep == row.dim_rep);
    CHECK(alg.dim_algebra() == row.dim_alg);
    CHECK(static_cast<int>(algebra_basis(alg).size()) == row.dim_alg);
    Rng rng(5);
    Matrix x = random_member(alg, rng);
    CHECK(membership_residual(x, alg) < 1e-12);
    // projection is idempotent and lands in g
    Matrix y = random_matrix(alg.dim_rep, alg.dim_rep, rng);
    Matrix p = project_to_algebra(y, alg);
    CHECK(membership_residual(p, alg) < 1e-12);
    CHECK(inf_norm(project_to_algebra(p, alg) - p) < 1e-12);
    Matrix g = random_group_element(alg, rng, 0.3);
    CHECK(group_residual(g, alg) < 1e-10);
    CHECK(group_residual(project_to_group(g + 1e-3 * random_matrix(alg.dim_rep, alg.dim_rep, rng), alg),
                         alg) < 1e-10);
  }
}

TEST_CASE("grading structure") {
  for (Family fam : {Family::B, Family::C, Family::D}) {
    auto alg = make_algebra(fam, 2);
    int d = alg.dim_rep;
    IntVector h = IntVector::Zero(d);
    h(0) = 2;
    h(1) = 1;
    h(d - 1) = -2;
    h(d - 2) = -1;
    auto dec = grading(alg, h);
    int total = 0, depth = dec.h.depth;
    for (const auto& [p, piece] : dec.pieces) total += static_cast<int>(piece.size());
    CHECK(total == alg.dim_algebra());
    // filtration is nested and exhausts g at the top
    for (int p = -depth; p < depth; ++p)
      CHECK(dec.filtration_dim(p) <= dec.filtration_dim(p + 1));
    CHECK(dec.filtration_dim(depth) == alg.dim_algebra());
    int vtotal = 0;
    for (int i = -depth; i <= depth; ++i) vtotal += dec.eigenspace_dim(i);
    CHECK(vtotal == d);
    CHECK(static_cast<int>(simple_roots(alg).size()) == alg.rank);
  }
}

TEST_CASE("laurent arithmetic: geometric series oracle") {
  // s = sum_{k>=0} z^k is the inverse of (1 - z)
  int hi = 12;
  Series one_minus_z = Series::zero(0, hi);
  one_minus_z.ref(0) = 1.0;
  one_minus_z.ref(1) = -1.0;
  Series s = Series::zero(0, hi);
  for (int k = 0; k <= hi; ++k) s.ref(k) = 1.0;
  Series prod = one_minus_z * s;
  CHECK(prod.lo() == 0);
  CHECK(std::abs(prod.at(0) - 1.0) < 1e-15);
  for (int k = 1; k <= prod.hi(); ++k) CHECK(std::abs(prod.at(k)) < 1e-15);
  Series inv = one_minus_z.inverse();
  for (int k = 0; k <= inv.hi(); ++k) CHECK(std::abs(inv.at(k) - 1.0) < 1e-14);
}

TEST_CASE("laurent windows under multiplication") {
  Series a = Series::zero(-2, 3);  // known on [-2, 3]
  Series b = Series::zero(1, 4);   // known on [1, 4]
  a.ref(-2) = 1.0;
  b.ref(1) = 1.0;
  Series p = a * b;
  CHECK(p.lo() == -1);
  CHECK(p.hi() == std::min(-2 + 4, 1 + 3));
  Series sum = a + b;
  CHECK(sum.lo() == -2);
  CHECK(sum.hi() == 3);
}

TEST_CASE("conjugation by z^h shifts entries") {
  Rng rng(2);
  Matrix a = random_matrix(3, 3, rng);
  LaurentMatrix germ(0, {a});
  IntVector h(3);
  h << 1, 0, -1;
  LaurentMatrix conj = conjugate_by_z_power(germ, h, +1, -5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int shift = h(i) - h(j);
      CHECK(std::abs(conj.at(i, j).at(shift) - a(i, j)) < 1e-15);
    }
  LaurentMatrix back = conjugate_by_z_power(conj, h, -1, -5);
  CHECK(inf_norm(back.coeff(0) - a) < 1e-15);
}

TEST_CASE("lax space: dual-route dimension and Tyurin form") {
  for (Family fam : {Family::B, Family::C, Family::D}) {
    auto cfg = small_config(fam);
    LaxBasis basis = build_constraint_system(cfg);
    LaxBasis alt = build_constraint_system_normal_form(cfg);
    CHECK(basis.dimension() == alt.dimension());
    CHECK(basis.dimension() > 0);
    CHECK(basis.sv_gap > 1e3);
    LaxElement l = sample_lax(basis, 9u);
    CHECK(check_tyurin_form(l, 0) < 1e-10);

    // corrupting a Tyurin coefficient breaks the normal form detectably
    LaxElement bad = l;
    Rng rng(4);
    bad.at_tyurin[0][0] += 0.1 * project_to_algebra(random_matrix(cfg->alg.dim_rep, cfg->alg.dim_rep, rng),
                                                    cfg->alg);
    CHECK(check_tyurin_form(bad, 0) > 1e-4);
  }
}

TEST_CASE("gamma-empty space dimension matches pole bookkeeping") {
  // no Tyurin constraints: dim = dim g * (1 + deg D)  with A_0 free
  auto alg = make_algebra(Family::D, 2);
  auto cfg = make_config(alg, {{Complex(0, 0), 1}, {Complex(1, 0), 1}}, {});
  LaxBasis basis = build_constraint_system(cfg);
  CHECK(basis.dimension() == alg.dim_algebra() * 3);
}

TEST_CASE("local expansion agrees with evaluation") {
  auto cfg = small_config(Family::C);
  LaxElement l = sample_lax(build_constraint_system(cfg), 3u);
  Complex z0 = cfg->tyurin[0].z;
  LaurentMatrix germ = l.local_expansion(z0, 8);
  Complex dz(0.05, 0.02);
  Matrix approx = Matrix::Zero(cfg->alg.dim_rep, cfg->alg.dim_rep);
  for (int p = germ.min_lo(); p <= 8; ++p) approx += std::pow(dz, p) * germ.coeff(p);
  CHECK(inf_norm(approx - l.evaluate(z0 + dz)) < 1e-9);
}

TEST_CASE("pack/unpack round trip") {
  auto cfg = small_config(Family::B);
  LaxElement l = sample_lax(build_constraint_system(cfg), 5u);
  LaxElement back = LaxElement::unpack(cfg, l.pack());
  CHECK((l - back).norm() < 1e-14);
}
