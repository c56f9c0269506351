#pragma once

#include <memory>
#include <vector>

#include "lax/algebra.hpp"
#include "lax/laurent.hpp"

namespace lax {

struct Puncture {
  Complex z;
  int mult = 1;  // multiplicity m_P in the divisor D
};

struct TyurinPoint {
  Complex z;
  GradingElement h;     // the fixed integral element
  Matrix conjugator;    // g realizing h_gamma = g h g^{-1}
  GradedDecomposition dec;

  Matrix h_gamma() const { return conjugator * h.as_matrix() * conjugator.inverse(); }
  int depth() const { return h.depth; }
};

struct LaxConfig {
  AlgebraSpec alg;
  std::vector<Puncture> punctures;
  std::vector<TyurinPoint> tyurin;

  int deg_divisor() const;
  void validate() const;  // distinct finite points, conjugators in the group
  double min_pole_separation() const;
};

using ConfigPtr = std::shared_ptr<const LaxConfig>;

ConfigPtr make_config(AlgebraSpec alg, std::vector<Puncture> punctures,
                      std::vector<std::pair<Complex, IntVector>> tyurin_data,
                      std::vector<Matrix> conjugators = {});

// Rational g-valued function encoded by partial fractions:
//   L(z) = A0 + sum_P sum_r A_{P,r} (z-z_P)^{-r} + sum_g sum_p B_{g,p} (z-z_g)^{-p}.
struct LaxElement {
  ConfigPtr cfg;
  Matrix constant;                                // A_0
  std::vector<std::vector<Matrix>> at_puncture;   // [P][r-1], r = 1..m_P
  std::vector<std::vector<Matrix>> at_tyurin;     // [gamma][p-1], p = 1..k

  static LaxElement zero(ConfigPtr cfg);

  Matrix evaluate(Complex z, double pole_margin = 1e-9) const;
  // Exact Laurent coefficients on the window [auto_lo, hi] about `point`
  // (a puncture, a Tyurin point, or any regular point).
  LaurentMatrix local_expansion(Complex point, int hi) const;

  LaxElement operator+(const LaxElement& o) const;
  LaxElement operator-(const LaxElement& o) const;
  LaxElement scaled(Complex c) const;
  double norm() const;

  // Flatten to / read from the unknown-vector layout used by the
  // constraint assembly (slot order: A0, punctures, Tyurin points).
  Vector pack() const;
  static LaxElement unpack(ConfigPtr cfg, const Vector& v);
};

struct LaxBasis {
  ConfigPtr cfg;
  std::vector<LaxElement> elements;
  Eigen::VectorXd singular_values;
  double sv_gap = 0;  // smallest kept / largest dropped singular value

  int dimension() const { return static_cast<int>(elements.size()); }
};

// Nullspace of the linear Lax-space constraints: every coefficient in g,
// plus the filtration conditions on the Laurent coefficients at each
// Tyurin point.  Basis vectors are orthonormal in coefficient space.
LaxBasis build_constraint_system(ConfigPtr cfg, double rank_tol = 1e-9);

// Same space, from the normal-form route: negative orders of
// (z-z_g)^{-h_g} L(z) (z-z_g)^{h_g} vanish at every Tyurin point.  Used as
// an independent cross-check of build_constraint_system.
LaxBasis build_constraint_system_normal_form(ConfigPtr cfg, double rank_tol = 1e-9);

LaxElement sample_lax(const LaxBasis& basis, const Vector& coefficients);
LaxElement sample_lax(const LaxBasis& basis, uint64_t seed);

// Taylor coefficient of (z-a)^{-r} about z0 at order p >= 0.
Complex pole_taylor_coeff(Complex z0, Complex a, int r, int p);

// Orthogonal projector onto the complement of span{ vec(m) : m in mats },
// acting on row-major vectorized d x d matrices.
Matrix complement_projector(const std::vector<Matrix>& mats, int d);

// Magnitude of all negative-order coefficients of
// (z-z_g)^{-h_g} L(z) (z-z_g)^{h_g}, relative to the largest coefficient.
// Small iff the Tyurin normal form holds at gamma_index.
double check_tyurin_form(const LaxElement& l, int gamma_index, int extra_orders = 4);

}  // namespace lax
