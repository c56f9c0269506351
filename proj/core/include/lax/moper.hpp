#pragma once

#include "lax/invariants.hpp"

namespace lax {

// A flow label: invariant chi, puncture P, and local-coordinate power m.
struct FlowTriple {
  InvariantId chi;
  int puncture_index = 0;
  int m = 0;
};

// Rational M-operator for a triple: sole non-Tyurin pole at P where it
// matches (z-z_P)^{-m} grad chi(L(z)) up to O(1); at each Tyurin point the
// residue is nu_g h_g plus a filtration-constrained principal part; M -> 0
// at infinity.
struct MOperator {
  ConfigPtr cfg;
  FlowTriple a;
  std::vector<Matrix> at_p;                    // orders -1..-depth at z_P
  std::vector<Complex> nu;                     // per Tyurin point
  std::vector<std::vector<Matrix>> at_tyurin;  // [gamma][p-1]: full order -p coeff

  double matching_residual = 0;  // principal part of M - w^{-m} grad chi at P
  double tangency_residual = 0;  // worst filtration defect of the corrected [L,M]
  double solve_residual = 0;     // tangency residual of the zero completion

  Matrix evaluate(Complex z, double pole_margin = 1e-9) const;
  LaurentMatrix local_expansion(Complex point, int hi) const;
  Matrix zeroth_coeff_at(int gamma) const;  // M_0^gamma
};

// Principal part (orders -1..-depth) of an analytic function about z0 by
// trapezoidal contour quadrature on a circle of the given radius.
std::vector<Matrix> principal_part_at(const std::function<Matrix(Complex)>& f, Complex z0,
                                      int depth, double radius, int nodes = 256);

// grad chi(L(z)) evaluated pointwise.
Matrix grad_chi_at(const LaxElement& l, const InvariantId& chi, Complex z);

MOperator build_m_operator(const LaxElement& l, const FlowTriple& a, double tol = 1e-8);

// (nu_g, M_0^g) read back from a built operator via the trace pairing.
std::pair<Complex, Matrix> read_tyurin_data(const MOperator& m, int gamma);

}  // namespace lax
