#pragma once

#include <functional>

#include "lax/spectral.hpp"

namespace lax {

enum class InvariantKind { TracePower, CharCoeff, Det, Pfaffian };

// Invariant polynomial selector.  TracePower index p means tr L^p.  For
// family A, CharCoeff index i means the coefficient r_i of det(lambda - L);
// for B/C/D it selects the reduced even-curve coefficient r~_i = r_{2i}
// (index <= n), since the odd coefficients vanish identically.
struct InvariantId {
  InvariantKind kind;
  int index = 1;
};

// Number of valid CharCoeff indices for the family.
int char_coeff_count(const AlgebraSpec& alg);
// Full characteristic-coefficient index d_i behind an InvariantId.
int char_coeff_degree(const AlgebraSpec& alg, int index);
void validate_invariant(const InvariantId& id, const AlgebraSpec& alg);

Complex eval_invariant(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg);

// Closed-form gradients with respect to the trace pairing:
// d/dt chi(L + tX) = tr(grad * X).
Matrix grad_trace_power(const Matrix& l, int n);          // of tr L^{n+1}
Matrix grad_char_coeff(const Matrix& l, int i);           // of full coefficient r_i
Matrix grad_det(const Matrix& l);
Matrix grad_pfaffian(const Matrix& l, const AlgebraSpec& alg);
Matrix grad_invariant(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg);

// Finite-difference oracle: the unique G in g with tr(G X) = dchi(X) for
// all X in g, from central differences over a basis of g and a Gram solve.
Matrix fd_gradient(const std::function<Complex(const Matrix&)>& chi, const Matrix& l,
                   const AlgebraSpec& alg, double eps = 1e-6);
Matrix fd_gradient(const InvariantId& id, const Matrix& l, const AlgebraSpec& alg,
                   double eps = 1e-6);

// Exponent value mu_i^j: the sheet-j diagonal entry of grad r_i evaluated
// on the spectrum, from the coefficient values r_1..r_d at the point and
// the sheet eigenvalue lambda_j != 0 (full-coefficient indexing).
Complex exponent_mu(const std::vector<Complex>& r, Complex lambda_j, int i);

}  // namespace lax
