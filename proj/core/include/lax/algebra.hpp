#pragma once

#include <map>
#include <vector>

#include "lax/types.hpp"

namespace lax {

// Classical matrix Lie algebras in their standard representation.  The
// bilinear form sigma is anti-diagonal so that the Cartan subalgebra is
// diagonal: diag(h_1..h_n, [0,] -h_n..-h_1).
enum class Family { A, B, C, D };

const char* family_name(Family f);
Family family_from_char(char c);

struct AlgebraSpec {
  Family family = Family::A;
  int rank = 1;       // n
  int dim_rep = 1;    // d, size of the standard representation
  Matrix sigma;       // d x d form matrix (identity convention for A)

  int dim_algebra() const;  // dim g
};

AlgebraSpec make_algebra(Family family, int n);
AlgebraSpec make_algebra(char family, int n);

// sigma X^T sigma^{-1}; the anti-transpose for B/D, signed for C.
Matrix sigma_transpose(const Matrix& x, const AlgebraSpec& alg);

bool is_member(const Matrix& x, const AlgebraSpec& alg, double tol = 1e-10);
double membership_residual(const Matrix& x, const AlgebraSpec& alg);

// (X - sigma X^T sigma^{-1}) / 2; idempotent, image is g.
Matrix project_to_algebra(const Matrix& x, const AlgebraSpec& alg);

// Basis of g as d x d matrices.  For B/C/D every element is an eigenvector
// of ad(h) for any diagonal Cartan h, which grading() relies on.
std::vector<Matrix> algebra_basis(const AlgebraSpec& alg);

// Group G = { g : g^T sigma g = sigma } (all of GL(d) for family A).
bool is_group_member(const Matrix& g, const AlgebraSpec& alg, double tol = 1e-8);
double group_residual(const Matrix& g, const AlgebraSpec& alg);
Matrix project_to_group(Matrix g, const AlgebraSpec& alg, int iters = 3);
Matrix random_member(const AlgebraSpec& alg, Rng& rng);
Matrix random_group_element(const AlgebraSpec& alg, Rng& rng, double scale = 0.5);

struct GradingElement {
  IntVector diag;  // d integer diagonal entries
  int depth = 0;   // max p with g_p != 0

  Matrix as_matrix() const;
};

// Validates integrality, sigma-compatibility (h_{d+1-i} = -h_i, zero middle
// entry for B) and dominance: alpha_i(h) >= 0 for the simple roots derived
// from the realization.
GradingElement make_grading_element(const AlgebraSpec& alg, const IntVector& diag);

struct GradedDecomposition {
  AlgebraSpec alg;
  GradingElement h;
  std::map<int, std::vector<Matrix>> pieces;  // p -> basis of g_p

  int depth() const { return h.depth; }
  // Basis of the filtration space  ~g_p = sum_{q <= p} g_q.
  std::vector<Matrix> filtration_basis(int p) const;
  int filtration_dim(int p) const;
  // Flag of the standard representation: F_j = span{ e_t : h_t <= j }.
  std::vector<int> flag_indices(int j) const;
  int eigenspace_dim(int i) const;  // dim V_i
};

GradedDecomposition grading(const AlgebraSpec& alg, const IntVector& hdiag);

// Roots of g as integer vectors in the coordinates (c_1..c_n) of the
// diagonal Cartan; derived from the matrix realization.
std::vector<IntVector> root_vectors(const AlgebraSpec& alg);
std::vector<IntVector> simple_roots(const AlgebraSpec& alg);

}  // namespace lax
