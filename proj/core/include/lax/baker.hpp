#pragma once

#include "lax/algebra.hpp"
#include "lax/laurent.hpp"

namespace lax {

// Sheet labels compatible with the involution lambda -> -lambda: the
// partner of position s is position d-1-s (mirrored, matching the
// antidiagonal form), family B's zero eigenvalue sits in the middle.
struct SheetOrdering {
  std::vector<int> perm;  // perm[s] = index into the input eigenvalue list
  int zero_sheet = -1;    // middle position for family B, else -1
  double max_pair_residual = 0;

  int size() const { return static_cast<int>(perm.size()); }
  int partner(int s) const { return size() - 1 - s; }
};

SheetOrdering sheet_ordering(const std::vector<Complex>& eigenvalues, Family family,
                             double tol = 1e-6);

// Eigen-decomposition of an algebra member with sheet-ordered columns.
struct EigenFrame {
  Matrix psi;     // columns: eigenvectors at sheet positions
  Vector lambda;  // sheet eigenvalues (antidiagonally balanced)
  SheetOrdering ordering;
};
EigenFrame eigen_frame(const Matrix& l_value, const AlgebraSpec& alg,
                       double pair_tol = 1e-6);

// (1/2) psi1^T sigma psi2: the bilinear (B/D) or symplectic (C) pairing of
// sheet-value tuples.
Complex pairing(const Vector& psi1, const Vector& psi2, const AlgebraSpec& alg);

// Rescales/cleans the columns so that psi^T sigma psi = sigma and
// det = +1 for B/D, preserving column spans per eigenvalue (lambda is
// permuted alongside any determinant-fixing column swap).
Matrix orthonormalize(Matrix psi, Vector& lambda, const AlgebraSpec& alg);

// Gram process over the Laurent-series ring with a constant symmetric form
// F: w_i = v_i - sum_{s<i} form(w_s, v_i) / form(w_s, w_s) w_s.  Leading
// orders of the inputs are preserved (the order-preservation theorem).
template <typename T>
using SeriesVector = std::vector<LaurentSeries<T>>;

template <typename T>
std::vector<SeriesVector<T>> series_orthogonalize(std::vector<SeriesVector<T>> v,
                                                  const std::vector<std::vector<T>>& form) {
  auto pair = [&](const SeriesVector<T>& x, const SeriesVector<T>& y) {
    LaurentSeries<T> acc;
    bool first = true;
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < y.size(); ++j) {
        if (form[i][j] == T(0)) continue;
        LaurentSeries<T> term = form[i][j] * (x[i] * y[j]);
        acc = first ? term : acc + term;
        first = false;
      }
    if (first) throw LaxError("series_orthogonalize: zero form");
    return acc;
  };
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t s = 0; s < i; ++s) {
      LaurentSeries<T> gram = pair(v[s], v[s]);
      if (gram.is_zero()) throw LaxError("series_orthogonalize: non-unit Gram pivot");
      LaurentSeries<T> coeff = pair(v[s], v[i]) * gram.inverse();
      for (size_t c = 0; c < v[i].size(); ++c) v[i][c] = v[i][c] - coeff * v[s][c];
    }
  }
  return v;
}

struct ThetaParams {
  int genus = 1;
  Matrix omega;        // symmetric with positive-definite imaginary part
  int trunc = 0;       // 0: adaptive from the tail bound
  double target = 1e-12;

  void validate() const;
};

// Truncated lattice sum sum_n exp(i pi n^T Omega n + 2 pi i n^T z) with the
// tail bounded below `target`; reports the required radius when trunc is
// given but insufficient.
Complex theta(const Vector& z, const ThetaParams& params);

// exp(integral) * theta(num)/theta(den): one Baker-Akhiezer matrix entry
// from caller-supplied period data.
Complex assemble_ba_entry(Complex integral, const Vector& num_arg, const Vector& den_arg,
                          const ThetaParams& params);

}  // namespace lax
