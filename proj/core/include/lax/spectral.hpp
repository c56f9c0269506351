#pragma once

#include "lax/laxspace.hpp"

namespace lax {

// Coefficients r_1..r_d of det(lambda - M) = lambda^d + sum r_j lambda^{d-j},
// by the division-free Faddeev-LeVerrier recurrence.
std::vector<Complex> char_coeffs(const Matrix& m);

// Same recurrence over truncated Laurent series.
std::vector<Series> char_coeffs_series(const LaurentMatrix& m);

struct RationalFunction {
  std::vector<Complex> num;  // ascending powers
  std::vector<Complex> den;

  Complex operator()(Complex q) const;
};

struct SpectralCurveData {
  Family family;
  std::vector<RationalFunction> r;          // r_1..r_d
  std::vector<Complex> sample_points;
  std::vector<std::vector<Complex>> sample_values;  // [sample][j]
  std::vector<double> fit_residuals;        // held-out relative residual per j
};

// Fits r_j(q) against samples of char_coeffs(L(q)) with denominator
// prod_P (q - z_P)^{j m_P}.  A held-out residual above `tol` means the
// divisor bound of the spectral curve fails and is reported as an error.
RationalFunction reconstruct_rational(const LaxElement& l, int j, double tol = 1e-8);
SpectralCurveData spectral_curve(const LaxElement& l, int samples = 24,
                                 uint64_t seed = 1, double tol = 1e-8);

// Sample points on a circle keeping a margin from every pole.
std::vector<Complex> curve_sample_points(const LaxConfig& cfg, int count,
                                         uint64_t seed = 1);

// Max over samples of |odd characteristic coefficients| relative to the
// largest coefficient (zero for B/C/D by the lambda -> -lambda involution).
double involution_defect(const LaxElement& l, const std::vector<Complex>& samples);

// Pfaffian of a complex skew-symmetric matrix (Parlett-Reid elimination).
Complex pfaffian_skew(Matrix s);

// Pfaffian of an so(2n) member in the sigma realization, normalized so that
// Pf(diag(a_1..a_n, -a_n..-a_1)) = a_1 ... a_n; Pf(L)^2 = det(L).
Complex pfaffian(const Matrix& l_value, const AlgebraSpec& alg);

// Largest negative-order coefficient magnitude of the characteristic
// coefficients of L expanded at the Tyurin point (small iff the curve is
// holomorphic there despite L's pole).
double holomorphy_at_tyurin(const LaxElement& l, int gamma_index);

}  // namespace lax
