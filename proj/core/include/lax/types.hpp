#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>

namespace lax {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using IntVector = Eigen::VectorXi;
using Rng = std::mt19937_64;

inline double inf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Complex random_complex(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double re = u(rng);
  double im = u(rng);
  return {re, im};
}

inline Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

struct LaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a rank / tolerance decision cannot be certified.
struct NumericalError : LaxError {
  using LaxError::LaxError;
};

}  // namespace lax
