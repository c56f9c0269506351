#include "lax/laurent.hpp"

namespace lax {

LaurentMatrix::LaurentMatrix(int lo, const std::vector<Matrix>& coeff) {
  if (coeff.empty()) throw LaxError("LaurentMatrix: empty coefficient list");
  rows_ = static_cast<int>(coeff[0].rows());
  cols_ = static_cast<int>(coeff[0].cols());
  int hi = lo + static_cast<int>(coeff.size()) - 1;
  e_.assign(rows_ * cols_, Series::zero(lo, hi));
  for (int k = 0; k < static_cast<int>(coeff.size()); ++k)
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) at(i, j).ref(lo + k) = coeff[k](i, j);
}

Matrix LaurentMatrix::coeff(int order) const {
  Matrix m = Matrix::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).at(order);
  return m;
}

int LaurentMatrix::common_hi() const {
  int hi = 1 << 30;
  for (const auto& s : e_) hi = std::min(hi, s.hi());
  return hi;
}

int LaurentMatrix::min_lo() const {
  int lo = 1 << 30;
  for (const auto& s : e_) lo = std::min(lo, s.lo());
  return lo;
}

LaurentMatrix LaurentMatrix::operator+(const LaurentMatrix& o) const {
  LaurentMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) + o.at(i, j);
  return out;
}

LaurentMatrix LaurentMatrix::operator-(const LaurentMatrix& o) const {
  LaurentMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) - o.at(i, j);
  return out;
}

LaurentMatrix LaurentMatrix::operator*(const LaurentMatrix& o) const {
  if (cols_ != o.rows_) throw LaxError("LaurentMatrix: shape mismatch");
  LaurentMatrix out(rows_, o.cols_, Series());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      Series acc = at(i, 0) * o.at(0, j);
      for (int k = 1; k < cols_; ++k) acc = acc + at(i, k) * o.at(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

LaurentMatrix LaurentMatrix::scaled(const Complex& c) const {
  LaurentMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) = c * at(i, j);
  return out;
}

LaurentMatrix LaurentMatrix::conjugated(const Matrix& left, const Matrix& right) const {
  LaurentMatrix out(static_cast<int>(left.rows()), static_cast<int>(right.cols()), Series());
  for (int i = 0; i < left.rows(); ++i)
    for (int j = 0; j < right.cols(); ++j) {
      // Collect sum_{a,b} left(i,a) A(a,b) right(b,j) on the common window.
      Series acc = Series::zero(min_lo(), common_hi());
      for (int a = 0; a < rows_; ++a)
        for (int b = 0; b < cols_; ++b) {
          Complex c = left(i, a) * right(b, j);
          if (c == Complex(0)) continue;
          acc = acc + c * at(a, b);
        }
      out.at(i, j) = acc;
    }
  return out;
}

Series LaurentMatrix::trace() const {
  Series acc = at(0, 0);
  for (int i = 1; i < rows_; ++i) acc = acc + at(i, i);
  return acc;
}

double LaurentMatrix::negative_part_norm() const {
  double m = 0;
  for (const auto& s : e_)
    for (int k = s.lo(); k <= std::min(-1, s.hi()); ++k)
      m = std::max(m, std::abs(s.at(k)));
  return m;
}

double LaurentMatrix::max_abs() const {
  double m = 0;
  for (const auto& s : e_) m = std::max(m, s.max_abs());
  return m;
}

LaurentMatrix conjugate_by_z_power(const LaurentMatrix& a, const IntVector& hdiag,
                                   int sign, int floor_order) {
  if (hdiag.size() != a.rows() || a.rows() != a.cols())
    throw LaxError("conjugate_by_z_power: dimension mismatch");
  LaurentMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      int shift = sign * (hdiag(i) - hdiag(j));
      Series s = a.at(i, j).shifted(shift);
      if (s.lo() < floor_order && !s.is_zero())
        throw LaxError("conjugate_by_z_power: order fell below the configured floor");
      out.at(i, j) = s;
    }
  return out;
}

int series_leading_order(const std::vector<Series>& v) {
  bool any = false;
  int m = 1 << 30;
  for (const auto& s : v) {
    auto ord = s.leading_order();
    if (ord) {
      any = true;
      m = std::min(m, *ord);
    }
  }
  if (!any) throw LaxError("series_leading_order: all-zero vector");
  return m;
}

}  // namespace lax
