#pragma once

#include <optional>
#include <vector>

#include "lax/types.hpp"

namespace lax {

// Scalar traits used by the truncated Laurent arithmetic.  The floating
// instantiation screens cancellation with a relative threshold; exact
// coefficient types compare against zero.
template <typename T>
struct scalar_traits {
  static double abs(const T& v) { return v == T(0) ? 0.0 : 1.0; }
  static constexpr double rel_threshold = 0.0;
};

template <>
struct scalar_traits<Complex> {
  static double abs(const Complex& v) { return std::abs(v); }
  static constexpr double rel_threshold = 1e-12;
};

template <>
struct scalar_traits<double> {
  static double abs(double v) { return std::abs(v); }
  static constexpr double rel_threshold = 1e-12;
};

// Truncated Laurent series: coefficients are known exactly on the window
// [lo, hi] and are exactly zero below lo.  Nothing is claimed above hi.
template <typename T>
class LaurentSeries {
 public:
  LaurentSeries() : lo_(0), coeff_{} {}
  LaurentSeries(int lo, std::vector<T> coeff)
      : lo_(lo), coeff_(std::move(coeff)) {}

  static LaurentSeries zero(int lo, int hi) {
    return LaurentSeries(lo, std::vector<T>(hi - lo + 1, T(0)));
  }
  static LaurentSeries monomial(const T& c, int order, int hi) {
    auto s = zero(order, std::max(order, hi));
    s.coeff_[0] = c;
    return s;
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeff_.size()) - 1; }
  bool window_empty() const { return coeff_.empty(); }

  const T& at(int order) const {
    static const T kZero = T(0);
    if (order < lo_ || order > hi()) return kZero;
    return coeff_[order - lo_];
  }
  T& ref(int order) { return coeff_[order - lo_]; }

  double max_abs() const {
    double m = 0;
    for (const auto& c : coeff_) m = std::max(m, scalar_traits<T>::abs(c));
    return m;
  }

  // Leading order after cancellation screening; nullopt for the zero series.
  std::optional<int> leading_order() const {
    double thresh = scalar_traits<T>::rel_threshold * max_abs();
    for (int i = 0; i < static_cast<int>(coeff_.size()); ++i)
      if (scalar_traits<T>::abs(coeff_[i]) > thresh) return lo_ + i;
    return std::nullopt;
  }
  bool is_zero() const { return !leading_order().has_value(); }

  // Canonicalize: drop screened-out leading coefficients, raising lo.
  LaurentSeries trimmed() const {
    auto ord = leading_order();
    if (!ord) return zero(hi(), hi());
    int shift = *ord - lo_;
    return LaurentSeries(*ord, std::vector<T>(coeff_.begin() + shift, coeff_.end()));
  }

  // Multiply by z^k.
  LaurentSeries shifted(int k) const { return LaurentSeries(lo_ + k, coeff_); }

  LaurentSeries truncated(int new_hi) const {
    if (new_hi >= hi()) return *this;
    if (new_hi < lo_) return zero(new_hi, new_hi);
    return LaurentSeries(lo_, std::vector<T>(coeff_.begin(), coeff_.begin() + (new_hi - lo_ + 1)));
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    int lo = std::min(a.lo_, b.lo_);
    int hi = std::min(a.hi(), b.hi());
    if (hi < lo) hi = lo - 1;  // empty window guard
    LaurentSeries out = zero(lo, hi);
    for (int k = lo; k <= hi; ++k) out.ref(k) = a.at(k) + b.at(k);
    return out;
  }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
    return a + (-b);
  }
  LaurentSeries operator-() const {
    LaurentSeries out = *this;
    for (auto& c : out.coeff_) c = -c;
    return out;
  }
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    int lo = a.lo_ + b.lo_;
    int hi = std::min(a.lo_ + b.hi(), b.lo_ + a.hi());
    if (a.window_empty() || b.window_empty() || hi < lo) return zero(lo, lo - 1);
    LaurentSeries out = zero(lo, hi);
    for (int i = a.lo_; i <= a.hi(); ++i) {
      for (int j = b.lo_; j <= b.hi(); ++j) {
        int k = i + j;
        if (k > hi) break;
        out.ref(k) += a.at(i) * b.at(j);
      }
    }
    return out;
  }
  friend LaurentSeries operator*(const T& c, const LaurentSeries& a) {
    LaurentSeries out = a;
    for (auto& v : out.coeff_) v = c * v;
    return out;
  }

  // Reciprocal of a unit (nonzero leading coefficient).
  LaurentSeries inverse() const {
    auto t = trimmed();
    auto ord = t.leading_order();
    if (!ord) throw LaxError("LaurentSeries::inverse: zero series");
    int m = t.hi() - t.lo();  // number of correction terms available
    T lead = t.at(t.lo());
    LaurentSeries out = zero(-t.lo(), -t.lo() + m);
    out.ref(-t.lo()) = T(1) / lead;
    for (int k = 1; k <= m; ++k) {
      T acc = T(0);
      for (int j = 1; j <= k; ++j) acc += t.at(t.lo() + j) * out.at(-t.lo() + k - j);
      out.ref(-t.lo() + k) = -acc / lead;
    }
    return out;
  }

 private:
  int lo_;
  std::vector<T> coeff_;
};

using Series = LaurentSeries<Complex>;

// d x d matrix of Laurent series; entries carry their own windows.
class LaurentMatrix {
 public:
  LaurentMatrix() : rows_(0), cols_(0) {}
  LaurentMatrix(int rows, int cols, const Series& fill)
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

  // Matrix Taylor/Laurent data: coefficient matrices for orders lo..hi.
  LaurentMatrix(int lo, const std::vector<Matrix>& coeff);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Series& at(int i, int j) { return e_[i * cols_ + j]; }
  const Series& at(int i, int j) const { return e_[i * cols_ + j]; }

  // Coefficient matrix at a given order (zeros outside entry windows).
  Matrix coeff(int order) const;
  // Smallest hi() over entries: the common guaranteed truncation order.
  int common_hi() const;
  int min_lo() const;

  LaurentMatrix operator+(const LaurentMatrix& o) const;
  LaurentMatrix operator-(const LaurentMatrix& o) const;
  LaurentMatrix operator*(const LaurentMatrix& o) const;
  LaurentMatrix scaled(const Complex& c) const;

  // Conjugation by constant matrices: g * A * h.
  LaurentMatrix conjugated(const Matrix& left, const Matrix& right) const;

  Series trace() const;

  // Largest coefficient magnitude at strictly negative orders, and overall.
  double negative_part_norm() const;
  double max_abs() const;

 private:
  int rows_, cols_;
  std::vector<Series> e_;
};

// z^{sign*h} A z^{-sign*h}: entry (i,j) is shifted by sign*(h_i - h_j).
// `floor_order` guards against shifting information below a usable window;
// violations throw rather than silently truncate.
LaurentMatrix conjugate_by_z_power(const LaurentMatrix& a, const IntVector& hdiag,
                                   int sign, int floor_order = -1000000);

// Minimum of entry leading orders after cancellation screening.
int series_leading_order(const std::vector<Series>& v);

}  // namespace lax
