#include "lax/spectral.hpp"

#include <Eigen/SVD>

namespace lax {

std::vector<Complex> char_coeffs(const Matrix& m) {
  int d = static_cast<int>(m.rows());
  std::vector<Complex> c(d);
  Matrix n = m;
  for (int k = 1; k <= d; ++k) {
    c[k - 1] = -n.trace() / static_cast<double>(k);
    if (k < d) n = m * (n + c[k - 1] * Matrix::Identity(d, d));
  }
  return c;
}

namespace {

LaurentMatrix add_scalar_diag(LaurentMatrix m, const Series& s) {
  for (int i = 0; i < m.rows(); ++i) m.at(i, i) = m.at(i, i) + s;
  return m;
}

}  // namespace

std::vector<Series> char_coeffs_series(const LaurentMatrix& m) {
  int d = m.rows();
  std::vector<Series> c;
  LaurentMatrix n = m;
  for (int k = 1; k <= d; ++k) {
    Series ck = Complex(-1.0 / k) * n.trace();
    c.push_back(ck);
    if (k < d) n = m * add_scalar_diag(n, ck);
  }
  return c;
}

Complex RationalFunction::operator()(Complex q) const {
  auto horner = [&](const std::vector<Complex>& p) {
    Complex acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * q + *it;
    return acc;
  };
  return horner(num) / horner(den);
}

std::vector<Complex> curve_sample_points(const LaxConfig& cfg, int count, uint64_t seed) {
  std::vector<Complex> poles;
  for (const auto& p : cfg.punctures) poles.push_back(p.z);
  for (const auto& t : cfg.tyurin) poles.push_back(t.z);
  double rmax = 0;
  for (auto& p : poles) rmax = std::max(rmax, std::abs(p));
  double radius = 2.0 * rmax + 1.0;
  double sep = cfg.min_pole_separation();
  double margin = 0.1 * (std::isfinite(sep) ? sep : 1.0);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  std::vector<Complex> pts;
  while (static_cast<int>(pts.size()) < count) {
    Complex q = radius * std::exp(Complex(0, u(rng)));
    bool ok = true;
    for (auto& p : poles)
      if (std::abs(q - p) < margin) ok = false;
    for (auto& other : pts)
      if (std::abs(q - other) < 1e-9 * radius) ok = false;
    if (ok) pts.push_back(q);
  }
  return pts;
}

namespace {

std::vector<Complex> poly_mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, Complex(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

RationalFunction reconstruct_rational(const LaxElement& l, int j, double tol) {
  const auto& cfg = *l.cfg;
  RationalFunction rf;
  rf.den = {Complex(1)};
  for (const auto& p : cfg.punctures)
    for (int t = 0; t < j * p.mult; ++t) rf.den = poly_mul(rf.den, {-p.z, Complex(1)});
  int deg = static_cast<int>(rf.den.size()) - 1;
  int unknowns = deg + 1;
  int n_fit = 2 * unknowns + 8, n_holdout = 8;
  auto pts = curve_sample_points(cfg, n_fit + n_holdout, 7u + static_cast<uint64_t>(j));
  double radius = 0;
  for (auto& q : pts) radius = std::max(radius, std::abs(q));
  auto den_at = [&](Complex q) {
    Complex acc = 0;
    for (auto it = rf.den.rbegin(); it != rf.den.rend(); ++it) acc = acc * q + *it;
    return acc;
  };
  auto value_at = [&](Complex q) { return char_coeffs(l.evaluate(q))[j - 1]; };
  // Fit in the scaled variable q/radius for conditioning.
  Matrix a(n_fit, unknowns);
  Vector rhs(n_fit);
  for (int s = 0; s < n_fit; ++s) {
    Complex q = pts[s], u = q / radius, up = 1.0;
    for (int t = 0; t < unknowns; ++t) {
      a(s, t) = up;
      up *= u;
    }
    rhs(s) = value_at(q) * den_at(q);
  }
  Vector scaled = Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  rf.num.resize(unknowns);
  double rp = 1.0;
  for (int t = 0; t < unknowns; ++t) {
    rf.num[t] = scaled(t) / rp;
    rp *= radius;
  }
  double worst = 0;
  for (int s = n_fit; s < n_fit + n_holdout; ++s) {
    Complex q = pts[s], v = value_at(q);
    worst = std::max(worst, std::abs(rf(q) - v) / (1.0 + std::abs(v)));
  }
  if (worst > tol)
    throw NumericalError("reconstruct_rational: held-out residual " + std::to_string(worst) +
                         " exceeds tolerance (divisor-bound violation)");
  return rf;
}

SpectralCurveData spectral_curve(const LaxElement& l, int samples, uint64_t seed, double tol) {
  SpectralCurveData data;
  data.family = l.cfg->alg.family;
  int d = l.cfg->alg.dim_rep;
  data.sample_points = curve_sample_points(*l.cfg, samples, seed);
  for (auto q : data.sample_points) data.sample_values.push_back(char_coeffs(l.evaluate(q)));
  for (int j = 1; j <= d; ++j) {
    RationalFunction rf = reconstruct_rational(l, j, tol);
    double worst = 0;
    for (size_t s = 0; s < data.sample_points.size(); ++s) {
      Complex v = data.sample_values[s][j - 1];
      worst = std::max(worst, std::abs(rf(data.sample_points[s]) - v) / (1.0 + std::abs(v)));
    }
    data.fit_residuals.push_back(worst);
    data.r.push_back(std::move(rf));
  }
  return data;
}

double involution_defect(const LaxElement& l, const std::vector<Complex>& samples) {
  double defect = 0;
  for (auto q : samples) {
    auto c = char_coeffs(l.evaluate(q));
    double scale = 0;
    for (auto& v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0) continue;
    for (size_t j = 0; j < c.size(); j += 2)  // c[0] = r_1, odd-index coefficients
      defect = std::max(defect, std::abs(c[j]) / scale);
  }
  return defect;
}

Complex pfaffian_skew(Matrix s) {
  int d = static_cast<int>(s.rows());
  if (d % 2 != 0) return 0;
  Complex pf = 1;
  for (int k = 0; k + 1 < d; k += 2) {
    // Pivot: largest entry in column k below the diagonal.
    int piv = k + 1;
    for (int i = k + 2; i < d; ++i)
      if (std::abs(s(i, k)) > std::abs(s(piv, k))) piv = i;
    if (std::abs(s(piv, k)) < 1e-300) return 0;
    if (piv != k + 1) {
      s.row(piv).swap(s.row(k + 1));
      s.col(piv).swap(s.col(k + 1));
      pf = -pf;
    }
    pf *= s(k, k + 1);
    for (int i = k + 2; i < d; ++i) {
      Complex f = s(i, k) / s(k + 1, k);
      s.row(i) -= f * s.row(k + 1);
      s.col(i) -= f * s.col(k + 1);
    }
  }
  return pf;
}

Complex pfaffian(const Matrix& l_value, const AlgebraSpec& alg) {
  if (alg.family != Family::D)
    throw LaxError("pfaffian: defined for family D only");
  if (!is_member(l_value, alg, 1e-8))
    throw LaxError("pfaffian: input is not an algebra member");
  int d = alg.dim_rep, n = alg.rank;
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    h(d - 1 - i, d - 1 - i) = -1.0;
  }
  Complex norm = pfaffian_skew(alg.sigma * h);  // Pf(ref) with eigen product 1
  return pfaffian_skew(alg.sigma * l_value) / norm;
}

double holomorphy_at_tyurin(const LaxElement& l, int gamma_index) {
  const auto& ty = l.cfg->tyurin.at(gamma_index);
  int d = l.cfg->alg.dim_rep, k = ty.depth();
  LaurentMatrix germ = l.local_expansion(ty.z, d * std::max(k, 1) + 2);
  auto coeffs = char_coeffs_series(germ);
  double worst = 0, scale = 1e-300;
  for (const auto& r : coeffs) {
    scale = std::max(scale, r.max_abs());
    for (int t = r.lo(); t <= std::min(-1, r.hi()); ++t)
      worst = std::max(worst, std::abs(r.at(t)));
  }
  return worst / scale;
}

}  // namespace lax
