#include "lax/laxspace.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <limits>

namespace lax {

// Taylor coefficient of (z-a)^{-r} about z0 at order p >= 0.
Complex pole_taylor_coeff(Complex z0, Complex a, int r, int p) {
  double binom = 1.0;  // C(r+p-1, p)
  for (int t = 1; t <= p; ++t) binom *= static_cast<double>(r + t - 1) / t;
  double sgn = (p % 2 == 0) ? 1.0 : -1.0;
  return sgn * binom * std::pow(z0 - a, Complex(-r - p));
}

namespace {

int vec_index(int d, int a, int b) { return a * d + b; }

struct SlotLayout {
  // Offsets (in matrices) for A0, each puncture order, each Tyurin order.
  int d = 0;
  int total_matrices = 0;
  std::vector<int> puncture_offset;  // slot index of A_{P,1}
  std::vector<int> tyurin_offset;    // slot index of B_{g,1}

  explicit SlotLayout(const LaxConfig& cfg) {
    d = cfg.alg.dim_rep;
    int slot = 1;  // A0 occupies slot 0
    for (const auto& p : cfg.punctures) {
      puncture_offset.push_back(slot);
      slot += p.mult;
    }
    for (const auto& t : cfg.tyurin) {
      tyurin_offset.push_back(slot);
      slot += t.depth();
    }
    total_matrices = slot;
  }
  int unknowns() const { return total_matrices * d * d; }
};

}  // namespace

int LaxConfig::deg_divisor() const {
  int deg = 0;
  for (const auto& p : punctures) deg += p.mult;
  return deg;
}

double LaxConfig::min_pole_separation() const {
  std::vector<Complex> pts;
  for (const auto& p : punctures) pts.push_back(p.z);
  for (const auto& t : tyurin) pts.push_back(t.z);
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      m = std::min(m, std::abs(pts[i] - pts[j]));
  return m;
}

void LaxConfig::validate() const {
  std::vector<Complex> pts;
  for (const auto& p : punctures) {
    if (p.mult < 1) throw LaxError("puncture multiplicity must be positive");
    pts.push_back(p.z);
  }
  for (const auto& t : tyurin) pts.push_back(t.z);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) < 1e-12)
        throw LaxError("marked points must be pairwise distinct");
  for (const auto& t : tyurin)
    if (!is_group_member(t.conjugator, alg))
      throw LaxError("Tyurin conjugator is not in the group");
}

ConfigPtr make_config(AlgebraSpec alg, std::vector<Puncture> punctures,
                      std::vector<std::pair<Complex, IntVector>> tyurin_data,
                      std::vector<Matrix> conjugators) {
  auto cfg = std::make_shared<LaxConfig>();
  cfg->alg = alg;
  cfg->punctures = std::move(punctures);
  for (size_t i = 0; i < tyurin_data.size(); ++i) {
    TyurinPoint t;
    t.z = tyurin_data[i].first;
    t.dec = grading(alg, tyurin_data[i].second);
    t.h = t.dec.h;
    t.conjugator = (i < conjugators.size())
                       ? conjugators[i]
                       : Matrix(Matrix::Identity(alg.dim_rep, alg.dim_rep));
    cfg->tyurin.push_back(std::move(t));
  }
  cfg->validate();
  return cfg;
}

LaxElement LaxElement::zero(ConfigPtr cfg) {
  LaxElement e;
  e.cfg = cfg;
  int d = cfg->alg.dim_rep;
  e.constant = Matrix::Zero(d, d);
  for (const auto& p : cfg->punctures)
    e.at_puncture.emplace_back(p.mult, Matrix::Zero(d, d));
  for (const auto& t : cfg->tyurin)
    e.at_tyurin.emplace_back(t.depth(), Matrix::Zero(d, d));
  return e;
}

Matrix LaxElement::evaluate(Complex z, double pole_margin) const {
  Matrix out = constant;
  for (size_t i = 0; i < cfg->punctures.size(); ++i) {
    Complex dz = z - cfg->punctures[i].z;
    if (std::abs(dz) < pole_margin) throw LaxError("evaluate: z too close to a pole");
    Complex w = 1.0 / dz;
    Complex wp = w;
    for (const auto& a : at_puncture[i]) {
      out += wp * a;
      wp *= w;
    }
  }
  for (size_t i = 0; i < cfg->tyurin.size(); ++i) {
    Complex dz = z - cfg->tyurin[i].z;
    if (std::abs(dz) < pole_margin) throw LaxError("evaluate: z too close to a pole");
    Complex w = 1.0 / dz;
    Complex wp = w;
    for (const auto& b : at_tyurin[i]) {
      out += wp * b;
      wp *= w;
    }
  }
  return out;
}

LaurentMatrix LaxElement::local_expansion(Complex point, int hi) const {
  int d = cfg->alg.dim_rep;
  double scale = 1.0 + std::abs(point);
  int lo = 0;
  int at_p = -1, at_t = -1;
  for (size_t i = 0; i < cfg->punctures.size(); ++i)
    if (std::abs(point - cfg->punctures[i].z) < 1e-12 * scale) {
      at_p = static_cast<int>(i);
      lo = -cfg->punctures[i].mult;
    }
  for (size_t i = 0; i < cfg->tyurin.size(); ++i)
    if (std::abs(point - cfg->tyurin[i].z) < 1e-12 * scale) {
      at_t = static_cast<int>(i);
      lo = -cfg->tyurin[i].depth();
    }
  if (hi < lo) throw LaxError("local_expansion: window exceeds capability");
  std::vector<Matrix> coeff(hi - lo + 1, Matrix::Zero(d, d));
  auto add = [&](int order, const Matrix& m) {
    if (order >= lo && order <= hi) coeff[order - lo] += m;
  };
  add(0, constant);
  for (size_t i = 0; i < cfg->punctures.size(); ++i) {
    for (int r = 1; r <= static_cast<int>(at_puncture[i].size()); ++r) {
      const Matrix& a = at_puncture[i][r - 1];
      if (static_cast<int>(i) == at_p) {
        add(-r, a);
      } else {
        for (int p = 0; p <= hi; ++p)
          add(p, pole_taylor_coeff(point, cfg->punctures[i].z, r, p) * a);
      }
    }
  }
  for (size_t i = 0; i < cfg->tyurin.size(); ++i) {
    for (int r = 1; r <= static_cast<int>(at_tyurin[i].size()); ++r) {
      const Matrix& b = at_tyurin[i][r - 1];
      if (static_cast<int>(i) == at_t) {
        add(-r, b);
      } else {
        for (int p = 0; p <= hi; ++p)
          add(p, pole_taylor_coeff(point, cfg->tyurin[i].z, r, p) * b);
      }
    }
  }
  return LaurentMatrix(lo, coeff);
}

LaxElement LaxElement::operator+(const LaxElement& o) const {
  LaxElement out = *this;
  out.constant += o.constant;
  for (size_t i = 0; i < at_puncture.size(); ++i)
    for (size_t r = 0; r < at_puncture[i].size(); ++r)
      out.at_puncture[i][r] += o.at_puncture[i][r];
  for (size_t i = 0; i < at_tyurin.size(); ++i)
    for (size_t r = 0; r < at_tyurin[i].size(); ++r)
      out.at_tyurin[i][r] += o.at_tyurin[i][r];
  return out;
}

LaxElement LaxElement::operator-(const LaxElement& o) const {
  return *this + o.scaled(-1.0);
}

LaxElement LaxElement::scaled(Complex c) const {
  LaxElement out = *this;
  out.constant *= c;
  for (auto& v : out.at_puncture)
    for (auto& m : v) m *= c;
  for (auto& v : out.at_tyurin)
    for (auto& m : v) m *= c;
  return out;
}

double LaxElement::norm() const { return pack().norm(); }

Vector LaxElement::pack() const {
  SlotLayout layout(*cfg);
  int d = layout.d;
  Vector v = Vector::Zero(layout.unknowns());
  auto put = [&](int slot, const Matrix& m) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v(slot * d * d + vec_index(d, a, b)) = m(a, b);
  };
  put(0, constant);
  for (size_t i = 0; i < at_puncture.size(); ++i)
    for (size_t r = 0; r < at_puncture[i].size(); ++r)
      put(layout.puncture_offset[i] + static_cast<int>(r), at_puncture[i][r]);
  for (size_t i = 0; i < at_tyurin.size(); ++i)
    for (size_t r = 0; r < at_tyurin[i].size(); ++r)
      put(layout.tyurin_offset[i] + static_cast<int>(r), at_tyurin[i][r]);
  return v;
}

LaxElement LaxElement::unpack(ConfigPtr cfg, const Vector& v) {
  SlotLayout layout(*cfg);
  int d = layout.d;
  LaxElement e = LaxElement::zero(cfg);
  auto get = [&](int slot) {
    Matrix m(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) m(a, b) = v(slot * d * d + vec_index(d, a, b));
    return m;
  };
  e.constant = get(0);
  for (size_t i = 0; i < e.at_puncture.size(); ++i)
    for (size_t r = 0; r < e.at_puncture[i].size(); ++r)
      e.at_puncture[i][r] = get(layout.puncture_offset[i] + static_cast<int>(r));
  for (size_t i = 0; i < e.at_tyurin.size(); ++i)
    for (size_t r = 0; r < e.at_tyurin[i].size(); ++r)
      e.at_tyurin[i][r] = get(layout.tyurin_offset[i] + static_cast<int>(r));
  return e;
}

namespace {

// vec operator of X -> sigma X^T sigma^{-1}.
Matrix sigma_transpose_operator(const AlgebraSpec& alg) {
  int d = alg.dim_rep;
  Matrix sigma_inv = alg.sigma.inverse();
  Matrix op = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          op(vec_index(d, i, j), vec_index(d, b, a)) += alg.sigma(i, a) * sigma_inv(b, j);
  return op;
}

}  // namespace

// Orthogonal projector onto the complement of span{ vec(m) : m in mats }.
Matrix complement_projector(const std::vector<Matrix>& mats, int d) {
  Matrix id = Matrix::Identity(d * d, d * d);
  if (mats.empty()) return id;
  Matrix span(d * d, mats.size());
  for (size_t t = 0; t < mats.size(); ++t)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) span(vec_index(d, a, b), t) = mats[t](a, b);
  Eigen::HouseholderQR<Matrix> qr(span);
  Matrix q = qr.householderQ() * Matrix::Identity(d * d, static_cast<int>(mats.size()));
  return id - q * q.adjoint();
}

namespace {

LaxBasis nullspace_to_basis(ConfigPtr cfg, const Matrix& constraints, double rank_tol) {
  SlotLayout layout(*cfg);
  int n = layout.unknowns();
  LaxBasis basis;
  basis.cfg = cfg;
  if (constraints.rows() == 0) {
    for (int i = 0; i < n; ++i) {
      Vector v = Vector::Zero(n);
      v(i) = 1.0;
      basis.elements.push_back(LaxElement::unpack(cfg, v));
    }
    basis.sv_gap = std::numeric_limits<double>::infinity();
    return basis;
  }
  Eigen::BDCSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  basis.singular_values = sv;
  double smax = sv.size() ? sv(0) : 0.0;
  double thresh = rank_tol * std::max(smax, 1e-300);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > thresh) ++rank;
  double largest_dropped = (rank < sv.size()) ? sv(rank) : 0.0;
  double smallest_kept = rank > 0 ? sv(rank - 1) : smax;
  basis.sv_gap = largest_dropped > 0 ? smallest_kept / largest_dropped
                                     : std::numeric_limits<double>::infinity();
  if (basis.sv_gap < 10.0)
    throw NumericalError("Lax-space rank decision ambiguous (singular-value gap " +
                         std::to_string(basis.sv_gap) + ")");
  for (int i = rank; i < n; ++i)
    basis.elements.push_back(LaxElement::unpack(cfg, svd.matrixV().col(i)));
  return basis;
}

void append_rows(Matrix& dst, const Matrix& rows) {
  if (rows.rows() == 0) return;
  Matrix merged(dst.rows() + rows.rows(), rows.cols());
  if (dst.rows() > 0) merged.topRows(dst.rows()) = dst;
  merged.bottomRows(rows.rows()) = rows;
  dst = std::move(merged);
}

Matrix membership_rows(ConfigPtr cfg) {
  SlotLayout layout(*cfg);
  int d = layout.d, n = layout.unknowns();
  if (cfg->alg.family == Family::A) return Matrix(0, n);
  Matrix op = sigma_transpose_operator(cfg->alg) + Matrix::Identity(d * d, d * d);
  Matrix rows = Matrix::Zero(layout.total_matrices * d * d, n);
  for (int slot = 0; slot < layout.total_matrices; ++slot)
    rows.block(slot * d * d, slot * d * d, d * d, d * d) = op;
  return rows;
}

// Scalar factor with which slot `slot` enters the order-p Laurent
// coefficient of L at the Tyurin point gi.
Complex slot_coefficient_at(const LaxConfig& cfg, const SlotLayout& layout, int slot,
                            int gi, int p) {
  Complex z0 = cfg.tyurin[gi].z;
  if (slot == 0) return p == 0 ? Complex(1) : Complex(0);
  for (size_t i = 0; i < cfg.punctures.size(); ++i) {
    int off = layout.puncture_offset[i];
    if (slot >= off && slot < off + cfg.punctures[i].mult) {
      int r = slot - off + 1;
      return p >= 0 ? pole_taylor_coeff(z0, cfg.punctures[i].z, r, p) : Complex(0);
    }
  }
  for (size_t i = 0; i < cfg.tyurin.size(); ++i) {
    int off = layout.tyurin_offset[i];
    if (slot >= off && slot < off + cfg.tyurin[i].depth()) {
      int r = slot - off + 1;
      if (static_cast<int>(i) == gi) return p == -r ? Complex(1) : Complex(0);
      return p >= 0 ? pole_taylor_coeff(z0, cfg.tyurin[i].z, r, p) : Complex(0);
    }
  }
  throw LaxError("slot_coefficient_at: bad slot");
}

}  // namespace

LaxBasis build_constraint_system(ConfigPtr cfg, double rank_tol) {
  cfg->validate();
  SlotLayout layout(*cfg);
  int d = layout.d, n = layout.unknowns();
  Matrix constraints(0, n);
  append_rows(constraints, membership_rows(cfg));
  for (size_t gi = 0; gi < cfg->tyurin.size(); ++gi) {
    const auto& ty = cfg->tyurin[gi];
    int k = ty.depth();
    Matrix g = ty.conjugator, ginv = ty.conjugator.inverse();
    for (int p = -k; p <= k - 1; ++p) {
      std::vector<Matrix> filt;
      for (const Matrix& b : ty.dec.filtration_basis(p)) filt.push_back(g * b * ginv);
      Matrix proj = complement_projector(filt, d);
      // Rows: proj * vec(L_p) = 0, L_p linear in unknowns with per-slot scalars.
      Matrix rows = Matrix::Zero(d * d, n);
      for (int slot = 0; slot < layout.total_matrices; ++slot) {
        Complex c = slot_coefficient_at(*cfg, layout, slot, static_cast<int>(gi), p);
        if (c == Complex(0)) continue;
        rows.block(0, slot * d * d, d * d, d * d) += c * proj;
      }
      append_rows(constraints, rows);
    }
  }
  return nullspace_to_basis(cfg, constraints, rank_tol);
}

LaxBasis build_constraint_system_normal_form(ConfigPtr cfg, double rank_tol) {
  cfg->validate();
  SlotLayout layout(*cfg);
  int d = layout.d, n = layout.unknowns();
  Matrix constraints(0, n);
  append_rows(constraints, membership_rows(cfg));
  for (size_t gi = 0; gi < cfg->tyurin.size(); ++gi) {
    const auto& ty = cfg->tyurin[gi];
    int smax = ty.h.diag.maxCoeff() - ty.h.diag.minCoeff();
    int hi = ty.depth() + smax + 2;
    Matrix ginv = ty.conjugator.inverse();
    // One germ per unknown; rows demand all negative orders of the
    // z^{-h}-conjugated germ vanish.
    std::vector<LaurentMatrix> germs;
    for (int u = 0; u < n; ++u) {
      Vector v = Vector::Zero(n);
      v(u) = 1.0;
      LaxElement unit = LaxElement::unpack(cfg, v);
      LaurentMatrix germ = unit.local_expansion(ty.z, hi).conjugated(ginv, ty.conjugator);
      germs.push_back(conjugate_by_z_power(germ, ty.h.diag, -1));
    }
    int lo = germs[0].min_lo();
    for (int order = lo; order <= -1; ++order) {
      Matrix rows = Matrix::Zero(d * d, n);
      for (int u = 0; u < n; ++u) {
        Matrix c = germs[u].coeff(order);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) rows(vec_index(d, a, b), u) = c(a, b);
      }
      append_rows(constraints, rows);
    }
  }
  return nullspace_to_basis(cfg, constraints, rank_tol);
}

LaxElement sample_lax(const LaxBasis& basis, const Vector& coefficients) {
  if (basis.elements.empty()) throw LaxError("sample_lax: empty basis");
  if (coefficients.size() != basis.dimension())
    throw LaxError("sample_lax: coefficient count mismatch");
  LaxElement out = LaxElement::zero(basis.cfg);
  for (int i = 0; i < basis.dimension(); ++i)
    out = out + basis.elements[i].scaled(coefficients(i));
  return out;
}

LaxElement sample_lax(const LaxBasis& basis, uint64_t seed) {
  Rng rng(seed);
  Vector c(basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) c(i) = random_complex(rng);
  return sample_lax(basis, c);
}

double check_tyurin_form(const LaxElement& l, int gamma_index, int extra_orders) {
  const auto& ty = l.cfg->tyurin.at(gamma_index);
  int smax = ty.h.diag.maxCoeff() - ty.h.diag.minCoeff();
  int hi = ty.depth() + smax + extra_orders;
  Matrix ginv = ty.conjugator.inverse();
  LaurentMatrix germ = l.local_expansion(ty.z, hi).conjugated(ginv, ty.conjugator);
  LaurentMatrix normal = conjugate_by_z_power(germ, ty.h.diag, -1);
  double scale = std::max(normal.max_abs(), 1e-300);
  return normal.negative_part_norm() / scale;
}

}  // namespace lax
