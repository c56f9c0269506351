#include "lax/algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <set>

namespace lax {

const char* family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
  }
  return "?";
}

Family family_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return Family::A;
    case 'B': case 'b': return Family::B;
    case 'C': case 'c': return Family::C;
    case 'D': case 'd': return Family::D;
  }
  throw LaxError("unsupported family (expected one of A/B/C/D)");
}

int AlgebraSpec::dim_algebra() const {
  int n = rank;
  switch (family) {
    case Family::A: return n * n;
    case Family::B: return n * (2 * n + 1);
    case Family::C: return n * (2 * n + 1);
    case Family::D: return n * (2 * n - 1);
  }
  return 0;
}

AlgebraSpec make_algebra(Family family, int n) {
  if (n < 1) throw LaxError("rank must be positive");
  AlgebraSpec spec;
  spec.family = family;
  spec.rank = n;
  switch (family) {
    case Family::A: spec.dim_rep = n; break;
    case Family::B: spec.dim_rep = 2 * n + 1; break;
    case Family::C: spec.dim_rep = 2 * n; break;
    case Family::D: spec.dim_rep = 2 * n; break;
  }
  int d = spec.dim_rep;
  spec.sigma = Matrix::Zero(d, d);
  if (family == Family::A) {
    spec.sigma = Matrix::Identity(d, d);
  } else {
    for (int i = 0; i < d; ++i) {
      double s = 1.0;
      if (family == Family::C && i >= n) s = -1.0;
      spec.sigma(i, d - 1 - i) = s;
    }
  }
  return spec;
}

AlgebraSpec make_algebra(char family, int n) {
  return make_algebra(family_from_char(family), n);
}

Matrix sigma_transpose(const Matrix& x, const AlgebraSpec& alg) {
  if (x.rows() != alg.dim_rep || x.cols() != alg.dim_rep)
    throw LaxError("sigma_transpose: dimension mismatch");
  if (alg.family == Family::A) return x.transpose();
  return alg.sigma * x.transpose() * alg.sigma.inverse();
}

double membership_residual(const Matrix& x, const AlgebraSpec& alg) {
  if (x.rows() != alg.dim_rep || x.cols() != alg.dim_rep)
    throw LaxError("membership_residual: dimension mismatch");
  if (alg.family == Family::A) return 0.0;
  return inf_norm(sigma_transpose(x, alg) + x);
}

bool is_member(const Matrix& x, const AlgebraSpec& alg, double tol) {
  double scale = std::max(1.0, inf_norm(x));
  return membership_residual(x, alg) <= tol * scale;
}

Matrix project_to_algebra(const Matrix& x, const AlgebraSpec& alg) {
  if (alg.family == Family::A) return x;
  return (x - sigma_transpose(x, alg)) / 2.0;
}

std::vector<Matrix> algebra_basis(const AlgebraSpec& alg) {
  int d = alg.dim_rep;
  std::vector<Matrix> basis;
  if (alg.family == Family::A) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Matrix e = Matrix::Zero(d, d);
        e(i, j) = 1.0;
        basis.push_back(e);
      }
    return basis;
  }
  // Entry (i,j) is paired with (d-1-j, d-1-i) by the anti-transpose; keep one
  // representative per orbit.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int pi = d - 1 - j, pj = d - 1 - i;
      if (std::pair(i, j) > std::pair(pi, pj)) continue;
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      Matrix y = e - sigma_transpose(e, alg);
      if (inf_norm(y) < 0.5) continue;  // fixed entry killed by the involution
      basis.push_back(y);
    }
  if (static_cast<int>(basis.size()) != alg.dim_algebra())
    throw LaxError("algebra_basis: dimension mismatch against the family formula");
  return basis;
}

double group_residual(const Matrix& g, const AlgebraSpec& alg) {
  if (alg.family == Family::A) return 0.0;
  return inf_norm(g.transpose() * alg.sigma * g - alg.sigma);
}

bool is_group_member(const Matrix& g, const AlgebraSpec& alg, double tol) {
  return group_residual(g, alg) <= tol * std::max(1.0, inf_norm(alg.sigma));
}

Matrix project_to_group(Matrix g, const AlgebraSpec& alg, int iters) {
  if (alg.family == Family::A) return g;
  int d = alg.dim_rep;
  Matrix sigma_inv = alg.sigma.inverse();
  for (int it = 0; it < iters; ++it) {
    Matrix e = sigma_inv * g.transpose() * alg.sigma * g - Matrix::Identity(d, d);
    g = g * (Matrix::Identity(d, d) - 0.5 * e);
  }
  return g;
}

Matrix random_member(const AlgebraSpec& alg, Rng& rng) {
  return project_to_algebra(random_matrix(alg.dim_rep, alg.dim_rep, rng), alg);
}

Matrix random_group_element(const AlgebraSpec& alg, Rng& rng, double scale) {
  Matrix x = scale * random_member(alg, rng);
  return project_to_group(x.exp(), alg);
}

Matrix GradingElement::as_matrix() const {
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  for (int i = 0; i < diag.size(); ++i) m(i, i) = static_cast<double>(diag(i));
  return m;
}

namespace {

// Weight of the standard basis vector e_t as a vector in Z^n (coordinates of
// the diagonal Cartan diag(c_1..c_n, [0,] -c_n..-c_1)).
IntVector coordinate_weight(const AlgebraSpec& alg, int t) {
  int n = alg.rank, d = alg.dim_rep;
  IntVector w = IntVector::Zero(n);
  if (alg.family == Family::A) {
    w(t) = 1;
  } else if (t < n) {
    w(t) = 1;
  } else if (t >= d - n) {
    w(d - 1 - t) = -1;
  }
  return w;
}

struct IntVecLess {
  bool operator()(const IntVector& a, const IntVector& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                        b.data(), b.data() + b.size());
  }
};

}  // namespace

std::vector<IntVector> root_vectors(const AlgebraSpec& alg) {
  std::set<IntVector, IntVecLess> roots;
  int d = alg.dim_rep;
  for (const Matrix& y : algebra_basis(alg)) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (std::abs(y(i, j)) < 0.5) continue;
        IntVector r = coordinate_weight(alg, i) - coordinate_weight(alg, j);
        if (r.cwiseAbs().sum() > 0) roots.insert(r);
      }
  }
  return {roots.begin(), roots.end()};
}

std::vector<IntVector> simple_roots(const AlgebraSpec& alg) {
  auto roots = root_vectors(alg);
  auto positive = [](const IntVector& r) {
    for (int i = 0; i < r.size(); ++i) {
      if (r(i) > 0) return true;
      if (r(i) < 0) return false;
    }
    return false;
  };
  std::vector<IntVector> pos;
  for (auto& r : roots)
    if (positive(r)) pos.push_back(r);
  std::vector<IntVector> simple;
  for (auto& r : pos) {
    bool decomposable = false;
    for (auto& a : pos) {
      for (auto& b : pos) {
        if ((a + b - r).cwiseAbs().sum() == 0) {
          decomposable = true;
          break;
        }
      }
      if (decomposable) break;
    }
    if (!decomposable) simple.push_back(r);
  }
  return simple;
}

GradingElement make_grading_element(const AlgebraSpec& alg, const IntVector& diag) {
  int d = alg.dim_rep, n = alg.rank;
  if (diag.size() != d) throw LaxError("grading element: diagonal length != d");
  if (alg.family != Family::A) {
    for (int i = 0; i < d; ++i)
      if (diag(i) + diag(d - 1 - i) != 0)
        throw LaxError("grading element: not sigma-compatible (h_i + h_{d+1-i} != 0)");
  }
  IntVector c(n);
  for (int i = 0; i < n && i < d; ++i) c(i) = diag(i);
  for (const auto& alpha : simple_roots(alg)) {
    long v = 0;
    for (int i = 0; i < n; ++i) v += static_cast<long>(alpha(i)) * c(i);
    if (v < 0)
      throw LaxError("grading element: not in the positive chamber (alpha(h) < 0)");
  }
  GradingElement h;
  h.diag = diag;
  // Depth of the induced grading on g.
  int depth = 0;
  for (const Matrix& y : algebra_basis(alg)) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (std::abs(y(i, j)) > 0.5) depth = std::max(depth, diag(i) - diag(j));
  }
  h.depth = depth;
  return h;
}

GradedDecomposition grading(const AlgebraSpec& alg, const IntVector& hdiag) {
  GradedDecomposition dec;
  dec.alg = alg;
  dec.h = make_grading_element(alg, hdiag);
  int d = alg.dim_rep;
  for (const Matrix& y : algebra_basis(alg)) {
    // h is diagonal, so every basis element is an ad(h)-eigenvector; read the
    // eigenvalue off any nonzero entry.
    int p = 0;
    bool found = false;
    for (int i = 0; i < d && !found; ++i)
      for (int j = 0; j < d && !found; ++j)
        if (std::abs(y(i, j)) > 0.5) {
          p = hdiag(i) - hdiag(j);
          found = true;
        }
    dec.pieces[p].push_back(y);
  }
  return dec;
}

std::vector<Matrix> GradedDecomposition::filtration_basis(int p) const {
  std::vector<Matrix> out;
  for (const auto& [q, elems] : pieces)
    if (q <= p) out.insert(out.end(), elems.begin(), elems.end());
  return out;
}

int GradedDecomposition::filtration_dim(int p) const {
  int dim = 0;
  for (const auto& [q, elems] : pieces)
    if (q <= p) dim += static_cast<int>(elems.size());
  return dim;
}

std::vector<int> GradedDecomposition::flag_indices(int j) const {
  std::vector<int> idx;
  for (int t = 0; t < h.diag.size(); ++t)
    if (h.diag(t) <= j) idx.push_back(t);
  return idx;
}

int GradedDecomposition::eigenspace_dim(int i) const {
  int dim = 0;
  for (int t = 0; t < h.diag.size(); ++t)
    if (h.diag(t) == i) ++dim;
  return dim;
}

}  // namespace lax
