#include "lax/baker.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace lax {

namespace {

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

SheetOrdering sheet_ordering(const std::vector<Complex>& ev, Family family, double tol) {
  int d = static_cast<int>(ev.size());
  SheetOrdering ord;
  ord.perm.assign(d, -1);
  double scale = 1e-300;
  for (auto v : ev) scale = std::max(scale, std::abs(v));

  std::vector<int> unmatched(d);
  for (int i = 0; i < d; ++i) unmatched[i] = i;

  if (family == Family::B) {
    auto it = std::min_element(unmatched.begin(), unmatched.end(), [&](int a, int b) {
      return std::abs(ev[a]) < std::abs(ev[b]);
    });
    int zi = *it;
    if (std::abs(ev[zi]) > tol * scale)
      throw NumericalError("sheet_ordering: family B zero sheet not found");
    ord.zero_sheet = d / 2;
    ord.perm[d / 2] = zi;
    unmatched.erase(it);
  }

  // Greedy pairing, lex-largest representative first (deterministic).
  int n_pairs = static_cast<int>(unmatched.size()) / 2;
  std::vector<std::pair<int, int>> pairs;
  while (!unmatched.empty()) {
    auto rep_it = std::max_element(unmatched.begin(), unmatched.end(), [&](int a, int b) {
      return lex_less(ev[a], ev[b]);
    });
    int rep = *rep_it;
    unmatched.erase(rep_it);
    auto par_it = std::min_element(unmatched.begin(), unmatched.end(), [&](int a, int b) {
      return std::abs(ev[rep] + ev[a]) < std::abs(ev[rep] + ev[b]);
    });
    if (par_it == unmatched.end())
      throw NumericalError("sheet_ordering: odd number of nonzero eigenvalues");
    int par = *par_it;
    unmatched.erase(par_it);
    double res = std::abs(ev[rep] + ev[par]);
    if (res > tol * scale)
      throw NumericalError("sheet_ordering: unpaired eigenvalue (irregular point)");
    ord.max_pair_residual = std::max(ord.max_pair_residual, res);
    pairs.emplace_back(rep, par);
  }
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return lex_less(ev[b.first], ev[a.first]);
  });
  for (int t = 0; t < n_pairs; ++t) {
    ord.perm[t] = pairs[t].first;
    ord.perm[d - 1 - t] = pairs[t].second;
  }
  return ord;
}

EigenFrame eigen_frame(const Matrix& l_value, const AlgebraSpec& alg, double pair_tol) {
  Eigen::ComplexEigenSolver<Matrix> es(l_value);
  if (es.info() != Eigen::Success) throw NumericalError("eigen_frame: eigensolver failed");
  std::vector<Complex> ev(l_value.rows());
  for (size_t i = 0; i < ev.size(); ++i) ev[i] = es.eigenvalues()(i);
  EigenFrame frame;
  frame.ordering = sheet_ordering(ev, alg.family, pair_tol);
  int d = alg.dim_rep;
  frame.psi = Matrix(d, d);
  frame.lambda = Vector(d);
  for (int s = 0; s < d; ++s) {
    frame.psi.col(s) = es.eigenvectors().col(frame.ordering.perm[s]);
    frame.lambda(s) = ev[frame.ordering.perm[s]];
  }
  return frame;
}

Complex pairing(const Vector& psi1, const Vector& psi2, const AlgebraSpec& alg) {
  if (psi1.size() != alg.dim_rep || psi2.size() != alg.dim_rep)
    throw LaxError("pairing: dimension mismatch with the ordering");
  return 0.5 * (psi1.transpose() * alg.sigma * psi2)(0, 0);
}

Matrix orthonormalize(Matrix psi, Vector& lambda, const AlgebraSpec& alg) {
  int d = alg.dim_rep, n = alg.rank;
  double colscale = psi.cwiseAbs().maxCoeff();
  for (int s = 0; s < n; ++s) {
    int p = d - 1 - s;
    Complex beta = (psi.col(s).transpose() * alg.sigma * psi.col(p))(0, 0);
    if (std::abs(beta) < 1e-10 * colscale * colscale)
      throw NumericalError("orthonormalize: isotropic degenerate Gram pivot");
    Complex root = std::sqrt(beta);
    psi.col(s) /= root;
    psi.col(p) /= root;
  }
  if (alg.family == Family::B) {
    int mid = d / 2;
    Complex beta = (psi.col(mid).transpose() * alg.sigma * psi.col(mid))(0, 0);
    if (std::abs(beta) < 1e-10 * colscale * colscale)
      throw NumericalError("orthonormalize: isotropic zero-sheet column");
    psi.col(mid) /= std::sqrt(beta);
  }
  if (alg.family == Family::B || alg.family == Family::D) {
    Complex det = psi.determinant();
    if (det.real() < 0) {
      if (alg.family == Family::B) {
        psi.col(d / 2) *= -1.0;
      } else {
        psi.col(n - 1).swap(psi.col(n));
        std::swap(lambda(n - 1), lambda(n));
      }
    }
  }
  return psi;
}

void ThetaParams::validate() const {
  if (omega.rows() != genus || omega.cols() != genus)
    throw LaxError("theta: period matrix size != genus");
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw LaxError("theta: period matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega.imag());
  if (es.eigenvalues().minCoeff() <= 0)
    throw LaxError("theta: Im(Omega) not positive definite");
}

namespace {

int required_truncation(const ThetaParams& p, double ynorm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.omega.imag());
  double lmin = es.eigenvalues().minCoeff();
  for (int nmax = 1; nmax <= 60; ++nmax) {
    double tail = 0;
    for (int s = nmax + 1; s <= nmax + 200; ++s) {
      double shell = std::pow(2.0 * s + 1, p.genus) - std::pow(2.0 * s - 1, p.genus);
      tail += shell * std::exp(-M_PI * lmin * s * s + 2.0 * M_PI * s * ynorm);
      if (tail > 1e200) break;
    }
    if (tail < p.target) return nmax;
  }
  throw NumericalError("theta: truncation radius > 60 required for this argument");
}

}  // namespace

Complex theta(const Vector& z, const ThetaParams& params) {
  params.validate();
  if (z.size() != params.genus) throw LaxError("theta: argument size != genus");
  double ynorm = z.imag().norm();
  int nmax = params.trunc > 0 ? params.trunc : required_truncation(params, ynorm);
  if (params.trunc > 0 && params.trunc < required_truncation(params, ynorm))
    throw NumericalError("theta: requested truncation insufficient; need N = " +
                         std::to_string(required_truncation(params, ynorm)));
  int g = params.genus;
  std::vector<int> n(g, -nmax);
  Complex sum = 0;
  const Complex ipi(0, M_PI);
  for (;;) {
    Complex quad = 0, lin = 0;
    for (int i = 0; i < g; ++i) {
      lin += static_cast<double>(n[i]) * z(i);
      for (int j = 0; j < g; ++j)
        quad += static_cast<double>(n[i]) * params.omega(i, j) * static_cast<double>(n[j]);
    }
    sum += std::exp(ipi * quad + 2.0 * ipi * lin);
    int c = 0;
    while (c < g && ++n[c] > nmax) n[c++] = -nmax;
    if (c == g) break;
  }
  return sum;
}

Complex assemble_ba_entry(Complex integral, const Vector& num_arg, const Vector& den_arg,
                          const ThetaParams& params) {
  Complex den = theta(den_arg, params);
  if (std::abs(den) < 1e-13)
    throw NumericalError("assemble_ba_entry: denominator theta at a divisor point");
  return std::exp(integral) * theta(num_arg, params) / den;
}

}  // namespace lax
