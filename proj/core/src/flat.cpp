#include "steinkit/flat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "steinkit/jacobi.hpp"

namespace steinkit {

namespace {

double off_diagonal_norm(const Matrix& m) {
  return (m - Matrix(m.diagonal().asDiagonal())).norm();
}

// Splits each subspace by the eigenvalues of `op` restricted to it.
std::vector<Matrix> refine(const std::vector<Matrix>& spaces, const Matrix& op, double radius) {
  std::vector<Matrix> out;
  for (const auto& w : spaces) {
    if (w.cols() == 1) {
      out.push_back(w);
      continue;
    }
    const SymEigen e = sym_eigen(w.transpose() * op * w);
    std::vector<double> vals(e.values.data(), e.values.data() + e.values.size());
    const Matrix rotated = w * e.vectors;
    for (const auto& c : cluster_sorted(vals, radius)) out.emplace_back(rotated.middleCols(c.begin, c.size));
  }
  return out;
}

bool diagonalizes(const ShapeFamily& f, const Matrix& basis, double limit) {
  for (const auto& a : f.operators()) {
    if (off_diagonal_norm(basis.transpose() * a.matrix() * basis) > limit) return false;
  }
  return true;
}

}  // namespace

bool is_flat_normal(const ShapeFamily& f, double tol) {
  for (int s = 0; s < f.p(); ++s)
    for (int t = s + 1; t < f.p(); ++t) {
      const double bound = tol * f.op(s).norm() * f.op(t).norm();
      if (commutator(f.op(s), f.op(t)).norm() > bound) return false;
    }
  return true;
}

FlatDiagonalization simultaneous_diagonalize(const ShapeFamily& f, double tol, std::uint64_t seed) {
  if (!is_flat_normal(f, tol)) throw NotCommuting("shape operators do not commute at the working tolerance");
  const int n = f.n();
  const int p = f.p();
  double scale = 1.0;
  for (const auto& a : f.operators()) scale = std::max(scale, a.norm());
  const double radius = tol * scale;
  const double limit = std::sqrt(tol) * scale;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector t(p);
  for (int s = 0; s < p; ++s) t(s) = gauss(rng);
  t.normalize();

  Matrix combo = Matrix::Zero(n, n);
  for (int s = 0; s < p; ++s) combo += t(s) * f.op(s).matrix();
  const SymEigen e = sym_eigen(combo);
  Matrix basis = e.vectors;

  if (!diagonalizes(f, basis, limit)) {
    // Degenerate combination: refine the tied eigenspaces by each operator in turn.
    std::vector<double> vals(e.values.data(), e.values.data() + e.values.size());
    std::vector<Matrix> spaces;
    for (const auto& c : cluster_sorted(vals, radius)) spaces.emplace_back(e.vectors.middleCols(c.begin, c.size));
    for (int s = 0; s < p; ++s) spaces = refine(spaces, f.op(s).matrix(), radius);
    Eigen::Index col = 0;
    for (const auto& w : spaces) {
      basis.middleCols(col, w.cols()) = w;
      col += w.cols();
    }
    if (!diagonalizes(f, basis, limit)) {
      throw NotCommuting("no common eigenbasis found; the family is not simultaneously diagonalizable");
    }
  }

  for (int i = 0; i < n; ++i) {
    Eigen::Index k = 0;
    basis.col(i).cwiseAbs().maxCoeff(&k);
    if (basis(k, i) < 0) basis.col(i) *= -1.0;
  }
  const FlatDiagonalization unsorted = diagonalization_in_basis(f, OrthogonalMatrix(basis));

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Matrix& lam = unsorted.lambdas;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    for (int s = 0; s < p; ++s) {
      if (std::abs(lam(a, s) - lam(b, s)) > radius) return lam(a, s) < lam(b, s);
    }
    return false;
  });
  Matrix sorted_basis(n, n);
  Matrix sorted_lambdas(n, p);
  for (int i = 0; i < n; ++i) {
    sorted_basis.col(i) = basis.col(order[static_cast<std::size_t>(i)]);
    sorted_lambdas.row(i) = lam.row(order[static_cast<std::size_t>(i)]);
  }
  return {OrthogonalMatrix(sorted_basis), sorted_lambdas};
}

FlatDiagonalization diagonalization_in_basis(const ShapeFamily& f, const OrthogonalMatrix& basis) {
  if (basis.n() != f.n()) throw DimensionMismatch("diagonalization_in_basis: basis must be n x n");
  Matrix lambdas(f.n(), f.p());
  for (int s = 0; s < f.p(); ++s) {
    lambdas.col(s) = (basis.matrix().transpose() * f.op(s).matrix() * basis.matrix()).diagonal();
  }
  return {basis, lambdas};
}

FlatReport flat_identities(const FlatDiagonalization& d) {
  const Matrix& lam = d.lambdas;
  const auto n = lam.rows();
  const auto p = lam.cols();
  const Vector H = lam.colwise().sum().transpose();
  const Matrix T = lam.transpose() * lam;

  FlatReport r;
  r.scale = std::max(1.0, T.trace());
  r.flein_values.resize(n);
  r.fl2st_values.resize(n, n);
  r.fl2stii_values.resize(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    double e = 0.0;
    for (Eigen::Index s = 0; s < p; ++s) e += H(s) * lam(i, s) - lam(i, s) * lam(i, s);
    r.flein_values(i) = e;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 0.0;
      for (Eigen::Index s = 0; s < p; ++s)
        for (Eigen::Index t = 0; t < p; ++t) {
          v += T(s, t) * lam(i, s) * lam(j, t) + lam(i, s) * lam(j, s) * lam(i, t) * lam(j, t) -
               lam(i, s) * lam(j, s) * lam(j, t) * lam(j, t) -
               lam(j, s) * lam(i, s) * lam(i, t) * lam(i, t);
        }
      r.fl2st_values(i, j) = v;
    }
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = 0.0;
    for (Eigen::Index s = 0; s < p; ++s)
      for (Eigen::Index t = 0; t < p; ++t) {
        const double prod = lam(i, s) * lam(i, t);
        v += T(s, t) * prod - prod * prod;
      }
    r.fl2stii_values(i) = v;
  }

  r.c1 = r.flein_values.mean();
  r.c2 = r.fl2st_values.mean();
  r.flein_residual = (r.flein_values.array() - r.c1).abs().maxCoeff();
  r.fl2st_residual = (r.fl2st_values.array() - r.c2).abs().maxCoeff();
  r.fl2stii_residual = (r.fl2stii_values.array() - r.c2).abs().maxCoeff();
  r.schur_gap = std::abs(static_cast<double>(n - 1) * r.c2 - r.c1 * r.c1);
  return r;
}

double flat_kappa(double c, double c1, int n) { return n >= 2 ? c + c1 / (n - 1) : c; }

FlatReport constant_curvature_conclusion(const ShapeFamily& f, FlatReport report, int samples,
                                         std::uint64_t seed, double tol) {
  if (!report.two_stein(tol)) {
    std::ostringstream os;
    os << "flat 2-stein identities fail: fl2st residual " << report.fl2st_residual;
    throw NotTwoStein(os.str());
  }
  const int n = f.n();
  const double kappa = flat_kappa(f.c(), report.c1, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    x.normalize();
    const Matrix target = kappa * (Matrix::Identity(n, n) - x * x.transpose());
    worst = std::max(worst, (full_jacobi(f, x).matrix() - target).norm());
  }
  report.kappa = kappa;
  report.conclusion_residual = worst;
  return report;
}

}  // namespace steinkit
