#include "steinkit/jacobi.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace steinkit {

namespace {

void require_length(const ShapeFamily& f, const Vector& x, const char* what) {
  if (x.size() != f.n()) {
    throw DimensionMismatch(std::string(what) + ": vector length must equal n = " +
                            std::to_string(f.n()));
  }
}

Matrix extrinsic_jacobi_raw(const ShapeFamily& f, const Vector& x) {
  Matrix r = Matrix::Zero(f.n(), f.n());
  for (const auto& a : f.operators()) {
    const Vector ax = a.matrix() * x;
    r += x.dot(ax) * a.matrix() - ax * ax.transpose();
  }
  return r;
}

}  // namespace

SymMatrix extrinsic_jacobi(const ShapeFamily& f, const Vector& x) {
  require_length(f, x, "extrinsic_jacobi");
  return SymMatrix(extrinsic_jacobi_raw(f, x));
}

SymMatrix full_jacobi(const ShapeFamily& f, const Vector& x) {
  require_length(f, x, "full_jacobi");
  const Matrix constant = x.squaredNorm() * Matrix::Identity(f.n(), f.n()) - x * x.transpose();
  return SymMatrix(f.c() * constant + extrinsic_jacobi_raw(f, x));
}

double two_stein_value(const ShapeFamily& f, const Vector& x) {
  require_length(f, x, "two_stein_value");
  return extrinsic_jacobi_raw(f, x).squaredNorm();
}

EinsteinReport einstein_check(const ShapeFamily& f) {
  const int n = f.n();
  Matrix s = Matrix::Zero(n, n);
  for (const auto& a : f.operators()) s += a.trace() * a.matrix() - a.matrix() * a.matrix();
  EinsteinReport r;
  r.c1 = s.trace() / n;
  r.residual = (s - r.c1 * Matrix::Identity(n, n)).norm();
  return r;
}

// X -> R'_X is quadratic, so its polarization B(e_i, e_j) is available in
// closed form. Pairing the B's gives the quartic coefficients without the
// cancellation that 4-linear inclusion-exclusion suffers at large |A|.
QuarticForm two_stein_quartic(const ShapeFamily& f) {
  const int n = f.n();
  std::vector<Matrix> bilinear(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> Matrix& { return bilinear[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Matrix b = Matrix::Zero(n, n);
      for (const auto& op : f.operators()) {
        const Matrix& a = op.matrix();
        const Matrix outer = a.col(i) * a.col(j).transpose();
        b += a(i, j) * a - 0.5 * (outer + outer.transpose());
      }
      at(i, j) = b;
      if (j != i) at(j, i) = b;
    }
  }
  QuarticForm q(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          const double v = (at(i, j).cwiseProduct(at(k, l)).sum() + at(i, k).cwiseProduct(at(j, l)).sum() +
                            at(i, l).cwiseProduct(at(j, k)).sum()) / 3.0;
          q.set_symmetric(i, j, k, l, v);
        }
  return q;
}

TwoSteinReport two_stein_check(const ShapeFamily& f) {
  const int n = f.n();
  const QuarticForm q = two_stein_quartic(f);
  const QuarticForm g = QuarticForm::norm_fourth(n);
  const auto ein = einstein_check(f);
  const auto tr = traces(f);

  TwoSteinReport r;
  r.c1 = ein.c1;
  r.einstein_residual = ein.residual;
  r.c2 = q.dot(g) / g.dot(g);
  r.quartic_residual = q.minus(g, r.c2).norm();
  r.schur_gap = std::abs((n - 1) * r.c2 - r.c1 * r.c1);
  r.scale = 1.0 + tr.T.norm() * tr.H.squaredNorm();
  return r;
}

std::vector<Vector> common_kernel(const ShapeFamily& f, double tol) {
  const int n = f.n();
  Matrix stacked(static_cast<Eigen::Index>(n) * f.p(), n);
  for (int s = 0; s < f.p(); ++s) stacked.middleRows(static_cast<Eigen::Index>(s) * n, n) = f.op(s).matrix();

  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;

  std::vector<Vector> basis;
  for (int i = rank; i < n; ++i) basis.emplace_back(svd.matrixV().col(i));
  return basis;
}

double sectional_curvature(const ShapeFamily& f, const Vector& x, const Vector& y, double tol) {
  require_length(f, x, "sectional_curvature");
  require_length(f, y, "sectional_curvature");
  const double nx = x.norm();
  if (nx == 0.0) throw LinearlyDependent("sectional_curvature: X is zero");
  const Vector u = x / nx;
  Vector v = y - y.dot(u) * u;
  const double nv = v.norm();
  if (nv <= tol * std::max(y.norm(), 1e-300)) {
    throw LinearlyDependent("sectional_curvature: X and Y span no plane");
  }
  v /= nv;

  double k = f.c();
  for (const auto& a : f.operators()) {
    const Vector au = a.matrix() * u;
    const double uv = au.dot(v);
    k += au.dot(u) * v.dot(a.matrix() * v) - uv * uv;
  }
  return k;
}

SectionalSweep sectional_sweep(const ShapeFamily& f, int planes, std::uint64_t seed) {
  if (f.n() < 2) throw DimensionMismatch("sectional_sweep: needs n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SectionalSweep out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  Vector x(f.n());
  Vector y(f.n());
  while (out.planes < planes) {
    for (int i = 0; i < f.n(); ++i) x(i) = gauss(rng);
    for (int i = 0; i < f.n(); ++i) y(i) = gauss(rng);
    double k = 0.0;
    try {
      k = sectional_curvature(f, x, y);
    } catch (const LinearlyDependent&) {
      continue;
    }
    if (k < out.min) {
      out.min = k;
      out.min_x = x;
      out.min_y = y;
    }
    if (k > out.max) {
      out.max = k;
      out.max_x = x;
      out.max_y = y;
    }
    sum += k;
    ++out.planes;
  }
  out.mean = planes > 0 ? sum / planes : 0.0;
  return out;
}

namespace {

// Coordinate pattern search on (x, y); sign = +1 climbs, -1 descends.
double polish_plane(const ShapeFamily& f, Vector& x, Vector& y, double sign) {
  auto value = [&](const Vector& a, const Vector& b) {
    try {
      return sign * sectional_curvature(f, a, b);
    } catch (const LinearlyDependent&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  x.normalize();
  y -= y.dot(x) * x;
  y.normalize();
  double best = value(x, y);
  for (double step = 0.25; step > 1e-9; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int which = 0; which < 2; ++which) {
        Vector& v = which == 0 ? x : y;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          for (double d : {step, -step}) {
            v(i) += d;
            const double k = value(x, y);
            if (k > best) {
              best = k;
              improved = true;
            } else {
              v(i) -= d;
            }
          }
        }
      }
      x.normalize();
      y -= y.dot(x) * x;
      y.normalize();
    }
  }
  return sign * best;
}

}  // namespace

SectionalSweep sectional_extremes(const ShapeFamily& f, int planes, std::uint64_t seed) {
  SectionalSweep out = sectional_sweep(f, planes, seed);
  if (out.planes == 0) return out;
  out.max = std::max(out.max, polish_plane(f, out.max_x, out.max_y, 1.0));
  out.min = std::min(out.min, polish_plane(f, out.min_x, out.min_y, -1.0));
  return out;
}

}  // namespace steinkit
