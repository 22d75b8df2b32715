#include "steinkit/linalg.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>

namespace steinkit {

namespace {

void stderr_warning(std::string_view message) {
  std::cerr << "steinkit: warning: " << message << '\n';
}

std::atomic<WarningHandler> g_warning_handler{&stderr_warning};

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) noexcept {
  return g_warning_handler.exchange(handler);
}

void warn(std::string_view message) {
  if (auto* handler = g_warning_handler.load()) handler(message);
}

// ---------------------------------------------------------------------------

SymMatrix::SymMatrix(const Matrix& entries, double rtol) {
  require_square(entries, "SymMatrix");
  const Matrix skew = 0.5 * (entries - entries.transpose());
  const double skew_norm = skew.norm();
  if (skew_norm > rtol * entries.norm()) {
    std::ostringstream os;
    os << "asymmetric input symmetrized (skew part " << skew_norm << ", norm " << entries.norm()
       << ")";
    warn(os.str());
  }
  m_ = 0.5 * (entries + entries.transpose());
}

SymMatrix SymMatrix::zero(int n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::identity(int n, double scale) {
  return SymMatrix(scale * Matrix::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

// ---------------------------------------------------------------------------

OrthogonalMatrix::OrthogonalMatrix(const Matrix& entries, double rtol) : m_(entries) {
  require_square(entries, "OrthogonalMatrix");
  const auto n = entries.rows();
  const double defect = (entries.transpose() * entries - Matrix::Identity(n, n)).norm();
  if (defect > rtol * static_cast<double>(n)) {
    std::ostringstream os;
    os << "matrix is not orthogonal: ||O^T O - I||_F = " << defect;
    throw NotOrthogonal(os.str());
  }
}

OrthogonalMatrix OrthogonalMatrix::identity(int n) {
  return OrthogonalMatrix(Matrix::Identity(n, n));
}

OrthogonalMatrix OrthogonalMatrix::rotation2(double angle) {
  Matrix r(2, 2);
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  r << cs, sn, -sn, cs;
  return OrthogonalMatrix(r);
}

OrthogonalMatrix OrthogonalMatrix::transpose() const {
  return OrthogonalMatrix(m_.transpose());
}

// ---------------------------------------------------------------------------

ShapeFamily::ShapeFamily(double c, std::vector<SymMatrix> operators)
    : c_(c), ops_(std::move(operators)) {
  if (ops_.empty()) throw DimensionMismatch("ShapeFamily needs at least one shape operator");
  n_ = ops_.front().n();
  for (const auto& a : ops_) {
    if (a.n() != n_) {
      std::ostringstream os;
      os << "shape operators must share dimension " << n_ << ", got " << a.n();
      throw DimensionMismatch(os.str());
    }
  }
  if (!std::isfinite(c_)) throw DimensionMismatch("ambient curvature must be finite");
}

ShapeFamily ShapeFamily::from_matrices(double c, const std::vector<Matrix>& operators,
                                       double rtol) {
  std::vector<SymMatrix> ops;
  ops.reserve(operators.size());
  for (const auto& m : operators) ops.emplace_back(m, rtol);
  return ShapeFamily(c, std::move(ops));
}

ShapeFamily ShapeFamily::with_c(double c) const { return ShapeFamily(c, ops_); }

std::vector<std::string> ShapeFamily::scope_warnings() const {
  std::vector<std::string> out;
  if (n_ < 3) {
    out.push_back("n = " + std::to_string(n_) +
                  " is below 3; the constant-curvature theorem does not apply");
  }
  return out;
}

double ShapeFamily::magnitude() const {
  double s = 0.0;
  for (const auto& a : ops_) s += a.matrix().squaredNorm();
  return std::max(1.0, s);
}

// ---------------------------------------------------------------------------

Matrix commutator(const SymMatrix& a, const SymMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("commutator: dimension mismatch");
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

ShapeFamily normal_frame_rotation(const ShapeFamily& f, const OrthogonalMatrix& o) {
  if (o.n() != f.p()) throw DimensionMismatch("normal_frame_rotation: rotation must be p x p");
  std::vector<SymMatrix> rotated;
  rotated.reserve(static_cast<std::size_t>(f.p()));
  for (int t = 0; t < f.p(); ++t) {
    Matrix acc = Matrix::Zero(f.n(), f.n());
    for (int s = 0; s < f.p(); ++s) acc += o.matrix()(t, s) * f.op(s).matrix();
    rotated.emplace_back(acc);
  }
  return ShapeFamily(f.c(), std::move(rotated));
}

Traces traces(const ShapeFamily& f) {
  const int p = f.p();
  Traces out{Vector(p), Matrix(p, p)};
  for (int s = 0; s < p; ++s) {
    out.H(s) = f.op(s).trace();
    for (int t = s; t < p; ++t) {
      // Tr(AB) for symmetric A, B is the Frobenius inner product.
      const double v = f.op(s).matrix().cwiseProduct(f.op(t).matrix()).sum();
      out.T(s, t) = v;
      out.T(t, s) = v;
    }
  }
  return out;
}

ShapeFamily change_basis(const ShapeFamily& f, const OrthogonalMatrix& basis) {
  if (basis.n() != f.n()) throw DimensionMismatch("change_basis: basis must be n x n");
  std::vector<SymMatrix> ops;
  ops.reserve(static_cast<std::size_t>(f.p()));
  for (const auto& a : f.operators()) {
    ops.emplace_back(basis.matrix().transpose() * a.matrix() * basis.matrix());
  }
  return ShapeFamily(f.c(), std::move(ops));
}

std::vector<Cluster> cluster_sorted(std::span<const double> values, double radius) {
  std::vector<Cluster> out;
  const int n = static_cast<int>(values.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(i - 1)] > radius) {
      double sum = 0.0;
      for (int k = start; k < i; ++k) sum += values[static_cast<std::size_t>(k)];
      out.push_back({start, i - start, sum / (i - start)});
      start = i;
    }
  }
  return out;
}

SymEigen sym_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace steinkit
