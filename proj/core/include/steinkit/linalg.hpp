#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinkit/errors.hpp"

namespace steinkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Global relative tolerance used when a call does not override it.
inline constexpr double kDefaultTol = 1e-9;
/// Orthogonality check ||O^T O - I||_F <= tol * n.
inline constexpr double kOrthogonalityTol = 1e-10;

using WarningHandler = void (*)(std::string_view message);

/// Installs a sink for non-fatal diagnostics; returns the previous one.
/// The default writes to stderr. Passing nullptr silences warnings.
WarningHandler set_warning_handler(WarningHandler handler) noexcept;
void warn(std::string_view message);

/// Dense real symmetric matrix. Input is symmetrized as (a + a^T) / 2.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& entries, double rtol = kDefaultTol);

  static SymMatrix zero(int n);
  static SymMatrix identity(int n, double scale = 1.0);
  static SymMatrix diagonal(const Vector& d);

  [[nodiscard]] int n() const noexcept { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] double operator()(int i, int j) const { return m_(i, j); }
  [[nodiscard]] double trace() const { return m_.trace(); }
  [[nodiscard]] double norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

/// Square matrix with orthonormal columns, checked on construction.
class OrthogonalMatrix {
 public:
  explicit OrthogonalMatrix(const Matrix& entries, double rtol = kOrthogonalityTol);

  static OrthogonalMatrix identity(int n);
  /// [[cos t, sin t], [-sin t, cos t]]
  static OrthogonalMatrix rotation2(double angle);

  [[nodiscard]] int n() const noexcept { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] OrthogonalMatrix transpose() const;

 private:
  Matrix m_;
};

/// Shape operators A^1..A^p of an n-dimensional submanifold at one point, in
/// an ambient space form of curvature c. List order fixes the normal frame.
class ShapeFamily {
 public:
  ShapeFamily(double c, std::vector<SymMatrix> operators);

  static ShapeFamily from_matrices(double c, const std::vector<Matrix>& operators,
                                   double rtol = kDefaultTol);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] int p() const noexcept { return static_cast<int>(ops_.size()); }
  [[nodiscard]] double c() const noexcept { return c_; }
  [[nodiscard]] const std::vector<SymMatrix>& operators() const noexcept { return ops_; }
  [[nodiscard]] const SymMatrix& op(int sigma) const { return ops_.at(static_cast<std::size_t>(sigma)); }

  [[nodiscard]] ShapeFamily with_c(double c) const;
  /// Messages for inputs outside the theorem's hypotheses (n < 3).
  [[nodiscard]] std::vector<std::string> scope_warnings() const;
  /// max(1, sum_sigma ||A^sigma||_F^2); the natural unit of curvature values.
  [[nodiscard]] double magnitude() const;

 private:
  int n_ = 0;
  double c_ = 0.0;
  std::vector<SymMatrix> ops_;
};

struct Traces {
  Vector H;  ///< H[s] = Tr A^s
  Matrix T;  ///< T[s][t] = Tr(A^s A^t)
};

/// a b - b a
Matrix commutator(const SymMatrix& a, const SymMatrix& b);

/// A'^t = sum_s o[t][s] A^s
ShapeFamily normal_frame_rotation(const ShapeFamily& f, const OrthogonalMatrix& o);

Traces traces(const ShapeFamily& f);

/// Expresses every operator in the basis given by the columns of `basis`:
/// A^s -> basis^T A^s basis.
ShapeFamily change_basis(const ShapeFamily& f, const OrthogonalMatrix& basis);

/// A group of consecutive sorted values whose gaps do not exceed a radius.
struct Cluster {
  int begin = 0;  ///< index into the sorted value list
  int size = 0;
  double mean = 0.0;
};

/// Single-linkage clustering of ascending `values` with the given radius.
std::vector<Cluster> cluster_sorted(std::span<const double> values, double radius);

/// Eigen-decomposition of a symmetric matrix, ascending eigenvalues.
struct SymEigen {
  Vector values;
  Matrix vectors;
};
SymEigen sym_eigen(const Matrix& m);

}  // namespace steinkit
