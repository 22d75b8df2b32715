#pragma once

#include <cstdint>
#include <optional>

#include "steinkit/linalg.hpp"

namespace steinkit {

/// Common orthonormal eigenbasis of a commuting family.
struct FlatDiagonalization {
  OrthogonalMatrix basis;
  Matrix lambdas;  ///< n x p, lambdas(i, s) = <A^s e_i, e_i>
};

/// Identities satisfied by the principal curvatures of a 2-stein family with
/// flat normal connection, and the resulting constant-curvature conclusion.
struct FlatReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double flein_residual = 0.0;    ///< max_i |sum_s (H^s l_i^s - (l_i^s)^2) - c1|
  double fl2st_residual = 0.0;    ///< max_{i,j} |fl2st(i, j) - c2|
  double fl2stii_residual = 0.0;  ///< max_i |fl2stii(i) - c2|
  double schur_gap = 0.0;         ///< |(n - 1) c2 - c1^2|
  double scale = 1.0;             ///< max(1, sum_i |l_i|^2)
  std::optional<double> kappa;
  std::optional<double> conclusion_residual;

  Vector flein_values;
  Matrix fl2st_values;
  Vector fl2stii_values;

  /// fl2st_residual <= tol * scale^2
  [[nodiscard]] bool two_stein(double tol) const { return fl2st_residual <= tol * scale * scale; }
};

/// True iff ||[A^s, A^t]||_F <= tol ||A^s||_F ||A^t||_F for all s < t.
bool is_flat_normal(const ShapeFamily& f, double tol = kDefaultTol);

/// Diagonalizes a seeded random combination sum_s t_s A^s and refines tied
/// eigenspaces operator by operator. Columns are ordered lexicographically by
/// their principal-curvature rows; each column's largest entry is positive.
/// Throws NotCommuting if the family is not flat-normal at tol.
FlatDiagonalization simultaneous_diagonalize(const ShapeFamily& f, double tol = kDefaultTol,
                                             std::uint64_t seed = 0);

/// Reads principal curvatures off the diagonals of basis^T A^s basis.
FlatDiagonalization diagonalization_in_basis(const ShapeFamily& f, const OrthogonalMatrix& basis);

FlatReport flat_identities(const FlatDiagonalization& d);

/// kappa = c + c1 / (n - 1), the constant sectional curvature of a family
/// whose extrinsic Jacobi operator is c1 / (n - 1) (|X|^2 I - X X^T).
double flat_kappa(double c, double c1, int n);

/// Completes `report` with kappa and the max over `samples` seeded unit X of
/// ||R_X - kappa (I - X X^T)||_F. Throws NotTwoStein unless report.two_stein(tol).
FlatReport constant_curvature_conclusion(const ShapeFamily& f, FlatReport report, int samples = 500,
                                         std::uint64_t seed = 0, double tol = kDefaultTol);

}  // namespace steinkit
