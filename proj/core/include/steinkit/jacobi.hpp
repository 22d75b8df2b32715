#pragma once

#include <cstdint>
#include <vector>

#include "steinkit/linalg.hpp"
#include "steinkit/quartic.hpp"

namespace steinkit {

/// Trace part of the extrinsic curvature: S = sum_s (H^s A^s - (A^s)^2) fitted
/// against c1 * I.
struct EinsteinReport {
  double c1 = 0.0;
  double residual = 0.0;  ///< ||S - c1 I||_F

  /// residual <= tol * magnitude, magnitude = max(1, sum ||A^s||_F^2).
  [[nodiscard]] bool passes(double tol, double magnitude) const { return residual <= tol * magnitude; }
};

struct TwoSteinReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double einstein_residual = 0.0;
  double quartic_residual = 0.0;  ///< ||q - c2 * tensor(||X||^4)||_F
  double schur_gap = 0.0;         ///< |(n-1) c2 - c1^2|
  double scale = 1.0;             ///< 1 + ||T||_F ||H||^2

  /// The 2-stein verdict: quartic_residual <= tol * scale.
  [[nodiscard]] bool passes(double tol) const { return quartic_residual <= tol * scale; }
};

/// R'_X = sum_s (<A^s X, X> A^s - (A^s X)(A^s X)^T)
SymMatrix extrinsic_jacobi(const ShapeFamily& f, const Vector& x);

/// R_X = c (|X|^2 I - X X^T) + R'_X, the Jacobi operator from the Gauss equation.
SymMatrix full_jacobi(const ShapeFamily& f, const Vector& x);

/// Tr((R'_X)^2), evaluated directly.
double two_stein_value(const ShapeFamily& f, const Vector& x);

EinsteinReport einstein_check(const ShapeFamily& f);

/// Coefficient tensor of q(X) = Tr((R'_X)^2), built by polarization.
QuarticForm two_stein_quartic(const ShapeFamily& f);

/// Fits c2 by least squares of the quartic tensor against the ||X||^4 tensor.
TwoSteinReport two_stein_check(const ShapeFamily& f);

/// Orthonormal basis of the intersection of ker A^s, numerical rank cut at
/// tol * max(1, largest singular value of the stacked operators).
std::vector<Vector> common_kernel(const ShapeFamily& f, double tol = kDefaultTol);

/// K(X, Y) = c + sum_s (<A^s x, x><A^s y, y> - <A^s x, y>^2) for the
/// Gram-Schmidt orthonormalization (x, y) of (X, Y).
double sectional_curvature(const ShapeFamily& f, const Vector& x, const Vector& y,
                           double tol = kDefaultTol);

struct SectionalSweep {
  int planes = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  /// Spanning pairs of the extreme planes found.
  Vector min_x, min_y, max_x, max_y;
};

/// Sectional curvature over `planes` seeded random 2-planes (Gaussian pairs).
SectionalSweep sectional_sweep(const ShapeFamily& f, int planes, std::uint64_t seed = 0);

/// sectional_sweep followed by a pattern search from the extreme planes, so
/// min and max approach the true extremes over the Grassmannian.
SectionalSweep sectional_extremes(const ShapeFamily& f, int planes, std::uint64_t seed = 0);

}  // namespace steinkit
