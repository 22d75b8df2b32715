#pragma once

#include <complex>

#include "steinkit/linalg.hpp"

namespace steinkit {

using Complex3 = Eigen::Vector3cd;

/// Hermitian 3x3 -> R^9: diagonal entries, then sqrt(2) Re and sqrt(2) Im of
/// the (0,1), (0,2), (1,2) entries. The Frobenius product becomes the dot product.
Eigen::Matrix<double, 9, 1> realify(const Eigen::Matrix3cd& hermitian);

/// Shape operators of the Veronese surface z -> z z^* of CP^2 inside the
/// 7-sphere of trace-one Hermitian matrices (radius sqrt(2/3) about I/3, so
/// c = 3/2), at the image of the unit vector z. Tangent directions are w and
/// i w for an orthonormal basis w of the complement of z; derivatives use
/// central differences with step h, Richardson-extrapolated with h / 2.
/// Returns n = 4, p = 3 with the tangent frame ordered (w1, i w1, w2, i w2).
/// Throws IllConditioned unless 1e-6 <= h <= 1e-3, DimensionMismatch if z is
/// not a unit vector.
ShapeFamily veronese_family(const Complex3& z, double h = 1e-3);

}  // namespace steinkit
