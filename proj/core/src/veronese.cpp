#include "steinkit/veronese.hpp"

#include <array>
#include <cmath>

namespace steinkit {

using Vec9 = Eigen::Matrix<double, 9, 1>;

Vec9 realify(const Eigen::Matrix3cd& m) {
  constexpr std::array<std::pair<int, int>, 3> off{{{0, 1}, {0, 2}, {1, 2}}};
  const double r2 = std::sqrt(2.0);
  Vec9 v;
  for (int i = 0; i < 3; ++i) v(i) = m(i, i).real();
  for (int k = 0; k < 3; ++k) {
    v(3 + k) = r2 * m(off[k].first, off[k].second).real();
    v(6 + k) = r2 * m(off[k].first, off[k].second).imag();
  }
  return v;
}

namespace {

class VeroneseChart {
 public:
  explicit VeroneseChart(const Complex3& z) : z_(z) {
    // Orthonormal complement of z, by Gram-Schmidt on the coordinate axes.
    int found = 0;
    for (int axis = 0; axis < 3 && found < 2; ++axis) {
      Complex3 w = Complex3::Unit(axis);
      w -= z_.dot(w) * z_;
      for (int j = 0; j < found; ++j) w -= dirs_[2 * j].dot(w) * dirs_[2 * j];
      if (w.norm() < 1e-3) continue;
      w.normalize();
      dirs_[2 * found] = w;
      dirs_[2 * found + 1] = std::complex<double>(0, 1) * w;
      ++found;
    }
  }

  [[nodiscard]] Vec9 operator()(const Eigen::Vector4d& x) const {
    Complex3 u = z_;
    for (int k = 0; k < 4; ++k) u += x(k) * dirs_[k];
    u.normalize();
    return realify(u * u.adjoint());
  }

 private:
  Complex3 z_;
  std::array<Complex3, 4> dirs_;
};

Vec9 first_diff(const VeroneseChart& phi, int k, double h) {
  const Eigen::Vector4d e = h * Eigen::Vector4d::Unit(k);
  return (phi(e) - phi(-e)) / (2 * h);
}

Vec9 second_diff(const VeroneseChart& phi, int k, int l, double h) {
  if (k == l) {
    const Eigen::Vector4d e = h * Eigen::Vector4d::Unit(k);
    return (phi(e) - 2 * phi(Eigen::Vector4d::Zero()) + phi(-e)) / (h * h);
  }
  const Eigen::Vector4d ek = h * Eigen::Vector4d::Unit(k);
  const Eigen::Vector4d el = h * Eigen::Vector4d::Unit(l);
  return (phi(ek + el) - phi(ek - el) - phi(-ek + el) + phi(-ek - el)) / (4 * h * h);
}

template <typename Diff>
Vec9 richardson(Diff d, double h) {
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace

ShapeFamily veronese_family(const Complex3& z, double h) {
  if (!(h >= 1e-6 && h <= 1e-3)) throw IllConditioned("veronese_family: step must lie in [1e-6, 1e-3]");
  if (std::abs(z.norm() - 1.0) > 1e-12) throw DimensionMismatch("veronese_family: z must be a unit vector");
  const VeroneseChart phi(z);

  Eigen::Matrix<double, 9, 4> jac;
  for (int k = 0; k < 4; ++k) jac.col(k) = richardson([&](double s) { return first_diff(phi, k, s); }, h);

  const Eigen::Matrix4d gram = jac.transpose() * jac;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ge(gram);
  if (ge.eigenvalues()(0) <= 1e-8 * ge.eigenvalues()(3)) throw IllConditioned("veronese_family: degenerate tangent frame");
  const Eigen::Matrix4d inv_sqrt =
      ge.eigenvectors() * ge.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * ge.eigenvectors().transpose();

  // Normal space inside the sphere: orthogonal to the tangents, to the trace
  // direction and to the radius.
  const Vec9 p0 = phi(Eigen::Vector4d::Zero());
  const Vec9 trace_dir = realify(Eigen::Matrix3cd::Identity()) / std::sqrt(3.0);
  const Vec9 radial = (p0 - trace_dir / std::sqrt(3.0)).normalized();
  Eigen::Matrix<double, 9, 6> span;
  span << jac, trace_dir, radial;
  const Eigen::HouseholderQR<Eigen::Matrix<double, 9, 6>> qr(span);
  const Eigen::Matrix<double, 9, 9> q = qr.householderQ();
  const Eigen::Matrix<double, 9, 3> normals = q.rightCols<3>();

  std::array<Eigen::Matrix4d, 3> b;
  for (auto& m : b) m.setZero();
  for (int k = 0; k < 4; ++k) {
    for (int l = k; l < 4; ++l) {
      const Vec9 d2 = richardson([&](double s) { return second_diff(phi, k, l, s); }, h);
      for (int s = 0; s < 3; ++s) b[static_cast<std::size_t>(s)](k, l) = b[static_cast<std::size_t>(s)](l, k) = normals.col(s).dot(d2);
    }
  }

  std::vector<SymMatrix> ops;
  for (const auto& bs : b) ops.emplace_back(Matrix(inv_sqrt * bs * inv_sqrt));
  return ShapeFamily(1.5, std::move(ops));
}

}  // namespace steinkit
