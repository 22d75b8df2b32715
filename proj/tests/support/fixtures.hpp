#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "steinkit/blockdiag.hpp"
#include "steinkit/linalg.hpp"

namespace steinkit::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

inline ShapeFamily family(double c, const std::vector<Matrix>& ops) { return ShapeFamily::from_matrices(c, ops); }

inline Vector unit(int n, int i) { return Vector::Unit(n, i); }

inline Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = g(rng);
  return x.normalized();
}

/// Block-diagonal (q1, q2) for a census, in the census order, without conjugation.
inline std::pair<Matrix, Matrix> assemble(const std::vector<Block>& census) {
  int n = 0;
  for (const auto& b : census) n += block_size(b);
  Matrix q1 = Matrix::Zero(n, n), q2 = Matrix::Zero(n, n);
  int at = 0;
  for (const auto& b : census) {
    if (const auto* d = std::get_if<DiagBlock>(&b)) {
      q1(at, at) = d->a;
      q2(at, at) = d->b;
      ++at;
    } else {
      const auto& p = std::get<PairBlock>(b);
      q1(at, at) = p.alpha;
      q1(at + 1, at + 1) = -p.alpha;
      q2(at, at) = p.beta;
      q2(at + 1, at + 1) = -p.beta;
      q2(at, at + 1) = q2(at + 1, at) = p.gamma;
      at += 2;
    }
  }
  return {q1, q2};
}

/// Einstein p = 2 family whose trace-free parts are the given census (which
/// must satisfy q1^2 + q2^2 = c3 I): A = Q + (H / 2) I with H = -2 Tr Q / (n - 2).
inline ShapeFamily einstein_from_census(const std::vector<Block>& census, double c = 1.0) {
  auto [q1, q2] = assemble(census);
  const int n = static_cast<int>(q1.rows());
  const Matrix id = Matrix::Identity(n, n);
  const double h1 = -2.0 * q1.trace() / (n - 2);
  const double h2 = -2.0 * q2.trace() / (n - 2);
  return ShapeFamily::from_matrices(c, {q1 + 0.5 * h1 * id, q2 + 0.5 * h2 * id});
}

}  // namespace steinkit::testing
