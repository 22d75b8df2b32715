#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "steinkit/flat.hpp"
#include "steinkit/generators.hpp"
#include "support/fixtures.hpp"

namespace steinkit {
namespace {

using testing::diag;
using testing::family;
using testing::mat;

TEST(IsFlatNormal, Examples) {
  EXPECT_TRUE(is_flat_normal(family(0, {mat({{1, 2}, {2, 3}})})));
  EXPECT_FALSE(is_flat_normal(family(0, {diag({1, 2}), mat({{0, 1}, {1, 0}})})));
  EXPECT_TRUE(is_flat_normal(generate({GeneratorKind::Commuting, 5, 3, 4, {}, 1.0})));
}

TEST(SimultaneousDiagonalize, SingleOperator) {
  const FlatDiagonalization d = simultaneous_diagonalize(family(0, {diag({3, 1, 2})}));
  EXPECT_TRUE(d.lambdas.col(0).isApprox(Vector::LinSpaced(3, 1, 3)));
  EXPECT_NEAR(d.basis.matrix().cwiseAbs().sum(), 3.0, 1e-12);  // a permutation up to signs
}

TEST(SimultaneousDiagonalize, DegenerateFirstOperator) {
  const FlatDiagonalization d = simultaneous_diagonalize(family(0, {Matrix::Identity(3, 3), diag({1, 2, 3})}));
  EXPECT_TRUE(d.lambdas.col(0).isApprox(Vector::Ones(3)));
  EXPECT_TRUE(d.lambdas.col(1).isApprox(Vector::LinSpaced(3, 1, 3)));
}

TEST(SimultaneousDiagonalize, NotCommutingThrows) {
  EXPECT_THROW(simultaneous_diagonalize(family(0, {diag({1, 2}), mat({{0, 1}, {1, 0}})})), NotCommuting);
}

TEST(SimultaneousDiagonalize, RecoversConjugatedEigenvalues) {
  Matrix l(5, 2);
  l << 1, 0, 1, 2, -0.5, 2, 3, 3, 1, 0;  // repeated rows exercise ties
  const ShapeFamily f = commuting_family(0.2, l, random_orthogonal(5, 31));
  const FlatDiagonalization d = simultaneous_diagonalize(f);
  auto rows = [](const Matrix& m) {
    std::vector<std::pair<double, double>> v;
    // Round before sorting so roundoff cannot reorder rows with tied first entries.
    for (Eigen::Index i = 0; i < m.rows(); ++i) v.emplace_back(std::round(m(i, 0) * 1e6) / 1e6, m(i, 1));
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = rows(l), b = rows(d.lambdas);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].first, b[i].first, 1e-9);
    EXPECT_NEAR(a[i].second, b[i].second, 1e-9);
  }
  for (int s = 0; s < 2; ++s) {
    const Matrix m = d.basis.matrix().transpose() * f.op(s).matrix() * d.basis.matrix();
    EXPECT_LT((m - Matrix(d.lambdas.col(s).asDiagonal())).norm(), 1e-9);
  }
}

FlatDiagonalization from_lambdas(const Matrix& l) { return {OrthogonalMatrix::identity(static_cast<int>(l.rows())), l}; }

TEST(FlatIdentities, Umbilical) {
  const double a = 1.5;
  const int n = 4;
  const FlatReport r = flat_identities(from_lambdas(Matrix::Constant(n, 1, a)));
  EXPECT_NEAR(r.c1, (n - 1) * a * a, 1e-12);
  EXPECT_NEAR(r.c2, (n - 1) * std::pow(a, 4), 1e-12);
  EXPECT_NEAR(r.flein_residual, 0.0, 1e-12);
  EXPECT_NEAR(r.fl2st_residual, 0.0, 1e-12);
  EXPECT_NEAR(r.fl2stii_residual, 0.0, 1e-12);
  EXPECT_NEAR(r.schur_gap, 0.0, 1e-11);
}

TEST(FlatIdentities, Clifford) {
  Matrix l(4, 1);
  l << 1, -1, 1, -1;
  const FlatReport r = flat_identities(from_lambdas(l));
  EXPECT_NEAR(r.c1, -1.0, 1e-14);
  EXPECT_NEAR(r.flein_residual, 0.0, 1e-14);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(r.fl2st_values(i, j), 2 * l(i) * l(j) + 1, 1e-14);
  EXPECT_NEAR(r.fl2st_residual, 2.0, 1e-14);
  EXPECT_FALSE(r.two_stein(1e-9));
}

TEST(FlatIdentities, ZeroLambdas) {
  const FlatReport r = flat_identities(from_lambdas(Matrix::Zero(3, 2)));
  EXPECT_EQ(r.c1, 0.0);
  EXPECT_EQ(r.c2, 0.0);
  EXPECT_EQ(r.fl2st_residual, 0.0);
  EXPECT_EQ(r.schur_gap, 0.0);
}

TEST(Conclusion, Umbilical) {
  const double a = 0.8, c = -0.3;
  const ShapeFamily f = family(c, {a * Matrix::Identity(3, 3)});
  const FlatReport r = constant_curvature_conclusion(f, flat_identities(simultaneous_diagonalize(f)));
  EXPECT_NEAR(*r.kappa, c + a * a, 1e-12);
  EXPECT_LE(*r.conclusion_residual, 1e-10);
}

TEST(Conclusion, ZeroFamily) {
  const ShapeFamily f = family(0.7, {Matrix::Zero(3, 3)});
  const FlatReport r = constant_curvature_conclusion(f, flat_identities(simultaneous_diagonalize(f)));
  EXPECT_NEAR(*r.kappa, 0.7, 1e-15);
  EXPECT_NEAR(*r.conclusion_residual, 0.0, 1e-15);
}

TEST(Conclusion, RotatedUmbilicalFamily) {
  const ShapeFamily base = generate({GeneratorKind::Umbilical, 5, 3, 12, {}, 0.25});
  const ShapeFamily f = change_basis(normal_frame_rotation(base, random_orthogonal(3, 1)), random_orthogonal(5, 2));
  const FlatReport r = constant_curvature_conclusion(f, flat_identities(simultaneous_diagonalize(f)));
  EXPECT_LE(*r.conclusion_residual, 1e-9);
}

TEST(Conclusion, RequiresTwoStein) {
  const ShapeFamily f = family(1, {diag({1, -1, 1, -1})});
  EXPECT_THROW(constant_curvature_conclusion(f, flat_identities(simultaneous_diagonalize(f))), NotTwoStein);
}

TEST(FlatProperties, DiagonalCaseMatchesFullFormulaAndSchur) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const int p = 1 + static_cast<int>(seed % 3);
    const double k = (seed % 5 == 0 && n <= p + 1) ? -0.4 : 0.1 * static_cast<double>(seed % 7);
    const Matrix l = constant_curvature_lambdas(n, p, k, seed);
    const ShapeFamily f = commuting_family(0.5, l, random_orthogonal(n, seed + 99));
    const FlatReport r = flat_identities(simultaneous_diagonalize(f));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(r.fl2stii_values(i), r.fl2st_values(i, i), 1e-12 * r.scale * r.scale);
    ASSERT_TRUE(r.two_stein(1e-9)) << "seed " << seed;
    EXPECT_LE(r.schur_gap, 10 * 1e-9 * r.scale * r.scale);
    const FlatReport done = constant_curvature_conclusion(f, r);
    EXPECT_LE(*done.conclusion_residual, 100 * 1e-9 * r.scale);
    EXPECT_NEAR(*done.kappa, 0.5 + k, 1e-9 * r.scale);
  }
}

TEST(FlatProperties, ResidualsInvariantUnderReorderingAndRotation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ShapeFamily f = generate({GeneratorKind::Commuting, 5, 2, seed, {}, 1.0});
    const FlatReport a = flat_identities(simultaneous_diagonalize(f));
    const ShapeFamily g = normal_frame_rotation(f, random_orthogonal(2, seed + 7));
    const FlatReport b = flat_identities(simultaneous_diagonalize(g, kDefaultTol, seed));
    FlatDiagonalization d = simultaneous_diagonalize(f);
    d.lambdas = d.lambdas.colwise().reverse().eval();
    const FlatReport c = flat_identities(d);
    for (const FlatReport* r : {&b, &c}) {
      EXPECT_NEAR(r->flein_residual, a.flein_residual, 1e-9 * a.scale * a.scale);
      EXPECT_NEAR(r->fl2st_residual, a.fl2st_residual, 1e-9 * a.scale * a.scale);
      EXPECT_NEAR(r->fl2stii_residual, a.fl2stii_residual, 1e-9 * a.scale * a.scale);
    }
  }
}

}  // namespace
}  // namespace steinkit
