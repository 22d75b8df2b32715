#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "steinkit/codim2.hpp"
#include "steinkit/generators.hpp"
#include "support/fixtures.hpp"
#include "support/poly.hpp"

namespace steinkit {
namespace {

using testing::diag;
using testing::einstein_from_census;
using testing::family;
using testing::mat;

BlockStructure identity_census(const std::vector<Block>& census, double c3) {
  int n = 0;
  for (const auto& b : census) n += block_size(b);
  return BlockStructure{OrthogonalMatrix::identity(n), census, c3};
}

// Every check's measured value must match both its closed form and the
// coefficient read from an independent polynomial expansion.
void expect_suite_consistent(const ShapeFamily& f, const IdentitySuite& s, int lead) {
  const auto poly = testing::expand_two_stein(f, testing::all_indices(lead));
  const auto rq = restricted_quartic(f, testing::all_indices(lead));
  for (const auto& [e, coeff] : poly.terms) EXPECT_NEAR(rq.coefficient(e), coeff, 1e-10);
  for (const auto& chk : s.checks) {
    EXPECT_LE(chk.gap, 1e-10) << chk.name;
    EXPECT_NEAR(chk.measured, chk.predicted, 1e-10) << chk.name;
  }
}

// ---- restricted quartic -------------------------------------------------------

TEST(RestrictedQuartic, ZeroFamily) {
  const std::vector<int> idx{0, 1};
  const auto rq = restricted_quartic(family(0, {Matrix::Zero(3, 3)}), idx);
  for (const auto& [e, c] : rq.coeffs) EXPECT_EQ(c, 0.0);
}

TEST(RestrictedQuartic, UmbilicalSquareOfNorm) {
  const double a = 1.1;
  const int n = 5;
  const std::vector<int> idx{0, 1};
  const auto rq = restricted_quartic(family(0, {a * Matrix::Identity(n, n)}), idx);
  const double k = (n - 1) * std::pow(a, 4);
  EXPECT_NEAR(rq.coefficient({4, 0}), k, 1e-12);
  EXPECT_NEAR(rq.coefficient({2, 2}), 2 * k, 1e-12);
  EXPECT_NEAR(rq.coefficient({0, 4}), k, 1e-12);
  EXPECT_NEAR(rq.coefficient({3, 1}), 0.0, 1e-12);
  EXPECT_NEAR(rq.coefficient({1, 3}), 0.0, 1e-12);
  EXPECT_EQ(rq.coeffs.size(), 5u);
}

TEST(RestrictedQuartic, AgreesWithDirectEvaluation) {
  std::mt19937_64 rng(4);
  const ShapeFamily f = random_einstein_p2(6, 2).family;
  const std::vector<int> idx{1, 3, 4};
  const auto rq = restricted_quartic(f, idx);
  for (int t = 0; t < 50; ++t) {
    const Vector y = testing::random_unit(3, rng);
    Vector x = Vector::Zero(6);
    for (int k = 0; k < 3; ++k) x(idx[static_cast<std::size_t>(k)]) = y(k);
    const double direct = two_stein_value(f, x);
    EXPECT_NEAR(rq.evaluate(y), direct, 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST(RestrictedQuartic, RejectsBadIndices) {
  const ShapeFamily f = family(0, {Matrix::Identity(3, 3)});
  const std::vector<int> dup{0, 0}, out{0, 3};
  EXPECT_THROW(restricted_quartic(f, dup), DimensionMismatch);
  EXPECT_THROW(restricted_quartic(f, out), DimensionMismatch);
}

// ---- frame normalization --------------------------------------------------------

TEST(NormalizeFrame, AlreadyNormalized) {
  const ShapeFamily f = family(0, {diag({3, 1, 1}), mat({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}})});
  const ShapeFamily g = normalize_frame(f);
  EXPECT_LT((g.op(0).matrix() - f.op(0).matrix()).norm(), 1e-15);
  EXPECT_LT((g.op(1).matrix() - f.op(1).matrix()).norm(), 1e-15);
}

TEST(NormalizeFrame, UmbilicalPairCollapses) {
  const ShapeFamily g = normalize_frame(family(0, {Matrix::Identity(3, 3), 2 * Matrix::Identity(3, 3)}));
  EXPECT_LT(g.op(1).norm(), 1e-14);
  EXPECT_NEAR(g.op(0).trace(), std::hypot(3.0, 6.0), 1e-13);
}

TEST(NormalizeFrame, TracelessPairDiagonalizesGram) {
  const ShapeFamily f = family(0, {diag({1, -1, 0}), mat({{0.5, 1, 0}, {1, 0, 0}, {0, 0, -0.5}})});
  const Traces before = traces(f);
  ASSERT_GT(std::abs(before.T(0, 1)), 0.1);
  const Traces after = traces(normalize_frame(f));
  EXPECT_LE(std::abs(after.T(0, 1)), 1e-10);
  EXPECT_NEAR(after.T(0, 0) + after.T(1, 1), before.T(0, 0) + before.T(1, 1), 1e-12);
  // Oracle: the diagonal of the rotated Gram matrix is its eigenvalue set.
  const SymEigen e = sym_eigen(before.T);
  const double lo = std::min(after.T(0, 0), after.T(1, 1)), hi = std::max(after.T(0, 0), after.T(1, 1));
  EXPECT_NEAR(lo, e.values(0), 1e-12);
  EXPECT_NEAR(hi, e.values(1), 1e-12);
}

TEST(NormalizeFrame, PreservesResiduals) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ShapeFamily f = random_einstein_p2(5, seed).family;
    const auto a = two_stein_check(f), b = two_stein_check(normalize_frame(f));
    EXPECT_NEAR(a.einstein_residual, b.einstein_residual, 1e-9);
    EXPECT_NEAR(a.quartic_residual, b.quartic_residual, 1e-9 * std::max(1.0, a.quartic_residual));
    EXPECT_LE(std::abs(traces(normalize_frame(f)).H(1)), 1e-12);
  }
}

TEST(NormalizeFrame, RequiresTwoOperators) {
  EXPECT_THROW(normalize_frame(family(0, {Matrix::Identity(3, 3)})), DimensionMismatch);
}

// ---- identity suite on exact rational blocks ----------------------------------------

TEST(IdentitySuite, MeanCurvatureNonzero) {
  // Pair(2/3, 1/3, 2/3) with Diag(3/5, +-4/5): c3 = 1, H2 = 0, H1 = -6/5.
  const std::vector<Block> census{PairBlock{2.0 / 3, 1.0 / 3, 2.0 / 3}, DiagBlock{0.6, 0.8}, DiagBlock{0.6, -0.8}};
  const ShapeFamily f = einstein_from_census(census);
  ASSERT_NEAR(traces(f).H(0), -1.2, 1e-14);
  const IdentitySuite s = proof_identity_suite(f, identity_census(census, 1.0));
  EXPECT_EQ(s.sub_case, ProofCase::H1Nonzero);
  ASSERT_EQ(s.checks.size(), 4u);
  expect_suite_consistent(f, s, 2);
  // Here T12 = 2 alpha beta holds exactly; T22 carries the 1x1 blocks, so the
  // chain stops at the second relation.
  EXPECT_NEAR(s.checks[0].relation_residual, 0.0, 1e-14);
  EXPECT_GT(std::abs(s.checks[1].relation_residual), 0.1);
  EXPECT_EQ(s.eliminated_by, s.checks[1].name);
}

TEST(IdentitySuite, MeanCurvatureNonzeroLargerDimensions) {
  for (int extra = 0; extra <= 2; ++extra) {
    std::vector<Block> census{PairBlock{0.6, 0.0, 0.8}, DiagBlock{0.8, 0.6}, DiagBlock{0.8, -0.6}};
    for (int k = 0; k < extra; ++k) census.push_back(DiagBlock{k % 2 ? -1.0 : 1.0, 0.0});
    const ShapeFamily f = einstein_from_census(census);
    const IdentitySuite s = proof_identity_suite(f, identity_census(census, 1.0));
    EXPECT_EQ(s.sub_case, ProofCase::H1Nonzero);
    expect_suite_consistent(f, s, 2);
  }
}

TEST(IdentitySuite, TwoPairs) {
  for (int n : {4, 6}) {
    std::vector<Block> census{PairBlock{2.0 / 3, 1.0 / 3, 2.0 / 3}, PairBlock{2.0 / 3, -2.0 / 3, 1.0 / 3}};
    if (n == 6) {
      census.push_back(DiagBlock{0.6, 0.8});
      census.push_back(DiagBlock{-0.6, -0.8});
    }
    const ShapeFamily f = einstein_from_census(census);
    ASSERT_LT(traces(f).H.norm(), 1e-14);
    const IdentitySuite s = proof_identity_suite(f, identity_census(census, 1.0));
    EXPECT_EQ(s.sub_case, ProofCase::TwoPairs);
    ASSERT_EQ(s.checks.size(), 1u);
    EXPECT_NEAR(s.checks[0].multiplier, 8 * (2.0 / 3) * (1.0 / 3), 1e-15);
    expect_suite_consistent(f, s, 4);
  }
}

TEST(IdentitySuite, OnePairBetaNonzero) {
  for (int n : {4, 5, 6}) {
    const double r3 = std::sqrt(3.0) / 2;
    std::vector<Block> census{PairBlock{2.0 / 3, 1.0 / 3, 2.0 / 3}};
    if (n == 5) {
      census.insert(census.end(), {DiagBlock{1.0, 0.0}, DiagBlock{-0.5, r3}, DiagBlock{-0.5, -r3}});
    } else {
      census.insert(census.end(), {DiagBlock{0.6, 0.8}, DiagBlock{-0.6, -0.8}});
      if (n == 6) census.insert(census.end(), {DiagBlock{0.0, 1.0}, DiagBlock{0.0, -1.0}});
    }
    const ShapeFamily f = einstein_from_census(census);
    ASSERT_LT(traces(f).H.norm(), 1e-14);
    const IdentitySuite s = proof_identity_suite(f, identity_census(census, 1.0));
    EXPECT_EQ(s.sub_case, ProofCase::OnePairBetaNonzero);
    ASSERT_EQ(s.checks.size(), 3u);
    expect_suite_consistent(f, s, 3);
    // The x1^3 x2 coefficient is -gamma * 4 beta (2a^2 + 2b^2 + 2g^2 - T22) + 4 alpha gamma T12.
    EXPECT_NEAR(s.checks[0].multiplier, -2.0 / 3, 1e-15);
  }
}

TEST(IdentitySuite, OnePairBetaZero) {
  for (int n : {4, 6}) {
    std::vector<Block> census{PairBlock{0.6, 0.0, 0.8}, DiagBlock{0.8, 0.6}, DiagBlock{-0.8, -0.6}};
    if (n == 6) {
      census.push_back(DiagBlock{0.0, 1.0});
      census.push_back(DiagBlock{0.0, -1.0});
    }
    const ShapeFamily f = einstein_from_census(census);
    const IdentitySuite s = proof_identity_suite(f, identity_census(census, 1.0));
    EXPECT_EQ(s.sub_case, ProofCase::OnePairBetaZero);
    ASSERT_EQ(s.checks.size(), 3u);
    EXPECT_NEAR(s.checks[0].multiplier, 4 * 0.8, 1e-15);
    expect_suite_consistent(f, s, 3);
  }
}

TEST(IdentitySuite, InapplicableWithoutPairs) {
  const std::vector<Block> census{DiagBlock{1, 0}, DiagBlock{0, 1}, DiagBlock{-1, 0}};
  const ShapeFamily f = einstein_from_census(census);
  EXPECT_THROW(proof_identity_suite(f, identity_census(census, 1.0)), InapplicableCase);
}

TEST(IdentitySuite, WorksInScrambledBasis) {
  const std::vector<Block> census{PairBlock{2.0 / 3, 1.0 / 3, 2.0 / 3}, DiagBlock{0.6, 0.8}, DiagBlock{-0.6, -0.8}};
  const ShapeFamily f = change_basis(einstein_from_census(census), random_orthogonal(4, 3));
  const TracelessParts tp = traceless_parts(f);
  const BlockStructure b = simultaneous_block_diagonalize(tp.pencil);
  ASSERT_EQ(b.pair_count(), 1);
  const IdentitySuite s = proof_identity_suite(f, b);
  EXPECT_EQ(s.sub_case, ProofCase::OnePairBetaNonzero);
  for (const auto& chk : s.checks) EXPECT_LE(chk.gap, 1e-10) << chk.name;
}

// ---- analyze ---------------------------------------------------------------------------

TEST(Analyze, UmbilicalAnyCodimension) {
  for (int p = 1; p <= 4; ++p) {
    const ShapeFamily f = generate({GeneratorKind::Umbilical, 4, p, static_cast<std::uint64_t>(p), {}, 0.5});
    double sum = 0;
    for (const auto& a : f.operators()) sum += std::pow(a(0, 0), 2);
    const TheoremVerdict v = analyze(f);
    EXPECT_EQ(v.branch, Branch::FlatNormal);
    EXPECT_EQ(v.status, Status::ConstantCurvature);
    ASSERT_TRUE(v.kappa);
    EXPECT_NEAR(*v.kappa, 0.5 + sum, 1e-10);
  }
}

TEST(Analyze, CliffordIsNotTwoStein) {
  const TheoremVerdict v = analyze(generate({GeneratorKind::Clifford, 4, 1, 0, {2}, 1.0}));
  EXPECT_EQ(v.status, Status::NotTwoStein);
  EXPECT_FALSE(v.kappa);
}

TEST(Analyze, NonEinsteinFamily) {
  EXPECT_EQ(analyze(family(0, {diag({1, 2, 4})})).status, Status::NotEinstein);
}

TEST(Analyze, EinsteinPairWithBlocksIsNotTwoStein) {
  const std::vector<Block> census{PairBlock{2.0 / 3, 1.0 / 3, 2.0 / 3}, DiagBlock{0.6, 0.8}, DiagBlock{-0.6, -0.8}};
  const TheoremVerdict v = analyze(change_basis(einstein_from_census(census), random_orthogonal(4, 9)));
  EXPECT_EQ(v.branch, Branch::Codim2);
  EXPECT_EQ(v.status, Status::NotTwoStein);
}

TEST(Analyze, OutOfScopeReportsSectionalSpread) {
  // p = 3, non-commuting and not 2-stein: out of scope is decided first.
  const ShapeFamily f = family(1, {diag({1, -1, 0}), mat({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}), diag({0, 0, 1})});
  const TheoremVerdict v = analyze(f);
  EXPECT_EQ(v.branch, Branch::OutOfScope);
}

TEST(Analyze, SmallDimensionWarns) {
  const TheoremVerdict v = analyze(family(0, {Matrix::Identity(2, 2)}));
  EXPECT_FALSE(v.diagnostics.notes.empty());
}

TEST(AnalyzeProperties, InvariantUnderFrameChangesAndCurvatureShift) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const int p = 1 + static_cast<int>(seed % 3);
    const double k = 0.2 * static_cast<double>(seed % 5);
    const ShapeFamily f = commuting_family(0.3, constant_curvature_lambdas(n, p, k, seed), random_orthogonal(n, seed));
    const TheoremVerdict a = analyze(f);
    ASSERT_EQ(a.status, Status::ConstantCurvature) << "seed " << seed;
    const TheoremVerdict b = analyze(change_basis(f, random_orthogonal(n, seed + 50)));
    const TheoremVerdict c = analyze(normal_frame_rotation(f, random_orthogonal(p, seed + 60)));
    const TheoremVerdict d = analyze(f.with_c(f.c() - 1.25));
    for (const TheoremVerdict* v : {&b, &c, &d}) {
      EXPECT_EQ(v->status, a.status);
      EXPECT_EQ(v->branch, a.branch);
    }
    EXPECT_NEAR(*b.kappa, *a.kappa, 1e-9);
    EXPECT_NEAR(*c.kappa, *a.kappa, 1e-9);
    EXPECT_NEAR(*d.kappa, *a.kappa - 1.25, 1e-9);

    // Non-2-stein families keep their verdict too.
    const ShapeFamily g = generate({GeneratorKind::Commuting, n, p, seed, {}, 0.3});
    EXPECT_EQ(analyze(g).status, analyze(change_basis(g, random_orthogonal(n, seed + 70))).status);
  }
}

TEST(AnalyzeProperties, CodimensionTwoInstancesAreConstantCurvature) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const double k = seed % 3 == 0 && n == 3 ? -0.5 : 0.15 * static_cast<double>(seed % 6);
    ShapeFamily f = commuting_family(0.0, constant_curvature_lambdas(n, 2, k, seed), random_orthogonal(n, seed));
    f = normal_frame_rotation(f, random_orthogonal(2, seed + 1)).with_c(-1.0 + 0.1 * static_cast<double>(seed));
    const TheoremVerdict v = analyze(f);
    EXPECT_EQ(v.status, Status::ConstantCurvature) << "seed " << seed;
    ASSERT_TRUE(v.kappa);
    EXPECT_NEAR(*v.kappa, f.c() + k, 1e-9 * f.magnitude());
    EXPECT_EQ(v.diagnostics.strong_pairs, 0);
  }
}

TEST(AnalyzeProperties, PencilConstantMatchesTraces) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ShapeFamily f = random_einstein_p2(3 + static_cast<int>(seed % 5), seed + 100).family;
    const TracelessParts tp = traceless_parts(f);
    EXPECT_NEAR(tp.pencil.c3(), 0.25 * (tp.H1 * tp.H1 + tp.H2 * tp.H2) - tp.c1, 1e-10 * std::max(1.0, tp.pencil.c3()));
  }
}

}  // namespace
}  // namespace steinkit
