#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steinkit/blockdiag.hpp"
#include "steinkit/flat.hpp"
#include "steinkit/jacobi.hpp"
#include "steinkit/linalg.hpp"
#include "steinkit/quartic.hpp"

namespace steinkit {

enum class Branch { FlatNormal, Codim2, OutOfScope };

enum class Status {
  NotEinstein,
  NotTwoStein,
  ConstantCurvature,
  ViolationCandidate,
  /// 2-stein outside both hypotheses with sampled sectional curvatures that differ.
  NonConstantCurvature,
};

/// Which branch of the codimension-2 case analysis applies to a census.
enum class ProofCase { None, H1Nonzero, TwoPairs, OnePairBetaNonzero, OnePairBetaZero };

std::string_view to_string(Branch b);
std::string_view to_string(Status s);
std::string_view to_string(ProofCase c);

/// Quartic q(X) = Tr((R'_X)^2) restricted to X supported on `indices`
/// (0-based), as monomial exponent tuples -> coefficients.
struct RestrictedQuartic {
  std::vector<int> indices;
  std::map<std::vector<int>, double> coeffs;

  /// Coefficient of prod x_{indices[k]}^{exponents[k]}; zero if absent.
  [[nodiscard]] double coefficient(const std::vector<int>& exponents) const;
  /// Evaluates at the restricted coordinates (length = indices.size()).
  [[nodiscard]] double evaluate(const Vector& restricted) const;
};

RestrictedQuartic restricted_quartic(const QuarticForm& q, std::span<const int> indices);
RestrictedQuartic restricted_quartic(const ShapeFamily& f, std::span<const int> indices);

/// One relation from the codimension-2 argument: a combination of quartic
/// coefficients (`measured`, from the polarized tensor) against its closed form
/// in the block parameters and traces (`predicted`). The closed form is
/// multiplier * relation plus terms that vanish once the earlier relations of
/// the same case hold.
struct IdentityCheck {
  std::string name;
  std::string combination;
  double measured = 0.0;
  double predicted = 0.0;
  double gap = 0.0;
  double multiplier = 0.0;
  double relation_residual = 0.0;
};

struct IdentitySuite {
  ProofCase sub_case = ProofCase::None;
  std::vector<IdentityCheck> checks;
  /// First relation of the chain violated beyond tolerance, or the case's
  /// terminal contradiction when every relation holds.
  std::string eliminated_by;
};

/// Rotates the normal frame so that H^2 = 0; if then |H^1| <= tol ||A^1||,
/// rotates again so that T^{12} = 0.
ShapeFamily normalize_frame(const ShapeFamily& f, double tol = kDefaultTol);

/// Evaluates the relations of the applicable sub-case on a normalized p = 2
/// family `f` whose traceless pencil decomposes as `b`. Throws
/// InapplicableCase when the census matches no sub-case.
IdentitySuite proof_identity_suite(const ShapeFamily& f, const BlockStructure& b,
                                   double tol = kDefaultTol);

struct Diagnostics {
  double c1 = 0.0;
  double c2 = 0.0;
  double einstein_residual = 0.0;
  std::optional<double> quartic_residual;
  std::optional<double> schur_gap;
  std::optional<FlatReport> flat;
  std::optional<BlockStructure> census;
  int strong_pairs = 0;
  std::optional<IdentitySuite> identities;
  std::optional<SectionalSweep> sectional;
  bool non_constant_curvature = false;
  std::vector<std::string> notes;
};

struct TheoremVerdict {
  Branch branch = Branch::OutOfScope;
  Status status = Status::NotEinstein;
  std::optional<double> kappa;
  Diagnostics diagnostics;
};

struct AnalyzeOptions {
  double tol = kDefaultTol;
  int samples = 500;
  std::uint64_t seed = 0;
};

/// Full pointwise pipeline: Einstein test, 2-stein test, then the flat-normal
/// or codimension-2 route; other families are reported out of scope together
/// with their sectional-curvature spread.
TheoremVerdict analyze(const ShapeFamily& f, const AnalyzeOptions& options = {});

}  // namespace steinkit
