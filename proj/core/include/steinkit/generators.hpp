#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steinkit/blockdiag.hpp"
#include "steinkit/linalg.hpp"

namespace steinkit {

enum class GeneratorKind { Umbilical, Commuting, Clifford, ScrambledPencil, RandomEinsteinP2 };

std::string_view to_string(GeneratorKind k);
/// Accepts the snake_case names ("umbilical", "scrambled_pencil", ...).
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

/// params by kind (empty means "draw from the seed"):
///   umbilical          a_1..a_p
///   commuting          n*p eigenvalues, row i = (l_i^1..l_i^p)
///   clifford           k; the family is diag(1 x k, -1 x k) with n = 2k, p = 1
///   scrambled_pencil   c3 (default 2); census drawn from the seed, p = 2
///   random_einstein_p2 none
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Umbilical;
  int n = 3;
  int p = 1;
  std::uint64_t seed = 0;
  std::vector<double> params;
  double c = 1.0;
};

ShapeFamily generate(const GeneratorSpec& spec);

/// Haar-distributed orthogonal n x n matrix.
OrthogonalMatrix random_orthogonal(int n, std::uint64_t seed);

/// Random block census of total size n with the given c3 > 0; repeats some
/// blocks to exercise multiplicities.
std::vector<Block> random_census(int n, double c3, std::uint64_t seed);

/// Block-diagonal pencil of `census` conjugated by random_orthogonal(n, seed).
PencilPair scrambled_pencil(const std::vector<Block>& census, double c3, std::uint64_t seed);

struct EinsteinP2Sample {
  ShapeFamily family;
  int iterations = 0;
  double einstein_residual = 0.0;
};

/// Random p = 2 Einstein family. Solves Q1^2 + Q2^2 = c3 I from a random
/// symmetric start (alternating projection, then Gauss-Newton polish) and
/// adds the trace parts. Throws ConvergenceFailure after 100 iterations.
EinsteinP2Sample random_einstein_p2(int n, std::uint64_t seed, double c = 1.0);

/// n x p principal curvatures whose rows have pairwise inner product k, so
/// the commuting family they define has constant curvature c + k. k < 0
/// requires n <= p + 1.
Matrix constant_curvature_lambdas(int n, int p, double k, std::uint64_t seed);

/// A commuting family built from `lambdas` in the columns of `basis`.
ShapeFamily commuting_family(double c, const Matrix& lambdas, const OrthogonalMatrix& basis);

}  // namespace steinkit
