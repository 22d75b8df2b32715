#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "steinkit/linalg.hpp"

namespace steinkit {

/// Symmetric pair with (q1)^2 + (q2)^2 = c3 I, verified on construction.
class PencilPair {
 public:
  PencilPair(SymMatrix q1, SymMatrix q2, double c3, double tol = kDefaultTol);

  [[nodiscard]] const SymMatrix& q1() const noexcept { return q1_; }
  [[nodiscard]] const SymMatrix& q2() const noexcept { return q2_; }
  [[nodiscard]] double c3() const noexcept { return c3_; }
  [[nodiscard]] int n() const noexcept { return q1_.n(); }

 private:
  SymMatrix q1_;
  SymMatrix q2_;
  double c3_;
};

/// 1x1 block: q1 = a, q2 = b.
struct DiagBlock {
  double a = 0.0;
  double b = 0.0;
};

/// 2x2 block: q1 = diag(alpha, -alpha), q2 = [[beta, gamma], [gamma, -beta]].
struct PairBlock {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

using Block = std::variant<DiagBlock, PairBlock>;

inline int block_size(const Block& b) { return std::holds_alternative<PairBlock>(b) ? 2 : 1; }

/// Orthonormal basis (columns, in block order) plus the block census.
struct BlockStructure {
  OrthogonalMatrix basis;
  std::vector<Block> blocks;
  double c3 = 0.0;

  [[nodiscard]] int pair_count() const;
  [[nodiscard]] std::vector<PairBlock> pairs() const;
  [[nodiscard]] std::vector<DiagBlock> diags() const;
  /// Column offset of block `i` inside `basis`.
  [[nodiscard]] int offset(std::size_t i) const;
};

/// c3 := Tr(q1^2 + q2^2) / n; throws NotAPencil if
/// ||q1^2 + q2^2 - c3 I||_F > tol (1 + |c3|) n.
PencilPair verify_sum_of_squares(const SymMatrix& q1, const SymMatrix& q2, double tol = kDefaultTol);

/// Constructive simultaneous block-diagonalization of a pencil pair into 1x1
/// blocks and 2x2 blocks of the form above with alpha^2 + beta^2 + gamma^2 = c3
/// and alpha * gamma != 0. Blocks are sorted by (a^2 or alpha^2, b^2 or beta^2, kind).
///
/// Throws MultiplicityMismatch when matched +alpha/-alpha eigen-blocks with a
/// nonzero coupling have different sizes, and NotAPencil when the coupling has
/// a negative square.
BlockStructure simultaneous_block_diagonalize(const PencilPair& pencil, double tol = kDefaultTol);

/// Block-diagonal matrices of the census conjugated back by the basis.
std::pair<SymMatrix, SymMatrix> reconstruct(const BlockStructure& b);

/// max of ||reconstruct(b) - (q1, q2)||_F over both components.
double reconstruction_error(const BlockStructure& b, const PencilPair& pencil);

struct TracelessParts {
  PencilPair pencil;
  double H1 = 0.0;
  double H2 = 0.0;
  double c1 = 0.0;  ///< Einstein constant of the family
};

/// Q^s = A^s - H^s / 2 I for a p = 2 family. Throws NotEinstein if the family
/// fails einstein_check at tol * magnitude.
TracelessParts traceless_parts(const ShapeFamily& f, double tol = kDefaultTol);

}  // namespace steinkit
