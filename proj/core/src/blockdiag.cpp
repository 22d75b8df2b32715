#include "steinkit/blockdiag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "steinkit/jacobi.hpp"

namespace steinkit {

namespace {

double pencil_defect(const Matrix& q1, const Matrix& q2, double c3) {
  const auto n = q1.rows();
  return (q1 * q1 + q2 * q2 - c3 * Matrix::Identity(n, n)).norm();
}

// A block together with the basis columns that realize it.
struct Piece {
  Block block;
  Matrix cols;
};

class Decomposer {
 public:
  Decomposer(const PencilPair& pencil, double tol)
      : q1_(pencil.q1().matrix()), q2_(pencil.q2().matrix()), c3_(pencil.c3()) {
    scale_ = std::max({1.0, q1_.norm(), q2_.norm()});
    r1_ = tol * scale_;
    r2_ = tol * scale_ * scale_;
    tol_ = tol;
  }

  std::vector<Piece> run() {
    const SymEigen eig = sym_eigen(q1_);
    std::vector<double> values(eig.values.data(), eig.values.data() + eig.values.size());
    const auto clusters = cluster_sorted(values, r1_);

    std::vector<int> positive;
    std::vector<int> negative;
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
      const double m = clusters[static_cast<std::size_t>(c)].mean;
      const Matrix cols = eig.vectors.middleCols(clusters[static_cast<std::size_t>(c)].begin,
                                                 clusters[static_cast<std::size_t>(c)].size);
      if (std::abs(m) <= r1_) {
        diagonalize_q2_on(cols);
      } else if (m > 0) {
        positive.push_back(c);
      } else {
        negative.push_back(c);
      }
    }

    // Pair +alpha with -alpha; clusters whose partner is absent keep q2 invariant.
    std::vector<bool> negative_used(negative.size(), false);
    for (int pc : positive) {
      const double m = clusters[static_cast<std::size_t>(pc)].mean;
      int best = -1;
      double best_gap = 2.0 * r1_;
      for (std::size_t k = 0; k < negative.size(); ++k) {
        if (negative_used[k]) continue;
        const double gap = std::abs(m + clusters[static_cast<std::size_t>(negative[k])].mean);
        if (gap <= best_gap) {
          best_gap = gap;
          best = static_cast<int>(k);
        }
      }
      const auto& cp = clusters[static_cast<std::size_t>(pc)];
      const Matrix plus = eig.vectors.middleCols(cp.begin, cp.size);
      if (best < 0) {
        diagonalize_q2_on(plus);
        continue;
      }
      negative_used[static_cast<std::size_t>(best)] = true;
      const auto& cn = clusters[static_cast<std::size_t>(negative[static_cast<std::size_t>(best)])];
      const Matrix minus = eig.vectors.middleCols(cn.begin, cn.size);
      split_pair(plus, minus, 0.5 * (cp.mean - cn.mean));
    }
    for (std::size_t k = 0; k < negative.size(); ++k) {
      if (negative_used[k]) continue;
      const auto& cn = clusters[static_cast<std::size_t>(negative[k])];
      diagonalize_q2_on(eig.vectors.middleCols(cn.begin, cn.size));
    }
    return std::move(pieces_);
  }

 private:
  void emit_diag(const Vector& w) {
    pieces_.push_back({DiagBlock{w.dot(q1_ * w), w.dot(q2_ * w)}, w});
  }

  void diagonalize_q2_on(const Matrix& w) {
    const SymEigen e = sym_eigen(w.transpose() * q2_ * w);
    const Matrix cols = w * e.vectors;
    for (Eigen::Index k = 0; k < cols.cols(); ++k) emit_diag(cols.col(k));
  }

  // u in E(+alpha), v in E(-alpha); demotes to 1x1 blocks when alpha*gamma vanishes.
  void emit_pair(const Vector& u, const Vector& v) {
    const double alpha = 0.5 * (u.dot(q1_ * u) - v.dot(q1_ * v));
    const double beta = 0.5 * (u.dot(q2_ * u) - v.dot(q2_ * v));
    const double gamma = u.dot(q2_ * v);
    if (std::abs(alpha * gamma) > r2_) {
      Matrix cols(u.size(), 2);
      cols << u, v;
      pieces_.push_back({PairBlock{alpha, beta, gamma}, cols});
      return;
    }
    if (std::abs(gamma) <= std::abs(alpha)) {
      emit_diag(u);
      emit_diag(v);
      return;
    }
    Matrix w(u.size(), 2);
    w << u, v;
    diagonalize_q2_on(w);
  }

  void split_pair(const Matrix& plus, const Matrix& minus, double alpha) {
    const SymEigen e1 = sym_eigen(plus.transpose() * q2_ * plus);
    const SymEigen e2 = sym_eigen(minus.transpose() * q2_ * minus);
    const Matrix wp = plus * e1.vectors;
    const Matrix wm = minus * e2.vectors;
    const Matrix coupling = wp.transpose() * q2_ * wm;

    std::vector<double> b1(e1.values.data(), e1.values.data() + e1.values.size());
    std::vector<double> b2(e2.values.data(), e2.values.data() + e2.values.size());
    const auto c1 = cluster_sorted(b1, r1_);
    const auto c2 = cluster_sorted(b2, r1_);

    // D1 T + T D2 = 0: a beta-cluster of D1 couples only to the -beta cluster of D2.
    std::vector<bool> used2(c2.size(), false);
    for (const auto& k1 : c1) {
      int best = -1;
      double best_gap = 2.0 * r1_;
      for (std::size_t j = 0; j < c2.size(); ++j) {
        if (used2[j]) continue;
        const double gap = std::abs(k1.mean + c2[j].mean);
        if (gap <= best_gap) {
          best_gap = gap;
          best = static_cast<int>(j);
        }
      }
      const Matrix u_cols = wp.middleCols(k1.begin, k1.size);
      if (best < 0) {
        for (Eigen::Index k = 0; k < u_cols.cols(); ++k) emit_diag(u_cols.col(k));
        continue;
      }
      used2[static_cast<std::size_t>(best)] = true;
      const auto& k2 = c2[static_cast<std::size_t>(best)];
      const Matrix v_cols = wm.middleCols(k2.begin, k2.size);
      const double beta = 0.5 * (k1.mean - k2.mean);
      const double c4 = c3_ - alpha * alpha - beta * beta;

      if (std::abs(c4) <= r2_) {
        for (Eigen::Index k = 0; k < u_cols.cols(); ++k) emit_diag(u_cols.col(k));
        for (Eigen::Index k = 0; k < v_cols.cols(); ++k) emit_diag(v_cols.col(k));
        continue;
      }
      if (c4 < 0) {
        std::ostringstream os;
        os << "coupling block has negative square c4 = " << c4 << " (alpha = " << alpha
           << ", beta = " << beta << ", c3 = " << c3_ << ")";
        throw NotAPencil(os.str());
      }
      if (k1.size != k2.size) {
        std::ostringstream os;
        os << "coupled eigen-blocks for alpha = " << alpha << ", beta = " << beta
           << " have sizes " << k1.size << " and " << k2.size << " with c4 = " << c4;
        throw MultiplicityMismatch(os.str());
      }

      // N N^T = c4 I, so the SVD of N is its polar decomposition up to sqrt(c4).
      const Matrix n_block = coupling.block(k1.begin, k2.begin, k1.size, k2.size);
      Eigen::JacobiSVD<Matrix> svd(n_block, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Matrix u = u_cols * svd.matrixU();
      const Matrix v = v_cols * svd.matrixV();
      for (Eigen::Index k = 0; k < u.cols(); ++k) emit_pair(u.col(k), v.col(k));
    }
    for (std::size_t j = 0; j < c2.size(); ++j) {
      if (used2[j]) continue;
      const Matrix v_cols = wm.middleCols(c2[j].begin, c2[j].size);
      for (Eigen::Index k = 0; k < v_cols.cols(); ++k) emit_diag(v_cols.col(k));
    }
  }

  Matrix q1_;
  Matrix q2_;
  double c3_;
  double scale_ = 1.0;
  double r1_ = 0.0;
  double r2_ = 0.0;
  double tol_ = 0.0;
  std::vector<Piece> pieces_;
};

auto sort_key(const Block& b) {
  if (const auto* d = std::get_if<DiagBlock>(&b)) {
    return std::make_tuple(d->a * d->a, d->b * d->b, 0, d->a, d->b);
  }
  const auto& p = std::get<PairBlock>(b);
  return std::make_tuple(p.alpha * p.alpha, p.beta * p.beta, 1, p.alpha, p.beta);
}

}  // namespace

PencilPair::PencilPair(SymMatrix q1, SymMatrix q2, double c3, double tol)
    : q1_(std::move(q1)), q2_(std::move(q2)), c3_(c3) {
  if (q1_.n() != q2_.n()) throw DimensionMismatch("PencilPair: q1 and q2 differ in dimension");
  const double defect = pencil_defect(q1_.matrix(), q2_.matrix(), c3_);
  if (defect > tol * (1.0 + std::abs(c3_)) * q1_.n()) {
    std::ostringstream os;
    os << "q1^2 + q2^2 deviates from " << c3_ << " I by " << defect;
    throw NotAPencil(os.str());
  }
}

int BlockStructure::pair_count() const {
  return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const Block& b) {
    return std::holds_alternative<PairBlock>(b);
  }));
}

std::vector<PairBlock> BlockStructure::pairs() const {
  std::vector<PairBlock> out;
  for (const auto& b : blocks)
    if (const auto* p = std::get_if<PairBlock>(&b)) out.push_back(*p);
  return out;
}

std::vector<DiagBlock> BlockStructure::diags() const {
  std::vector<DiagBlock> out;
  for (const auto& b : blocks)
    if (const auto* d = std::get_if<DiagBlock>(&b)) out.push_back(*d);
  return out;
}

int BlockStructure::offset(std::size_t i) const {
  int off = 0;
  for (std::size_t k = 0; k < i && k < blocks.size(); ++k) off += block_size(blocks[k]);
  return off;
}

PencilPair verify_sum_of_squares(const SymMatrix& q1, const SymMatrix& q2, double tol) {
  if (q1.n() != q2.n()) throw DimensionMismatch("verify_sum_of_squares: dimension mismatch");
  const Matrix sum = q1.matrix() * q1.matrix() + q2.matrix() * q2.matrix();
  return PencilPair(q1, q2, sum.trace() / q1.n(), tol);
}

BlockStructure simultaneous_block_diagonalize(const PencilPair& pencil, double tol) {
  auto pieces = Decomposer(pencil, tol).run();
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return sort_key(a.block) < sort_key(b.block); });

  const int n = pencil.n();
  Matrix basis(n, n);
  std::vector<Block> blocks;
  blocks.reserve(pieces.size());
  Eigen::Index col = 0;
  for (auto& piece : pieces) {
    basis.middleCols(col, piece.cols.cols()) = piece.cols;
    col += piece.cols.cols();
    blocks.push_back(piece.block);
  }
  return BlockStructure{OrthogonalMatrix(basis), std::move(blocks), pencil.c3()};
}

std::pair<SymMatrix, SymMatrix> reconstruct(const BlockStructure& b) {
  const int n = b.basis.n();
  Matrix d1 = Matrix::Zero(n, n);
  Matrix d2 = Matrix::Zero(n, n);
  int at = 0;
  for (const auto& block : b.blocks) {
    if (const auto* d = std::get_if<DiagBlock>(&block)) {
      d1(at, at) = d->a;
      d2(at, at) = d->b;
      at += 1;
    } else {
      const auto& p = std::get<PairBlock>(block);
      d1(at, at) = p.alpha;
      d1(at + 1, at + 1) = -p.alpha;
      d2(at, at) = p.beta;
      d2(at + 1, at + 1) = -p.beta;
      d2(at, at + 1) = p.gamma;
      d2(at + 1, at) = p.gamma;
      at += 2;
    }
  }
  if (at != n) throw DimensionMismatch("reconstruct: block sizes do not sum to n");
  const Matrix& o = b.basis.matrix();
  return {SymMatrix(o * d1 * o.transpose()), SymMatrix(o * d2 * o.transpose())};
}

double reconstruction_error(const BlockStructure& b, const PencilPair& pencil) {
  const auto [r1, r2] = reconstruct(b);
  return std::max((r1.matrix() - pencil.q1().matrix()).norm(),
                  (r2.matrix() - pencil.q2().matrix()).norm());
}

TracelessParts traceless_parts(const ShapeFamily& f, double tol) {
  if (f.p() != 2) throw DimensionMismatch("traceless_parts: requires codimension p = 2");
  const auto ein = einstein_check(f);
  if (!ein.passes(tol, f.magnitude())) {
    std::ostringstream os;
    os << "family is not Einstein: residual " << ein.residual;
    throw NotEinstein(os.str());
  }
  const int n = f.n();
  const double h1 = f.op(0).trace();
  const double h2 = f.op(1).trace();
  const Matrix id = Matrix::Identity(n, n);
  SymMatrix q1(f.op(0).matrix() - 0.5 * h1 * id);
  SymMatrix q2(f.op(1).matrix() - 0.5 * h2 * id);
  // The pencil defect equals the Einstein residual, so reuse the Einstein gate.
  const double c3 = (q1.matrix() * q1.matrix() + q2.matrix() * q2.matrix()).trace() / n;
  const double pencil_tol = tol * std::max(1.0, f.magnitude() / ((1.0 + std::abs(c3)) * n));
  return {PencilPair(std::move(q1), std::move(q2), c3, pencil_tol), h1, h2, ein.c1};
}

}  // namespace steinkit
