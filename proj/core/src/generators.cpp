#include "steinkit/generators.hpp"

#include <cmath>
#include <random>

namespace steinkit {

std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Umbilical: return "umbilical";
    case GeneratorKind::Commuting: return "commuting";
    case GeneratorKind::Clifford: return "clifford";
    case GeneratorKind::ScrambledPencil: return "scrambled_pencil";
    case GeneratorKind::RandomEinsteinP2: return "random_einstein_p2";
  }
  return "?";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (auto k : {GeneratorKind::Umbilical, GeneratorKind::Commuting, GeneratorKind::Clifford,
                 GeneratorKind::ScrambledPencil, GeneratorKind::RandomEinsteinP2}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  return m;
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

OrthogonalMatrix random_orthogonal(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("random_orthogonal: n must be positive");
  std::mt19937_64 rng(seed);
  const Matrix g = gaussian_matrix(n, n, rng);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return OrthogonalMatrix(q);
}

std::vector<Block> random_census(int n, double c3, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("random_census: n must be positive");
  if (!(c3 > 0)) throw NotAPencil("random_census: c3 must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const double r = std::sqrt(c3);

  std::vector<Block> out;
  int left = n;
  while (left > 0) {
    const double u = unit(rng);
    if (!out.empty() && u < 0.25) {
      const Block prev = out[static_cast<std::size_t>(unit(rng) * static_cast<double>(out.size()))];
      if (block_size(prev) <= left) {
        out.push_back(prev);
        left -= block_size(prev);
        continue;
      }
    }
    if (left >= 2 && u < 0.6) {
      Eigen::Vector3d v;
      do {
        v = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
      } while (std::abs(v(0)) < 0.2 || std::abs(v(2)) < 0.2);
      out.emplace_back(PairBlock{r * v(0), r * v(1), r * v(2)});
      left -= 2;
    } else {
      const double t = 2.0 * M_PI * unit(rng);
      out.emplace_back(DiagBlock{r * std::cos(t), r * std::sin(t)});
      left -= 1;
    }
  }
  return out;
}

PencilPair scrambled_pencil(const std::vector<Block>& census, double c3, std::uint64_t seed) {
  int n = 0;
  for (const auto& b : census) n += block_size(b);
  Matrix q1 = Matrix::Zero(n, n);
  Matrix q2 = Matrix::Zero(n, n);
  int at = 0;
  for (const auto& b : census) {
    if (const auto* d = std::get_if<DiagBlock>(&b)) {
      q1(at, at) = d->a;
      q2(at, at) = d->b;
      at += 1;
    } else {
      const auto& pb = std::get<PairBlock>(b);
      q1(at, at) = pb.alpha;
      q1(at + 1, at + 1) = -pb.alpha;
      q2(at, at) = pb.beta;
      q2(at + 1, at + 1) = -pb.beta;
      q2(at, at + 1) = q2(at + 1, at) = pb.gamma;
      at += 2;
    }
  }
  const Matrix o = random_orthogonal(n, seed).matrix();
  return PencilPair(SymMatrix(o * q1 * o.transpose()), SymMatrix(o * q2 * o.transpose()), c3);
}

namespace {

// Minimum-norm Gauss-Newton step for Q1^2 + Q2^2 = c3 I over symmetric pairs.
// Unknowns and equations are the upper triangles.
void gauss_newton_step(Matrix& q1, Matrix& q2, double c3) {
  const int n = static_cast<int>(q1.rows());
  const int m = n * (n + 1) / 2;
  const Matrix residual = q1 * q1 + q2 * q2 - c3 * Matrix::Identity(n, n);
  Matrix jac(m, 2 * m);
  Vector rhs(m);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) rhs(row++) = -residual(i, j);
  int col = 0;
  for (const Matrix* q : {&q1, &q2}) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b, ++col) {
        Matrix e = Matrix::Zero(n, n);
        e(a, b) = 1.0;
        e(b, a) = 1.0;
        const Matrix d = *q * e + e * *q;
        row = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) jac(row++, col) = d(i, j);
      }
    }
  }
  const Vector step = jac.completeOrthogonalDecomposition().solve(rhs);
  col = 0;
  for (Matrix* q : {&q1, &q2}) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b, ++col) {
        (*q)(a, b) += step(col);
        if (a != b) (*q)(b, a) += step(col);
      }
    }
  }
}

}  // namespace

EinsteinP2Sample random_einstein_p2(int n, std::uint64_t seed, double c) {
  if (n < 3) throw DimensionMismatch("random_einstein_p2: needs n >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double c3 = 0.5 + unit(rng);
  Matrix q1 = symmetric_part(gaussian_matrix(n, n, rng)) / std::sqrt(n);
  Matrix q2 = symmetric_part(gaussian_matrix(n, n, rng)) / std::sqrt(n);
  const Matrix id = Matrix::Identity(n, n);
  auto residual_of = [&] { return (q1 * q1 + q2 * q2 - c3 * id).norm(); };

  constexpr int kProjectionSteps = 40;
  constexpr int kMaxIterations = 100;
  constexpr double kTarget = 1e-12;
  int it = 0;
  double residual = residual_of();
  Matrix stacked(2 * n, n);
  while (residual > kTarget) {
    if (++it > kMaxIterations) {
      throw ConvergenceFailure("random_einstein_p2: no convergence in " + std::to_string(kMaxIterations) +
                               " iterations (residual " + std::to_string(residual) + ")");
    }
    if (it <= kProjectionSteps) {
      // Alternating projection gets close cheaply but stalls near the solution set.
      stacked << q1, q2;
      const Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
      stacked = std::sqrt(c3) * svd.matrixU() * svd.matrixV().transpose();
      q1 = symmetric_part(stacked.topRows(n));
      q2 = symmetric_part(stacked.bottomRows(n));
    } else {
      gauss_newton_step(q1, q2, c3);
    }
    residual = residual_of();
  }

  // A = Q + (H / 2) I with H = Tr A forces H = -2 Tr Q / (n - 2).
  std::vector<SymMatrix> ops;
  for (const Matrix* q : {&q1, &q2}) {
    const double h = -2.0 * q->trace() / (n - 2);
    ops.emplace_back(*q + 0.5 * h * id);
  }
  EinsteinP2Sample out{ShapeFamily(c, std::move(ops)), it, 0.0};
  Matrix s = Matrix::Zero(n, n);
  for (const auto& a : out.family.operators()) s += a.trace() * a.matrix() - a.matrix() * a.matrix();
  out.einstein_residual = (s - (s.trace() / n) * id).norm();
  return out;
}

Matrix constant_curvature_lambdas(int n, int p, double k, std::uint64_t seed) {
  if (n < 2 || p < 1) throw DimensionMismatch("constant_curvature_lambdas: needs n >= 2, p >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution flip(0.5);
  Matrix l = Matrix::Zero(n, p);
  if (k >= 0) {
    for (int i = 0; i < n; ++i) {
      l(i, 0) = std::sqrt(k);
      if (i + 1 < p) l(i, i + 1) = (flip(rng) ? 1.0 : -1.0) * mag(rng);
    }
  } else {
    if (n > p + 1) throw DimensionMismatch("constant_curvature_lambdas: k < 0 needs n <= p + 1");
    // Regular simplex: Gram = -n k I + k 11^T, rank n - 1.
    const Matrix gram = -n * k * Matrix::Identity(n, n) + k * Matrix::Ones(n, n);
    const SymEigen e = sym_eigen(gram);
    for (int j = 1; j < n; ++j) l.col(j - 1) = e.vectors.col(j) * std::sqrt(std::max(0.0, e.values(j)));
  }
  return l * random_orthogonal(p, seed ^ 0x9e3779b97f4a7c15ULL).matrix();
}

ShapeFamily commuting_family(double c, const Matrix& lambdas, const OrthogonalMatrix& basis) {
  if (lambdas.rows() != basis.n()) throw DimensionMismatch("commuting_family: lambdas and basis disagree on n");
  std::vector<SymMatrix> ops;
  const Matrix& b = basis.matrix();
  for (Eigen::Index s = 0; s < lambdas.cols(); ++s) {
    ops.emplace_back(b * lambdas.col(s).asDiagonal() * b.transpose());
  }
  return ShapeFamily(c, std::move(ops));
}

ShapeFamily generate(const GeneratorSpec& spec) {
  if (spec.n < 2 || spec.p < 1) throw DimensionMismatch("generate: needs n >= 2 and p >= 1");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  const int n = spec.n;
  const int p = spec.p;

  switch (spec.kind) {
    case GeneratorKind::Umbilical: {
      std::vector<double> a = spec.params;
      if (a.empty())
        for (int s = 0; s < p; ++s) a.push_back(coeff(rng));
      if (static_cast<int>(a.size()) != p) throw DimensionMismatch("umbilical: need p coefficients");
      std::vector<SymMatrix> ops;
      for (double v : a) ops.push_back(SymMatrix::identity(n, v));
      return ShapeFamily(spec.c, std::move(ops));
    }
    case GeneratorKind::Commuting: {
      Matrix l(n, p);
      if (spec.params.empty()) {
        for (int i = 0; i < n; ++i)
          for (int s = 0; s < p; ++s) l(i, s) = coeff(rng);
      } else {
        if (static_cast<int>(spec.params.size()) != n * p)
          throw DimensionMismatch("commuting: need n*p eigenvalues");
        for (int i = 0; i < n; ++i)
          for (int s = 0; s < p; ++s) l(i, s) = spec.params[static_cast<std::size_t>(i * p + s)];
      }
      return commuting_family(spec.c, l, random_orthogonal(n, spec.seed));
    }
    case GeneratorKind::Clifford: {
      const int k = spec.params.empty() ? n / 2 : static_cast<int>(spec.params[0]);
      if (k < 1) throw DimensionMismatch("clifford: k must be positive");
      Vector d(2 * k);
      d.head(k).setOnes();
      d.tail(k).setConstant(-1.0);
      return ShapeFamily(spec.c, {SymMatrix::diagonal(d)});
    }
    case GeneratorKind::ScrambledPencil: {
      const double c3 = spec.params.empty() ? 2.0 : spec.params[0];
      const PencilPair pencil = scrambled_pencil(random_census(n, c3, spec.seed), c3, spec.seed + 1);
      return ShapeFamily(spec.c, {pencil.q1(), pencil.q2()});
    }
    case GeneratorKind::RandomEinsteinP2:
      return random_einstein_p2(n, spec.seed, spec.c).family;
  }
  throw Error("generate: unknown kind");
}

}  // namespace steinkit
