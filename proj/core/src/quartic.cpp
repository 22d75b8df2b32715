#include "steinkit/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace steinkit {

QuarticForm::QuarticForm(int n) : n_(n) {
  if (n < 1) throw DimensionMismatch("QuarticForm: n must be at least 1");
  q_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
}

QuarticForm::QuarticForm(int n, std::vector<double> coeffs, double rtol) : n_(n), q_(std::move(coeffs)) {
  if (n < 1) throw DimensionMismatch("QuarticForm: n must be at least 1");
  if (q_.size() != static_cast<std::size_t>(n) * n * n * n) {
    throw DimensionMismatch("QuarticForm: coefficient tensor must have n^4 entries");
  }
  double scale = 0.0;
  for (double v : q_) scale = std::max(scale, std::abs(v));
  const double limit = rtol * std::max(1.0, scale);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::array<int, 4> s{i, j, k, l};
          std::sort(s.begin(), s.end());
          const double ref = (*this)(s[0], s[1], s[2], s[3]);
          if (std::abs((*this)(i, j, k, l) - ref) > limit) {
            std::ostringstream os;
            os << "QuarticForm: coefficient (" << i << ',' << j << ',' << k << ',' << l
               << ") breaks permutation symmetry";
            throw Error(os.str());
          }
        }
}

QuarticForm QuarticForm::norm_fourth(int n) {
  QuarticForm g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const int hits = (i == j && k == l) + (i == k && j == l) + (i == l && j == k);
          g.q_[g.index(i, j, k, l)] = hits / 3.0;
        }
  return g;
}

void QuarticForm::set_symmetric(int i, int j, int k, int l, double value) {
  std::array<int, 4> s{i, j, k, l};
  std::sort(s.begin(), s.end());
  do {
    q_[index(s[0], s[1], s[2], s[3])] = value;
  } while (std::next_permutation(s.begin(), s.end()));
}

double QuarticForm::evaluate(const Vector& x) const {
  if (x.size() != n_) throw DimensionMismatch("QuarticForm::evaluate: vector length must be n");
  double total = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const double xij = x(i) * x(j);
      for (int k = 0; k < n_; ++k) {
        const double xijk = xij * x(k);
        for (int l = 0; l < n_; ++l) total += q_[idx++] * xijk * x(l);
      }
    }
  return total;
}

double QuarticForm::norm() const { return std::sqrt(dot(*this)); }

double QuarticForm::dot(const QuarticForm& other) const {
  if (other.n_ != n_) throw DimensionMismatch("QuarticForm::dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < q_.size(); ++i) s += q_[i] * other.q_[i];
  return s;
}

QuarticForm QuarticForm::minus(const QuarticForm& other, double scale) const {
  if (other.n_ != n_) throw DimensionMismatch("QuarticForm::minus: dimension mismatch");
  QuarticForm out(n_);
  for (std::size_t i = 0; i < q_.size(); ++i) out.q_[i] = q_[i] - scale * other.q_[i];
  return out;
}

QuarticForm quartic_polarize(const QuarticEvaluator& q, int n) {
  QuarticForm out(n);
  // Evaluations keyed by the sorted multiset of basis indices in the sum.
  std::map<std::vector<int>, double> cache;
  auto eval_multiset = [&](std::vector<int> key) {
    std::sort(key.begin(), key.end());
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    Vector x = Vector::Zero(n);
    for (int idx : key) x(idx) += 1.0;
    const double v = q(x);
    cache.emplace(std::move(key), v);
    return v;
  };

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          const std::array<int, 4> idx{i, j, k, l};
          double acc = 0.0;
          for (int mask = 1; mask < 16; ++mask) {
            std::vector<int> key;
            for (int b = 0; b < 4; ++b)
              if (mask & (1 << b)) key.push_back(idx[static_cast<std::size_t>(b)]);
            const int sign = ((4 - static_cast<int>(key.size())) % 2 == 0) ? 1 : -1;
            acc += sign * eval_multiset(std::move(key));
          }
          out.set_symmetric(i, j, k, l, acc / 24.0);
        }
  return out;
}

}  // namespace steinkit
