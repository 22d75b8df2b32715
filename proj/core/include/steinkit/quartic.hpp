#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "steinkit/linalg.hpp"

namespace steinkit {

/// Fully symmetric 4-linear form F on R^n; the quartic is q(X) = F(X, X, X, X).
/// Stored densely as n^4 coefficients q[i][j][k][l] = F(e_i, e_j, e_k, e_l).
class QuarticForm {
 public:
  /// Zero form.
  explicit QuarticForm(int n);
  /// Takes a dense coefficient tensor; throws Error unless it is invariant
  /// under all 24 index permutations to rtol * max|coeff|.
  QuarticForm(int n, std::vector<double> coeffs, double rtol = kDefaultTol);

  /// Coefficient tensor of ||X||^4: (d_ij d_kl + d_ik d_jl + d_il d_jk) / 3.
  static QuarticForm norm_fourth(int n);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] double operator()(int i, int j, int k, int l) const {
    return q_[index(i, j, k, l)];
  }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return q_; }

  [[nodiscard]] double evaluate(const Vector& x) const;
  [[nodiscard]] double norm() const;
  [[nodiscard]] double dot(const QuarticForm& other) const;
  /// this - scale * other
  [[nodiscard]] QuarticForm minus(const QuarticForm& other, double scale = 1.0) const;

  /// Writes `value` into every permutation of (i, j, k, l).
  void set_symmetric(int i, int j, int k, int l, double value);

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k, int l) const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return ((static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n +
            static_cast<std::size_t>(k)) * n + static_cast<std::size_t>(l);
  }

  int n_;
  std::vector<double> q_;
};

using QuarticEvaluator = std::function<double(const Vector&)>;

/// Recovers the symmetric coefficient tensor of a homogeneous quartic from
/// point evaluations by the polarization identity
///   F(v1,v2,v3,v4) = 1/24 * sum_{S nonempty} (-1)^{4-|S|} q(sum_{s in S} v_s).
/// Each distinct multiset {i<=j<=k<=l} is evaluated once; evaluations at the
/// same integer combination of basis vectors are shared.
QuarticForm quartic_polarize(const QuarticEvaluator& q, int n);

}  // namespace steinkit
