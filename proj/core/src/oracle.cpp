#include "steinkit/oracle.hpp"

#include <cmath>
#include <random>

#include "steinkit/jacobi.hpp"

namespace steinkit {

SamplingOracleReport sampling_oracle(const ShapeFamily& f, int samples, std::uint64_t seed) {
  SamplingOracleReport out;
  out.c1 = einstein_check(f).c1;
  out.c2 = two_stein_check(f).c2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector x(f.n());
  while (out.samples < samples) {
    for (int i = 0; i < f.n(); ++i) x(i) = gauss(rng);
    const double nx = x.norm();
    if (nx == 0.0) continue;
    x /= nx;
    const SymMatrix r = extrinsic_jacobi(f, x);
    out.max_einstein_dev = std::max(out.max_einstein_dev, std::abs(r.trace() - out.c1));
    out.max_two_stein_dev = std::max(out.max_two_stein_dev, std::abs(r.matrix().squaredNorm() - out.c2));
    ++out.samples;
  }
  return out;
}

}  // namespace steinkit
