#pragma once

#include <cstdint>

#include "steinkit/linalg.hpp"

namespace steinkit {

/// Brute-force check of the trace identities on random unit vectors, with c1
/// and c2 taken from einstein_check and two_stein_check.
struct SamplingOracleReport {
  int samples = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double max_einstein_dev = 0.0;   ///< max |Tr R'_X - c1|
  double max_two_stein_dev = 0.0;  ///< max |Tr((R'_X)^2) - c2|
};

SamplingOracleReport sampling_oracle(const ShapeFamily& f, int samples = 1000, std::uint64_t seed = 0);

}  // namespace steinkit
