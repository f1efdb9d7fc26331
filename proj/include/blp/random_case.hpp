#pragma once

#include <cstdint>

#include "blp/problem.hpp"

namespace blp {

// SplitMix64. Uniform doubles take the top 53 bits: (x >> 11) * 2^-53, so
// values lie in [0, 1). Normals use the Marsaglia polar method on
// 2 * uniform - 1 pairs without caching the second variate.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
};

// A, B, G ~ U(0, 1); C, E, H, J, N ~ N(0, 1); D = 0. Entries are drawn
// row-major in the order A, B, C, E, G, H, J, N from one generator seeded with
// `seed` (D consumes no draws).
BilevelProblem gen_random_case(int n_x, int n_y, int n_u, int n_l, std::uint64_t seed);

}  // namespace blp
