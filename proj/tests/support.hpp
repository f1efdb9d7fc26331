#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "blp/formulations.hpp"
#include "blp/problem.hpp"

namespace testing_support {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd out(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

// Patterns in counting order with position 0 as the most significant bit.
inline std::vector<blp::BinaryVector> all_patterns(int n) {
  std::vector<blp::BinaryVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    blp::BinaryVector u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = static_cast<int>((mask >> (n - 1 - i)) & 1U);
    out.push_back(u);
  }
  return out;
}

// Small deterministic generator for test data, independent of the library's.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  std::uint64_t next() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return s_;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) / 9007199254740992.0;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

}  // namespace testing_support
