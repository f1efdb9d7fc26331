#include "blp/random_case.hpp"

#include <cmath>

#include "blp/errors.hpp"

namespace blp {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  while (true) {
    const double a = 2.0 * uniform() - 1.0;
    const double b = 2.0 * uniform() - 1.0;
    const double s = a * a + b * b;
    if (s > 0.0 && s < 1.0) return a * std::sqrt(-2.0 * std::log(s) / s);
  }
}

BilevelProblem gen_random_case(int n_x, int n_y, int n_u, int n_l, std::uint64_t seed) {
  if (n_x <= 0 || n_y <= 0 || n_u <= 0 || n_l <= 0) {
    throw InvalidProblem("random case dimensions must be positive");
  }
  SplitMix64 rng(seed);
  auto uniform_vec = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform();
    return v;
  };
  auto normal_vec = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
  };
  auto normal_mat = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
    }
    return m;
  };

  BilevelProblem p;
  p.n_x = n_x;
  p.n_y = n_y;
  p.n_u = n_u;
  p.n_l = n_l;
  p.A = uniform_vec(n_x);
  p.B = uniform_vec(n_y);
  p.C = normal_mat(n_u, n_x);
  p.D = Eigen::MatrixXd::Zero(n_u, n_y);
  p.E = normal_vec(n_u);
  p.G = uniform_vec(n_y);
  p.H = normal_mat(n_l, n_x);
  p.J = normal_mat(n_l, n_y);
  p.N = normal_vec(n_l);
  return p;
}

}  // namespace blp
