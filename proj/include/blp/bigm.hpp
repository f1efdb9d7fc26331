#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "blp/linear_model.hpp"
#include "blp/problem.hpp"

namespace blp {

// Disjunctive constants of the big-M single-level model, one per row:
//   M1, M2 over follower rows (n_l), M3, M4 over follower variables (n_y).
struct BigMConfig {
  Eigen::VectorXd m1, m2, m3, m4;

  // Broadcast one scalar to every entry.
  static BigMConfig uniform(const BilevelProblem& p, double m);

  // Throws InvalidProblem unless sizes match p and every entry is > 0.
  void require_valid(const BilevelProblem& p) const;
};

// Column offsets of the big-M MILP: x, y, lambda continuous; u1, u2 binary.
struct BigMLayout {
  std::size_t x, y, lambda, u1, u2, num_cols;
  explicit BigMLayout(const BilevelProblem& p);
  std::size_t u(int pos) const { return u1 + static_cast<std::size_t>(pos); }
};

// Single-level KKT model with complementarity linearised by big-M:
//   min  A'x + B'y
//   s.t. C x + D y <= E
//        H x + J y <= N
//        -J'lambda <= G
//        N - H x - J y <= M1 o (e - u1)
//        lambda <= M2 o u1
//        G + J'lambda <= M3 o (e - u2)
//        y <= M4 o u2
//        x, y, lambda >= 0, optional boxes on x and y as column bounds.
// Rows appear in exactly this block order.
MilpModel build_bigm_milp(const BilevelProblem& p, const BigMConfig& m);

}  // namespace blp
