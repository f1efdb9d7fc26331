#pragma once

#include <cstddef>
#include <vector>

#include "blp/linear_model.hpp"
#include "blp/problem.hpp"

namespace blp {

// Complementarity activation pattern u = [u1 (n_l entries), u2 (n_y entries)].
//   u1_j = 1: follower row j is active;       u1_j = 0: its multiplier is zero.
//   u2_j = 1: reduced cost of y_j is zero;     u2_j = 0: y_j is zero.
using BinaryVector = std::vector<int>;

// Throws InvalidProblem unless u has length n_l + n_y with 0/1 entries.
void require_pattern(const BilevelProblem& p, const BinaryVector& u);

// Leader rows in <= form with the optional boxes appended:
// [C; I; 0] x + [D; 0; I] y <= [E; x_upper; y_upper].
struct UpperBlock {
  Eigen::MatrixXd C, D;
  Eigen::VectorXd E;
};
UpperBlock upper_block(const BilevelProblem& p);

// Column layout of the subproblem. Every block is a contiguous range of
// nonnegative variables; nu / gamma are indexed by pattern position.
struct SpLayout {
  int n_mu1 = 0;  // leader rows incl. boxes
  int n_l = 0;
  int n_y = 0;
  std::size_t mu1 = 0, mu2 = 0, mu3 = 0, nu1 = 0, nu2 = 0, gamma1 = 0, gamma2 = 0;
  std::size_t num_cols = 0;

  explicit SpLayout(const BilevelProblem& p);

  int num_binaries() const { return n_l + n_y; }
  std::size_t nu(int pos) const {
    return pos < n_l ? nu1 + static_cast<std::size_t>(pos)
                     : nu2 + static_cast<std::size_t>(pos - n_l);
  }
  std::size_t gamma(int pos) const {
    return pos < n_l ? gamma1 + static_cast<std::size_t>(pos)
                     : gamma2 + static_cast<std::size_t>(pos - n_l);
  }
};

// Parameter-free subproblem at a fixed pattern: the dual of the fixed-pattern
// single-level LP with the complementarity cross terms removed. Maximises
//   -mu1'E - mu2'N - mu3'G + nu1'N + nu2'G
// over nonnegative (mu1, mu2, mu3, nu1, nu2, gamma1, gamma2). Rows are the dual
// constraints for x (n_x rows), y (n_y rows) and lambda (n_l rows). The
// pattern enters only through variable fixings:
//   nu_i = 0 where u_i = 0,   gamma_i = 0 where u_i = 1.
LpModel build_sp(const BilevelProblem& p, const BinaryVector& u);

// Value of the subproblem objective h(mu, nu) at an SP column vector.
double sp_objective(const BilevelProblem& p, const Eigen::VectorXd& sp_point);

// Dual objective of the big-M single-level LP at a fixed pattern, evaluated at
// an SP column vector. Coincides with sp_objective whenever the pattern
// fixings hold.
double big_m_dual_objective(const BilevelProblem& p, const BinaryVector& u,
                            const Eigen::VectorXd& sp_point, const Eigen::VectorXd& m1,
                            const Eigen::VectorXd& m2, const Eigen::VectorXd& m3,
                            const Eigen::VectorXd& m4);

// Primal LP over (x, y, lambda) >= 0 at a fixed pattern:
//   min A'x + B'y
//   s.t. leader rows (incl. boxes), H x + J y <= N, -J'lambda <= G,
//        (N - Hx - Jy)_j <= 0 where u1_j = 1,  lambda_j = 0 where u1_j = 0,
//        (G + J'lambda)_j <= 0 where u2_j = 1, y_j = 0 where u2_j = 0.
LpModel build_fixed_u_lp(const BilevelProblem& p, const BinaryVector& u);

// Column offsets of x, y and lambda in build_fixed_u_lp / the big-M MILP.
struct PrimalLayout {
  std::size_t x = 0, y = 0, lambda = 0;
  explicit PrimalLayout(const BilevelProblem& p)
      : x(0),
        y(static_cast<std::size_t>(p.n_x)),
        lambda(static_cast<std::size_t>(p.n_x + p.n_y)) {}
};

// Follower LP at a fixed leader decision: min G'y s.t. J y <= N - H x, y >= 0.
LpModel build_lower_level_lp(const BilevelProblem& p, const Eigen::VectorXd& x);

}  // namespace blp
