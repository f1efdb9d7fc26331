#pragma once

#include <Eigen/Dense>

#include "blp/problem.hpp"

namespace blp {

struct VerificationReport {
  double upper_residual = 0.0;   // max violation of leader rows, x >= 0, boxes
  double lower_residual = 0.0;   // max violation of H x + J y <= N, y >= 0
  double lower_optimum = 0.0;    // min G'y at x
  double optimality_gap = 0.0;   // G'y_hat - lower_optimum
  double f = 0.0;
  double g = 0.0;
  bool passed = false;
};

// Checks that (x_hat, y_hat) is bilevel feasible: leader feasible and y_hat
// optimal for the follower LP at x_hat. Throws LowerLevelInfeasible /
// LowerLevelUnbounded when the follower LP at x_hat has no optimum.
VerificationReport verify_bilevel_solution(const BilevelProblem& p,
                                           const Eigen::VectorXd& x_hat,
                                           const Eigen::VectorXd& y_hat,
                                           double tol = 1e-6);

}  // namespace blp
