#include "blp/verify.hpp"

#include <algorithm>

#include "blp/errors.hpp"
#include "blp/formulations.hpp"
#include "blp/simplex.hpp"

namespace blp {
namespace {

double positive_part_max(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : std::max(0.0, v.maxCoeff());
}

}  // namespace

VerificationReport verify_bilevel_solution(const BilevelProblem& p,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y, double tol) {
  require_valid(p);
  if (x.size() != p.n_x || y.size() != p.n_y) {
    throw InvalidProblem("solution vectors do not match problem dimensions");
  }
  VerificationReport r;
  r.f = p.upper_objective(x, y);
  r.g = p.lower_objective(y);

  const UpperBlock up = upper_block(p);
  r.upper_residual = std::max(positive_part_max(up.C * x + up.D * y - up.E),
                              positive_part_max(-x));
  r.lower_residual = std::max(positive_part_max(p.H * x + p.J * y - p.N),
                              positive_part_max(-y));

  const LpOutcome lower = solve_lp(build_lower_level_lp(p, x));
  if (lower.status == LpStatus::kInfeasible) {
    throw LowerLevelInfeasible("follower LP is infeasible at the given leader decision");
  }
  if (lower.status == LpStatus::kUnbounded) {
    throw LowerLevelUnbounded("follower LP is unbounded at the given leader decision");
  }
  r.lower_optimum = lower.objective;
  r.optimality_gap = r.g - r.lower_optimum;
  r.passed = r.upper_residual <= tol && r.lower_residual <= tol && r.optimality_gap <= tol;
  return r;
}

}  // namespace blp
