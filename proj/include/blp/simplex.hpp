#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "blp/linear_model.hpp"

namespace blp {

enum class LpStatus { kOptimal, kUnbounded, kInfeasible };

const char* to_string(LpStatus s);

struct SimplexOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;  // reduced-cost threshold
  double ray_tol = 1e-9;         // minimum objective improvement along a ray
  double pivot_tol = 1e-11;      // smallest admissible pivot magnitude
  int bland_after = 500;         // consecutive degenerate pivots before Bland
  int refactor_every = 50;
  int max_pivots = 200000;
};

// Sign conventions. Rows are read in <=-normalised form (>= rows negated,
// = rows kept) and the objective in minimisation form (a maximisation model
// has its cost negated). Under that reading:
//   row_duals    pi >= 0 on inequality rows, free on equality rows, with
//                reduced_costs = c_min + A_norm' pi (>= 0 at a lower bound,
//                <= 0 at an upper bound, 0 between).
//   farkas       w >= 0 on inequality rows with
//                min_{lower <= z <= upper} (A_norm' w)' z > w' b_norm,
//                which no feasible z can satisfy.
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  // Optimal point; on Unbounded a feasible point from which `ray` improves.
  Eigen::VectorXd primal;
  double objective = 0.0;  // in the model's own sense
  Eigen::VectorXd row_duals;
  Eigen::VectorXd reduced_costs;
  // Unbounded: recession direction, max-norm 1, improving the objective.
  Eigen::VectorXd ray;
  Eigen::VectorXd farkas;
  // Infeasible: rows whose phase-1 artificial stayed positive.
  std::vector<std::size_t> infeasible_rows;
  double phase1_objective = 0.0;
  std::size_t pivots = 0;
};

// Dense two-phase primal simplex. Dantzig pricing with a switch to Bland's
// rule after `bland_after` consecutive degenerate pivots; the basis is
// refactorised periodically and before any result is reported. Deterministic
// for identical input. Throws NumericalBreakdown when pivots degrade or the
// pivot limit is hit.
LpOutcome solve_lp(const LpModel& m, const SimplexOptions& opts = {});

struct RecoveredOutcome {
  LpOutcome outcome;  // vectors sized to the original model's columns / rows
  std::vector<std::size_t> artificial_rows;
  // Sum of artificial values at the reported point.
  double artificial_mass = 0.0;
  // Sum of |artificial components| of the reported ray (Unbounded only).
  double artificial_ray_mass = 0.0;
};

// Solve; if the model is infeasible, relax every row flagged by phase 1 with a
// pair s_r - t_r (s_r, t_r >= 0) penalised by -(s_r + t_r) in a maximisation
// objective (+ in a minimisation one) and solve again.
RecoveredOutcome solve_with_recovery(const LpModel& m, const SimplexOptions& opts = {});

}  // namespace blp
