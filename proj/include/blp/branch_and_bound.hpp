#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "blp/linear_model.hpp"
#include "blp/simplex.hpp"

namespace blp {

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(MilpStatus s);

struct MilpOptions {
  std::size_t node_limit = 1'000'000;
  double integrality_tol = 1e-6;
  double prune_tol = 1e-9;
  SimplexOptions lp;
};

struct MilpOutcome {
  MilpStatus status = MilpStatus::kInfeasible;
  Eigen::VectorXd incumbent;
  double objective = 0.0;  // in the model's own sense
  std::size_t node_count = 0;
  double gap = 0.0;
  double root_bound = 0.0;  // LP relaxation value at the root
};

// Best-bound branch and bound over the binaries of m (ties FIFO), branching on
// the most fractional binary with the lowest index on ties. Binaries that
// appear in no row and carry zero cost are fixed to 0. Integral nodes are
// re-solved with their binaries fixed so the incumbent is exactly integral.
// Throws NodeLimitExceeded once opts.node_limit nodes have been solved.
MilpOutcome solve_milp(const MilpModel& m, const MilpOptions& opts = {});

}  // namespace blp
