#include "blp/branch_and_bound.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "blp/errors.hpp"

namespace blp {
namespace {

struct Node {
  double bound;
  std::size_t seq;
  std::vector<signed char> fix;  // per binary: -1 free, 0 or 1 fixed
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

bool column_is_unused(const MilpModel& m, std::size_t col) {
  if (m.cost[static_cast<Eigen::Index>(col)] != 0.0) return false;
  return m.num_rows() == 0 || m.rows.col(static_cast<Eigen::Index>(col)).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal: return "Optimal";
    case MilpStatus::kInfeasible: return "Infeasible";
    case MilpStatus::kUnbounded: return "Unbounded";
  }
  return "?";
}

MilpOutcome solve_milp(const MilpModel& m, const MilpOptions& opts) {
  if (const std::string why = m.check(); !why.empty()) throw InvalidProblem("MILP model: " + why);
  const double sign = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  MilpOutcome out;

  if (m.binaries.empty()) {
    const LpOutcome lp = solve_lp(m, opts.lp);
    out.node_count = 1;
    out.root_bound = lp.objective;
    if (lp.status == LpStatus::kInfeasible) {
      out.status = MilpStatus::kInfeasible;
    } else {
      out.status = lp.status == LpStatus::kOptimal ? MilpStatus::kOptimal : MilpStatus::kUnbounded;
      out.incumbent = lp.primal;
      out.objective = lp.objective;
    }
    return out;
  }

  LpModel base = m;
  const std::size_t nb = m.binaries.size();
  std::vector<signed char> root_fix(nb, -1);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto col = static_cast<Eigen::Index>(m.binaries[b]);
    if (column_is_unused(m, m.binaries[b])) {
      root_fix[b] = 0;
    } else if (base.lower[col] > 0.0) {
      root_fix[b] = 1;
    } else if (base.upper[col] < 1.0) {
      root_fix[b] = 0;
    }
  }

  auto apply = [&](LpModel& lp, const std::vector<signed char>& fix) {
    for (std::size_t b = 0; b < nb; ++b) {
      const auto col = static_cast<Eigen::Index>(m.binaries[b]);
      if (fix[b] < 0) {
        lp.lower[col] = 0.0;
        lp.upper[col] = 1.0;
      } else {
        lp.lower[col] = lp.upper[col] = fix[b];
      }
    }
  };

  double best = std::numeric_limits<double>::infinity();
  bool have_incumbent = false;
  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  std::size_t seq = 0;
  open.push(Node{-std::numeric_limits<double>::infinity(), seq++, root_fix});
  LpModel work = base;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= best - opts.prune_tol) continue;
    if (out.node_count >= opts.node_limit) {
      throw NodeLimitExceeded("branch and bound node limit of " + std::to_string(opts.node_limit) +
                              " reached");
    }
    apply(work, node.fix);
    const LpOutcome lp = solve_lp(work, opts.lp);
    const bool is_root = out.node_count == 0;
    ++out.node_count;
    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status == LpStatus::kUnbounded) {
      out.status = MilpStatus::kUnbounded;
      out.incumbent = lp.primal;
      out.gap = std::numeric_limits<double>::infinity();
      return out;
    }
    const double value = sign * lp.objective;
    if (is_root) out.root_bound = lp.objective;
    if (have_incumbent && value >= best - opts.prune_tol) continue;

    std::size_t branch = nb;
    double worst = opts.integrality_tol;
    for (std::size_t b = 0; b < nb; ++b) {
      if (node.fix[b] >= 0) continue;
      const double z = lp.primal[static_cast<Eigen::Index>(m.binaries[b])];
      const double frac = std::abs(z - std::round(z));
      if (frac > worst) {
        worst = frac;
        branch = b;
      }
    }

    if (branch == nb) {
      std::vector<signed char> fixed = node.fix;
      for (std::size_t b = 0; b < nb; ++b) {
        if (fixed[b] < 0) {
          fixed[b] = static_cast<signed char>(
              std::lround(lp.primal[static_cast<Eigen::Index>(m.binaries[b])]));
        }
      }
      LpOutcome exact = lp;
      if (fixed != node.fix) {
        apply(work, fixed);
        exact = solve_lp(work, opts.lp);
      }
      if (exact.status == LpStatus::kOptimal) {
        const double v = sign * exact.objective;
        if (!have_incumbent || v < best - opts.prune_tol) {
          best = v;
          have_incumbent = true;
          out.incumbent = exact.primal;
          for (std::size_t b = 0; b < nb; ++b) {
            out.incumbent[static_cast<Eigen::Index>(m.binaries[b])] = fixed[b];
          }
          out.objective = exact.objective;
        }
        if (v <= value + opts.prune_tol * (1.0 + std::abs(value))) continue;
      }
      // Rounding did not reproduce the relaxation (large coefficients amplify
      // sub-tolerance fractions), so keep branching on the largest one.
      double frac_max = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        if (node.fix[b] >= 0) continue;
        const double z = lp.primal[static_cast<Eigen::Index>(m.binaries[b])];
        const double frac = std::abs(z - std::round(z));
        if (frac > frac_max) {
          frac_max = frac;
          branch = b;
        }
      }
      if (branch == nb) continue;
    }

    for (signed char side : {0, 1}) {
      Node child{value, seq++, node.fix};
      child.fix[branch] = side;
      open.push(std::move(child));
    }
  }

  out.status = have_incumbent ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
  out.gap = 0.0;
  return out;
}

}  // namespace blp
