#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blp/branch_and_bound.hpp"
#include "blp/formulations.hpp"
#include "blp/linear_model.hpp"
#include "blp/problem.hpp"
#include "blp/simplex.hpp"

namespace blp {

enum class BilevelStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(BilevelStatus s);

// Index sets below are 0-based positions in u = [u1, u2].

// From a bounded subproblem: positions with nu > tol (omega) and gamma > tol
// (omega_prime), and the subproblem value V.
struct PointCut {
  std::vector<int> omega;
  std::vector<int> omega_prime;
  double V = 0.0;
  BinaryVector origin;  // pattern whose subproblem produced the cut
};

// From a subproblem ray: positions with nu > tol (psi) and gamma > tol
// (psi_prime). Excludes every pattern with u = 1 on psi and u = 0 on psi_prime.
struct RayCut {
  std::vector<int> psi;
  std::vector<int> psi_prime;
  BinaryVector origin;
};

// Point-cut row shapes. kComplemented:
//   sum_{omega} u + sum_{omega'} (1 - u) <= |omega| + |omega'| - 1 + sum_{k' >= k} v_k'
// kUncomplemented counts u (instead of 1 - u) over omega'.
enum class PointCutForm { kComplemented, kUncomplemented };

struct TraceRow {
  int iteration = 0;
  double UB = 0.0;
  double LB = 0.0;
  std::string sp_status;  // OPT, UNB or INF
  int K = 0;
  int L = 0;
  BinaryVector u;  // pattern solved in this iteration
};

struct DbdState {
  int n = 0;  // pattern length
  double sentinel = -1e4;
  PointCutForm form = PointCutForm::kComplemented;
  std::vector<PointCut> points;  // kept sorted, V non-decreasing
  std::vector<RayCut> rays;
  double UB = std::numeric_limits<double>::infinity();
  double LB = -std::numeric_limits<double>::infinity();
  BinaryVector u_hat;
  BinaryVector incumbent;  // pattern attaining UB
  std::vector<TraceRow> trace;

  int K() const { return static_cast<int>(points.size()); }
  int L() const { return static_cast<int>(rays.size()); }

  // Inserts after any cut with equal V.
  void add_point(PointCut cut);
};

struct DbdOptions {
  double epsilon = 1e-6;
  double tol = 1e-7;
  double sentinel = -1e4;
  std::optional<BinaryVector> start_u;  // all zeros when absent
  PointCutForm point_cut_form = PointCutForm::kComplemented;
  // Default 10 * 2^min(n, 20).
  std::optional<std::int64_t> max_iterations;
  SimplexOptions lp;
  MilpOptions master;
};

struct DbdResult {
  BilevelStatus status = BilevelStatus::kInfeasible;
  Eigen::VectorXd x, y;
  BinaryVector u;
  double f = std::numeric_limits<double>::quiet_NaN();
  double g = std::numeric_limits<double>::quiet_NaN();
  std::int64_t iterations = 0;
  std::vector<TraceRow> trace;
  DbdState state;  // cut pool at exit
  // A visited pattern whose single-level LP is unbounded below.
  bool unbounded_suspect = false;
};

PointCut extract_point_cut(const BilevelProblem& p, const Eigen::VectorXd& sp_point,
                           const BinaryVector& u_hat, double value, double tol = 1e-7);

// Throws EmptyRayCut when no nu / gamma component exceeds tol.
RayCut extract_ray_cut(const BilevelProblem& p, const Eigen::VectorXd& ray,
                       const BinaryVector& u_hat, double tol = 1e-7);

// Columns u_0..u_{n-1} then v_0..v_K, all binary; minimises
// sentinel * v_0 + sum_k V_k v_k subject to point cuts, ray cuts and
// sum_k v_k = 1.
MilpModel build_master(const DbdState& state);

DbdResult run_dbd(const BilevelProblem& p, const DbdOptions& opts = {});

// Header iteration,UB,LB,sp_status,K,L.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace blp
