#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blp/bigm.hpp"
#include "blp/branch_and_bound.hpp"
#include "blp/dbd.hpp"
#include "blp/problem.hpp"

namespace blp {

// Big-M single-level solve; iterations carries the B&B node count. Status is
// Optimal, Infeasible or Unbounded.
DbdResult solve_bigm(const BilevelProblem& p, const BigMConfig& m, const MilpOptions& opts = {});

struct OracleResult {
  BilevelStatus status = BilevelStatus::kInfeasible;
  Eigen::VectorXd x, y;
  BinaryVector u;
  double f = std::numeric_limits<double>::quiet_NaN();
  double g = std::numeric_limits<double>::quiet_NaN();
  bool unbounded_suspect = false;  // some pattern LP is unbounded below
  std::int64_t patterns = 0;
  std::int64_t optimal_patterns = 0;
};

inline constexpr int kOracleCap = 24;

// Solves the single-level LP for every pattern in {0,1}^(n_l+n_y) and keeps
// the best. Throws CapExceeded when n_l + n_y exceeds max_binaries (at most
// kOracleCap).
OracleResult enumerate_oracle(const BilevelProblem& p, const SimplexOptions& lp = {},
                              int max_binaries = kOracleCap);

struct ComparisonRow {
  std::string algorithm;  // dbd, bigm, oracle
  double M = std::numeric_limits<double>::quiet_NaN();
  std::string status;
  double f = std::numeric_limits<double>::quiet_NaN();
  double g = std::numeric_limits<double>::quiet_NaN();
  std::int64_t iterations = 0;
  double wall_ms = 0.0;
  // 100 (f - f_ref) / max(1, |f_ref|) against the oracle (or DBD without it).
  double gap_pct = std::numeric_limits<double>::quiet_NaN();
  bool agrees = false;     // same status and |gap| within tolerance
  bool infeasible = false; // reported Infeasible while the reference is not
  bool suboptimal = false; // strictly positive gap
};

struct ComparisonReport {
  std::uint64_t seed = 0;
  std::array<int, 4> dims{};  // n_x, n_y, n_u, n_l
  std::vector<ComparisonRow> rows;
  std::optional<OracleResult> oracle;
  bool unbounded_suspect = false;

  const ComparisonRow* find(const std::string& algorithm, double M = std::numeric_limits<double>::quiet_NaN()) const;
  // 100 (1 - dbd iterations / big-M nodes), NaN when either is missing.
  double iteration_reduction_pct(double M) const;
};

struct CompareOptions {
  bool run_oracle = true;
  double agree_tol = 1e-6;
  DbdOptions dbd;
  MilpOptions milp;
};

ComparisonReport compare(const BilevelProblem& p, const std::vector<double>& big_m_values,
                         const CompareOptions& opts = {}, std::uint64_t seed = 0);

struct BatchConfig {
  std::array<int, 4> dims{};  // n_x, n_y, n_u, n_l
  std::uint64_t first_seed = 1;
  int count = 20;
  int jobs = 1;
  std::vector<double> big_m_values;
  CompareOptions compare;
};

// Runs compare on `count` generated instances. Seeds flagged unbounded-suspect
// by the oracle are skipped and replaced by the next unused seed. Reports are
// ordered by seed.
std::vector<ComparisonReport> run_batch(const BatchConfig& cfg);

// Header seed,algorithm,M,status,f,g,iterations,wall_ms,gap_pct.
void write_report_csv(std::ostream& out, const std::vector<ComparisonReport>& reports);

struct OracleFixture {
  std::uint64_t seed = 0;
  std::array<int, 4> dims{};
  double f = 0.0;
  BinaryVector u;
};

// JSON array of {seed, dims, f, u}.
std::string write_oracle_fixtures(const std::vector<OracleFixture>& fixtures);
std::vector<OracleFixture> read_oracle_fixtures(const std::string& text);

// Small instances from the bilevel literature. Only names, sizes and reported
// solutions are kept; the coefficient data is not included.
struct LiteratureProblem {
  std::string name;
  std::string reference;
  int n_x, n_y, n_u, n_l;
  double f, g;
  std::vector<double> x, y;
};
const std::vector<LiteratureProblem>& literature_catalog();

}  // namespace blp
