#include <cmath>
#include <limits>
#include <optional>

#include <doctest.h>

#include "blp/bigm.hpp"
#include "blp/branch_and_bound.hpp"
#include "blp/dbd.hpp"
#include "blp/errors.hpp"
#include "blp/problem.hpp"
#include "support.hpp"

using namespace blp;
using testing_support::TestRng;

namespace {

MilpModel random_milp(TestRng& rng) {
  const int nb = rng.integer(1, 10);
  const int nc = rng.integer(0, 4);
  const int rows = rng.integer(1, 6);
  ModelBuilder b(rng.integer(0, 1) ? ObjectiveSense::kMinimize : ObjectiveSense::kMaximize);
  for (int j = 0; j < nb; ++j) b.mark_binary(b.add_col("b", 0, 1, rng.uniform(-5, 5)));
  for (int j = 0; j < nc; ++j) b.add_col("c", rng.uniform(-2, 0), rng.uniform(0.5, 4), rng.uniform(-3, 3));
  for (int i = 0; i < rows; ++i) {
    std::vector<ModelBuilder::Term> t;
    for (int j = 0; j < nb + nc; ++j) {
      if (rng.integer(0, 2) == 0) continue;
      t.emplace_back(static_cast<std::size_t>(j), rng.uniform(-4, 4));
    }
    const int s = rng.integer(0, 5);
    const RowSense sense = s < 3 ? RowSense::kLessEqual : (s < 5 ? RowSense::kGreaterEqual : RowSense::kEqual);
    b.add_row("r", t, sense, rng.uniform(-2, 4) * (sense == RowSense::kGreaterEqual ? -1 : 1));
  }
  return b.build_milp();
}

// Best objective over all binary assignments (min form), or nullopt when none
// is feasible.
std::optional<double> enumerate(const MilpModel& m) {
  const std::size_t nb = m.binaries.size();
  const double sign = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  std::optional<double> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nb); ++mask) {
    LpModel lp = m;
    for (std::size_t b = 0; b < nb; ++b) {
      const auto col = static_cast<Eigen::Index>(m.binaries[b]);
      lp.lower[col] = lp.upper[col] = static_cast<double>((mask >> b) & 1U);
    }
    const LpOutcome o = solve_lp(lp);
    if (o.status != LpStatus::kOptimal) continue;
    if (!best || sign * o.objective < *best) best = sign * o.objective;
  }
  return best;
}

// Master problem of the illustrative run after four iterations, written out
// from its cut pool (positions 0-based).
DbdState fourth_master_state() {
  DbdState s;
  s.n = 3;
  s.sentinel = -1e4;
  s.rays.push_back({{}, {2}, {0, 0, 0}});
  s.rays.push_back({{2}, {0, 1}, {0, 0, 1}});
  s.add_point({{0}, {}, -49.99, {1, 0, 1}});
  s.add_point({{1}, {}, -1.0, {0, 1, 1}});
  return s;
}

}  // namespace

TEST_SUITE("milp") {

TEST_CASE("big-M model of the illustrative instance with M = 100") {
  const BilevelProblem p = illustrative_example();
  const MilpOutcome o = solve_milp(build_bigm_milp(p, BigMConfig::uniform(p, 100)));
  REQUIRE(o.status == MilpStatus::kOptimal);
  CHECK(o.objective == doctest::Approx(-49.99).epsilon(1e-9));
  const BigMLayout lay(p);
  CHECK(o.incumbent[static_cast<Eigen::Index>(lay.u(0))] == 1.0);
  CHECK(o.incumbent[static_cast<Eigen::Index>(lay.u(1))] == 0.0);
  CHECK(o.incumbent[static_cast<Eigen::Index>(lay.u(2))] == 1.0);
  CHECK(o.node_count >= 1);
}

TEST_CASE("large big-M constants do not hide fractional binaries") {
  const BilevelProblem p = illustrative_example();
  for (double M : {1e6, 1e7}) {
    const MilpOutcome o = solve_milp(build_bigm_milp(p, BigMConfig::uniform(p, M)));
    CAPTURE(M);
    REQUIRE(o.status == MilpStatus::kOptimal);
    CHECK(o.objective == doctest::Approx(-49.99).epsilon(1e-9));
  }
}

TEST_CASE("fourth master problem selects v1 and pattern 101") {
  const MilpOutcome o = solve_milp(build_master(fourth_master_state()));
  REQUIRE(o.status == MilpStatus::kOptimal);
  CHECK(o.objective == doctest::Approx(-49.99));
  const Eigen::VectorXd expect = (Eigen::VectorXd(6) << 1, 0, 1, 0, 1, 0).finished();
  CHECK(o.incumbent == expect);
}

TEST_CASE("binaries absent from every row and the objective are fixed to zero") {
  DbdState s;
  s.n = 3;
  s.rays.push_back({{}, {2}, {0, 0, 0}});
  const MilpOutcome o = solve_milp(build_master(s));
  REQUIRE(o.status == MilpStatus::kOptimal);
  CHECK(o.incumbent[0] == 0.0);
  CHECK(o.incumbent[1] == 0.0);
  CHECK(o.incumbent[2] == 1.0);
  CHECK(o.incumbent[3] == 1.0);
  CHECK(o.objective == doctest::Approx(-1e4));
}

TEST_CASE("model without binaries is passed through to the LP solver") {
  ModelBuilder b;
  const auto x = b.add_col("x", 0, kInf, 1);
  const auto y = b.add_col("y", 0, kInf, 2);
  b.add_row("cover", {{x, 1}, {y, 1}}, RowSense::kGreaterEqual, 3);
  const MilpModel m = b.build_milp();
  const MilpOutcome o = solve_milp(m);
  const LpOutcome lp = solve_lp(m);
  REQUIRE(o.status == MilpStatus::kOptimal);
  CHECK(o.objective == lp.objective);
  CHECK(o.incumbent == lp.primal);
  CHECK(o.node_count == 1);
}

TEST_CASE("branch and bound equals full enumeration on 100 random models") {
  TestRng rng(4242);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const MilpModel m = random_milp(rng);
    const std::optional<double> best = enumerate(m);
    const MilpOutcome o = solve_milp(m);
    CAPTURE(trial);
    if (!best) {
      CHECK(o.status == MilpStatus::kInfeasible);
      continue;
    }
    REQUIRE(o.status == MilpStatus::kOptimal);
    ++optimal;
    const double sign = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    CHECK(std::abs(sign * o.objective - *best) <= 1e-7 * (1 + std::abs(*best)));
    CHECK(sign * o.root_bound <= sign * o.objective + 1e-9);
    CHECK(max_primal_violation(m, o.incumbent) <= 1e-8);
    for (std::size_t b : m.binaries) {
      const double z = o.incumbent[static_cast<Eigen::Index>(b)];
      CHECK(std::abs(z - std::round(z)) <= 1e-6);
    }
    CHECK(o.gap == 0.0);
  }
  CHECK(optimal > 30);
}

TEST_CASE("search is deterministic") {
  TestRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MilpModel m = random_milp(rng);
    const MilpOutcome a = solve_milp(m);
    const MilpOutcome b = solve_milp(m);
    CHECK(a.status == b.status);
    CHECK(a.node_count == b.node_count);
    CHECK(a.incumbent == b.incumbent);
  }
}

TEST_CASE("node limit is reported") {
  ModelBuilder b(ObjectiveSense::kMaximize);
  std::vector<ModelBuilder::Term> t;
  for (int j = 0; j < 6; ++j) {
    b.mark_binary(b.add_col("b", 0, 1, 1.0 + 0.1 * j));
    t.emplace_back(static_cast<std::size_t>(j), 2.0);
  }
  b.add_row("knap", t, RowSense::kLessEqual, 5.0);
  MilpOptions o;
  o.node_limit = 2;
  CHECK_THROWS_AS(solve_milp(b.build_milp(), o), NodeLimitExceeded);
  o.node_limit = 1000;
  const MilpOutcome full = solve_milp(b.build_milp(), o);
  REQUIRE(full.status == MilpStatus::kOptimal);
  CHECK(full.objective == doctest::Approx(1.5 + 1.4));
}

TEST_CASE("unbounded relaxation at the root is reported as unbounded") {
  ModelBuilder b;
  b.mark_binary(b.add_col("b", 0, 1, 1));
  b.add_col("x", 0, kInf, -1);
  const MilpOutcome o = solve_milp(b.build_milp());
  CHECK(o.status == MilpStatus::kUnbounded);
}

}  // TEST_SUITE
