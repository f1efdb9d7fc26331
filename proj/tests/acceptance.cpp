#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blp/baselines.hpp"
#include "blp/bigm.hpp"
#include "blp/branch_and_bound.hpp"
#include "blp/dbd.hpp"
#include "blp/errors.hpp"
#include "blp/formulations.hpp"
#include "blp/random_case.hpp"
#include "blp/simplex.hpp"

using namespace blp;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<BinaryVector> patterns(int n) {
  std::vector<BinaryVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    BinaryVector u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = static_cast<int>((mask >> (n - 1 - i)) & 1U);
    out.push_back(u);
  }
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  double uniform(double lo, double hi) {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return lo + (hi - lo) * static_cast<double>(s_ >> 11) / 9007199254740992.0;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform(0, 1) * (hi - lo + 1)) % (hi - lo + 1); }

 private:
  std::uint64_t s_;
};

void criterion1() {
  const auto t0 = Clock::now();
  const BilevelProblem p = illustrative_example();
  struct Row {
    BinaryVector u;
    LpStatus status;
    double value;
  };
  const std::vector<Row> table = {
      {{0, 0, 0}, LpStatus::kUnbounded, 0},  {{0, 0, 1}, LpStatus::kInfeasible, 0},
      {{0, 1, 0}, LpStatus::kUnbounded, 0},  {{0, 1, 1}, LpStatus::kOptimal, -1.0},
      {{1, 0, 0}, LpStatus::kUnbounded, 0},  {{1, 0, 1}, LpStatus::kOptimal, -49.99},
      {{1, 1, 0}, LpStatus::kUnbounded, 0},  {{1, 1, 1}, LpStatus::kOptimal, -0.49},
  };
  int matched = 0;
  for (const Row& r : table) {
    const LpOutcome o = solve_lp(build_sp(p, r.u));
    if (o.status != r.status) continue;
    if (r.status == LpStatus::kOptimal && std::abs(o.objective - r.value) > 1e-6) continue;
    ++matched;
  }
  const double secs = seconds_since(t0);
  report(1, matched == 8 && secs < 1.0,
         "subproblem table " + std::to_string(matched) + "/8 rows match, " + std::to_string(secs) + " s");
}

void criterion2() {
  DbdOptions o;
  o.start_u = BinaryVector{0, 0, 0};
  o.sentinel = -1e4;
  const BilevelProblem p = illustrative_example();
  const DbdResult r = run_dbd(p, o);
  bool ok = r.status == BilevelStatus::kOptimal && r.u == BinaryVector{1, 0, 1} &&
            std::abs(r.x[0] - 1) <= 1e-6 && std::abs(r.y[0] - 50) <= 1e-6 &&
            std::abs(r.f - -49.99) <= 1e-6 && r.iterations <= 8;
  // The first two ray cuts read 1 <= u3 and u3 <= u1 + u2 when reproduced;
  // every ray cut must in any case be violated by the pattern that produced it.
  bool walkthrough = r.state.rays.size() >= 2 && r.state.rays[0].psi.empty() &&
                     r.state.rays[0].psi_prime == std::vector<int>{2} &&
                     r.state.rays[1].psi == std::vector<int>{2} &&
                     r.state.rays[1].psi_prime == std::vector<int>{0, 1};
  for (const RayCut& c : r.state.rays) {
    double lhs = 0;
    for (int i : c.psi) lhs += c.origin[static_cast<std::size_t>(i)];
    for (int i : c.psi_prime) lhs += 1 - c.origin[static_cast<std::size_t>(i)];
    if (lhs <= static_cast<double>(c.psi.size() + c.psi_prime.size()) - 1) ok = false;
  }
  report(2, ok,
         "illustrative run: status " + std::string(to_string(r.status)) + ", f=" + std::to_string(r.f) + ", " +
             std::to_string(r.iterations) + " iterations, walkthrough rays " +
             (walkthrough ? "reproduced" : "differ (validity checked)"));
}

struct Instance {
  std::array<int, 4> dims;
  std::uint64_t seed;
  BilevelProblem p;
  OracleResult oracle;
  DbdResult dbd;
};

std::vector<Instance> criterion3() {
  const auto t0 = Clock::now();
  const std::vector<std::array<int, 4>> sizes = {{3, 3, 2, 2}, {5, 5, 3, 3}, {6, 6, 4, 4}};
  std::vector<Instance> batch;
  int compared = 0, agree = 0, suspect = 0, optimal = 0;
  for (const auto& d : sizes) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      Instance in{d, seed, gen_random_case(d[0], d[1], d[2], d[3], seed), {}, {}};
      in.oracle = enumerate_oracle(in.p);
      if (in.oracle.unbounded_suspect) {
        ++suspect;
        continue;
      }
      in.dbd = run_dbd(in.p);
      ++compared;
      bool same = false;
      if (in.oracle.status == BilevelStatus::kOptimal) {
        ++optimal;
        same = in.dbd.status == BilevelStatus::kOptimal && std::abs(in.dbd.f - in.oracle.f) <= 1e-6;
      } else {
        same = in.dbd.status == in.oracle.status;
      }
      if (same) ++agree;
      batch.push_back(std::move(in));
    }
  }
  const double secs = seconds_since(t0);
  report(3, agree == compared && compared > 0 && secs < 300.0,
         std::to_string(agree) + "/" + std::to_string(compared) + " instances agree with enumeration (" +
             std::to_string(optimal) + " optimal, " + std::to_string(suspect) + " unbounded-suspect skipped), " +
             std::to_string(secs) + " s");
  return batch;
}

void criterion4(const std::vector<Instance>& batch,
                std::map<double, std::vector<std::pair<int, std::int64_t>>>& nodes) {
  const std::vector<double> Ms = {0.5, 2, 100, 1e4};
  int violations = 0, limits = 0, flagged_small = 0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Instance& in = batch[k];
    for (double M : Ms) {
      DbdResult r;
      try {
        r = solve_bigm(in.p, BigMConfig::uniform(in.p, M));
      } catch (const NodeLimitExceeded&) {
        ++limits;
        continue;
      }
      nodes[M].emplace_back(static_cast<int>(k), r.iterations);
      if (r.status == BilevelStatus::kOptimal) {
        if (in.oracle.status != BilevelStatus::kOptimal || r.f < in.oracle.f - 1e-7) ++violations;
        if (M == 0.5 && in.oracle.status == BilevelStatus::kOptimal && r.f > in.oracle.f + 1e-7) ++flagged_small;
      } else if (r.status == BilevelStatus::kInfeasible) {
        if (M == 0.5 && in.oracle.status == BilevelStatus::kOptimal) ++flagged_small;
      } else {
        ++violations;
      }
    }
  }
  report(4, violations == 0 && limits == 0 && flagged_small >= 1,
         std::to_string(violations) + " dominance violations, " + std::to_string(limits) + " node limits, " +
             std::to_string(flagged_small) + " instances infeasible or suboptimal at M=0.5");
}

void criterion5(const std::vector<Instance>& batch) {
  int bad = 0, runs = 0;
  for (const Instance& in : batch) {
    ++runs;
    const auto& t = in.dbd.trace;
    bool ok = true;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i].UB > t[i - 1].UB || t[i].LB < t[i - 1].LB) ok = false;
    }
    if (in.dbd.status == BilevelStatus::kOptimal && !(in.dbd.state.UB - in.dbd.state.LB <= 1e-6)) ok = false;
    if (!ok) ++bad;
  }
  report(5, bad == 0, std::to_string(runs - bad) + "/" + std::to_string(runs) + " traces monotone and closed");
}

void criterion6(const std::vector<Instance>& batch) {
  std::int64_t pairs = 0, bad = 0;
  for (const Instance& in : batch) {
    for (const BinaryVector& u : patterns(in.p.num_binaries())) {
      const LpOutcome sp = solve_lp(build_sp(in.p, u));
      if (sp.status != LpStatus::kOptimal) continue;
      const LpOutcome pr = solve_lp(build_fixed_u_lp(in.p, u));
      if (pr.status != LpStatus::kOptimal) continue;
      ++pairs;
      if (std::abs(sp.objective - pr.objective) > 1e-8 * (1 + std::abs(pr.objective))) ++bad;
    }
  }
  report(6, bad == 0 && pairs > 0,
         std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " (instance, pattern) pairs in strong duality");
}

MilpModel random_milp(Rng& rng) {
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

std::optional<double> enumerate_milp(const MilpModel& m) {
  const double sign = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  std::optional<double> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.binaries.size()); ++mask) {
    LpModel lp = m;
    for (std::size_t b = 0; b < m.binaries.size(); ++b) {
      const auto col = static_cast<Eigen::Index>(m.binaries[b]);
      lp.lower[col] = lp.upper[col] = static_cast<double>((mask >> b) & 1U);
    }
    const LpOutcome o = solve_lp(lp);
    if (o.status == LpStatus::kOptimal && (!best || sign * o.objective < *best)) best = sign * o.objective;
  }
  return best;
}

// Feasible LP built around an interior point, with mixed senses and bounds.
LpModel random_feasible_lp(Rng& rng) {
  const int rows = rng.integer(1, 6);
  const int cols = rng.integer(1, 6);
  ModelBuilder b(rng.integer(0, 1) ? ObjectiveSense::kMinimize : ObjectiveSense::kMaximize);
  Eigen::VectorXd z0(cols);
  for (int j = 0; j < cols; ++j) {
    const double lo = rng.integer(0, 3) == 0 ? -kInf : rng.uniform(-2, 0);
    const double hi = rng.integer(0, 1) == 0 ? kInf : rng.uniform(0.5, 4);
    z0[j] = std::isfinite(lo) ? (std::isfinite(hi) ? 0.5 * (lo + hi) : lo + 1) : (std::isfinite(hi) ? hi - 1 : 0);
    b.add_col("z", lo, hi, rng.uniform(-3, 3));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<ModelBuilder::Term> t;
    double act = 0;
    for (int j = 0; j < cols; ++j) {
      const double a = rng.uniform(-4, 4);
      t.emplace_back(static_cast<std::size_t>(j), a);
      act += a * z0[j];
    }
    const int s = rng.integer(0, 2);
    const RowSense sense = s == 0 ? RowSense::kLessEqual : (s == 1 ? RowSense::kGreaterEqual : RowSense::kEqual);
    const double pad = sense == RowSense::kEqual ? 0 : rng.uniform(0, 2);
    b.add_row("r", t, sense, sense == RowSense::kGreaterEqual ? act - pad : act + pad);
  }
  return b.build_lp();
}

// |primal - dual| for an optimal outcome, using -b'pi + min_box(c + A'pi).
double duality_gap(const LpModel& m, const LpOutcome& o) {
  Eigen::MatrixXd a = m.rows;
  Eigen::VectorXd b = m.rhs, c = m.cost;
  if (m.sense == ObjectiveSense::kMaximize) c = -c;
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    if (m.row_sense[i] == RowSense::kGreaterEqual) {
      a.row(static_cast<Eigen::Index>(i)) *= -1.0;
      b[static_cast<Eigen::Index>(i)] *= -1.0;
    }
  }
  const Eigen::VectorXd d = c + a.transpose() * o.row_duals;
  double dual = -b.dot(o.row_duals);
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (std::abs(d[j]) <= 1e-10) continue;
    const double bound = d[j] > 0 ? m.lower[j] : m.upper[j];
    if (!std::isfinite(bound)) return kInf;
    dual += d[j] * bound;
  }
  const double primal = c.dot(o.primal);
  return std::abs(primal - dual) / (1 + std::abs(primal));
}

void criterion7() {
  Rng rng(20260);
  int milp_ok = 0, milp_total = 0;
  while (milp_total < 100) {
    const MilpModel m = random_milp(rng);
    ++milp_total;
    const std::optional<double> best = enumerate_milp(m);
    const MilpOutcome o = solve_milp(m);
    const double sign = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    if (!best) {
      if (o.status == MilpStatus::kInfeasible) ++milp_ok;
    } else if (o.status == MilpStatus::kOptimal && std::abs(sign * o.objective - *best) <= 1e-7) {
      ++milp_ok;
    }
  }
  int lp_ok = 0, lp_total = 0;
  double worst = 0;
  while (lp_total < 200) {
    const LpModel m = random_feasible_lp(rng);
    const LpOutcome o = solve_lp(m);
    if (o.status == LpStatus::kUnbounded) continue;
    ++lp_total;
    if (o.status != LpStatus::kOptimal) continue;
    const double gap = duality_gap(m, o);
    worst = std::max(worst, gap);
    if (gap <= 1e-8) ++lp_ok;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  report(7, milp_ok == 100 && lp_ok == 200,
         std::to_string(milp_ok) + "/100 MILPs equal enumeration, " + std::to_string(lp_ok) +
             "/200 feasible LPs within the duality-gap bound (worst " + buf + ")");
}

void criterion8(const std::vector<Instance>& batch,
                const std::map<double, std::vector<std::pair<int, std::int64_t>>>& nodes) {
  std::printf("INFO criterion 8: iteration counts and wall times of the original study are solver- and "
              "hardware-specific and are not reproduced; DBD iterations against our B&B node counts:\n");
  for (const auto& [M, runs] : nodes) {
    double sum = 0;
    int n = 0;
    for (const auto& [k, bb] : runs) {
      if (bb <= 0) continue;
      sum += 100.0 * (1.0 - static_cast<double>(batch[static_cast<std::size_t>(k)].dbd.iterations) /
                                static_cast<double>(bb));
      ++n;
    }
    std::printf("INFO criterion 8:   M=%g mean iteration reduction %.1f%% over %d instances\n", M,
                n ? sum / n : 0.0, n);
  }
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion1();
  criterion2();
  const std::vector<Instance> batch = criterion3();
  std::map<double, std::vector<std::pair<int, std::int64_t>>> nodes;
  criterion4(batch, nodes);
  criterion5(batch);
  criterion6(batch);
  criterion7();
  criterion8(batch, nodes);
  std::printf("acceptance finished in %.1f s, %d failing\n", seconds_since(t0), failures);
  return failures == 0 ? 0 : 1;
}
