#include "blp/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "blp/errors.hpp"
#include "blp/formulations.hpp"
#include "blp/random_case.hpp"

namespace blp {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double gap_pct(double f, double ref) { return 100.0 * (f - ref) / std::max(1.0, std::abs(ref)); }

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void grade(ComparisonRow& row, BilevelStatus status, BilevelStatus ref_status, double ref_f,
           double tol) {
  if (ref_status == BilevelStatus::kOptimal && status == BilevelStatus::kOptimal) {
    row.gap_pct = gap_pct(row.f, ref_f);
    row.agrees = std::abs(row.f - ref_f) <= tol;
    row.suboptimal = row.f - ref_f > tol;
  } else {
    row.agrees = status == ref_status;
  }
  row.infeasible = status == BilevelStatus::kInfeasible && ref_status != BilevelStatus::kInfeasible;
}

}  // namespace

DbdResult solve_bigm(const BilevelProblem& p, const BigMConfig& m, const MilpOptions& opts) {
  require_valid(p);
  m.require_valid(p);
  const MilpOutcome out = solve_milp(build_bigm_milp(p, m), opts);
  const BigMLayout lay(p);
  DbdResult r;
  r.iterations = static_cast<std::int64_t>(out.node_count);
  if (out.status == MilpStatus::kInfeasible) {
    r.status = BilevelStatus::kInfeasible;
    return r;
  }
  r.status = out.status == MilpStatus::kOptimal ? BilevelStatus::kOptimal : BilevelStatus::kUnbounded;
  r.x = out.incumbent.segment(static_cast<Eigen::Index>(lay.x), p.n_x);
  r.y = out.incumbent.segment(static_cast<Eigen::Index>(lay.y), p.n_y);
  r.u.resize(static_cast<std::size_t>(p.num_binaries()));
  for (int i = 0; i < p.num_binaries(); ++i) {
    r.u[static_cast<std::size_t>(i)] =
        static_cast<int>(std::lround(out.incumbent[static_cast<Eigen::Index>(lay.u(i))]));
  }
  if (r.status == BilevelStatus::kOptimal) {
    r.f = p.upper_objective(r.x, r.y);
    r.g = p.lower_objective(r.y);
  }
  return r;
}

OracleResult enumerate_oracle(const BilevelProblem& p, const SimplexOptions& lp, int max_binaries) {
  require_valid(p);
  const int n = p.num_binaries();
  if (n > std::min(max_binaries, kOracleCap)) {
    throw CapExceeded("enumeration needs 2^" + std::to_string(n) + " patterns; cap is 2^" +
                      std::to_string(std::min(max_binaries, kOracleCap)));
  }
  OracleResult r;
  const std::uint64_t total = std::uint64_t{1} << n;
  BinaryVector u(static_cast<std::size_t>(n));
  const PrimalLayout lay(p);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = static_cast<int>((mask >> (n - 1 - i)) & 1U);
    const LpOutcome out = solve_lp(build_fixed_u_lp(p, u), lp);
    ++r.patterns;
    if (out.status == LpStatus::kUnbounded) {
      r.unbounded_suspect = true;
      r.status = BilevelStatus::kUnbounded;
      r.u = u;
      r.f = -std::numeric_limits<double>::infinity();
      r.g = std::numeric_limits<double>::quiet_NaN();
      r.x = r.y = Eigen::VectorXd();
      return r;
    }
    if (out.status != LpStatus::kOptimal) continue;
    ++r.optimal_patterns;
    if (out.objective < best) {
      best = out.objective;
      r.status = BilevelStatus::kOptimal;
      r.u = u;
      r.x = out.primal.segment(static_cast<Eigen::Index>(lay.x), p.n_x);
      r.y = out.primal.segment(static_cast<Eigen::Index>(lay.y), p.n_y);
    }
  }
  if (r.status == BilevelStatus::kOptimal) {
    r.f = p.upper_objective(r.x, r.y);
    r.g = p.lower_objective(r.y);
  }
  return r;
}

const ComparisonRow* ComparisonReport::find(const std::string& algorithm, double M) const {
  for (const ComparisonRow& r : rows) {
    if (r.algorithm != algorithm) continue;
    if (std::isnan(M) ? std::isnan(r.M) : r.M == M) return &r;
  }
  return nullptr;
}

double ComparisonReport::iteration_reduction_pct(double M) const {
  const ComparisonRow* d = find("dbd");
  const ComparisonRow* b = find("bigm", M);
  if (!d || !b || b->iterations <= 0) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (1.0 - static_cast<double>(d->iterations) / static_cast<double>(b->iterations));
}

ComparisonReport compare(const BilevelProblem& p, const std::vector<double>& big_m_values,
                         const CompareOptions& opts, std::uint64_t seed) {
  ComparisonReport rep;
  rep.seed = seed;
  rep.dims = {p.n_x, p.n_y, p.n_u, p.n_l};

  if (opts.run_oracle) {
    const auto t0 = Clock::now();
    OracleResult o = enumerate_oracle(p, opts.dbd.lp);
    ComparisonRow row;
    row.algorithm = "oracle";
    row.status = to_string(o.status);
    row.f = o.f;
    row.g = o.g;
    row.iterations = o.patterns;
    row.wall_ms = elapsed_ms(t0);
    row.agrees = true;
    if (o.status == BilevelStatus::kOptimal) row.gap_pct = 0.0;
    rep.unbounded_suspect = o.unbounded_suspect;
    rep.oracle = std::move(o);
    rep.rows.push_back(row);
  }

  const auto t0 = Clock::now();
  const DbdResult d = run_dbd(p, opts.dbd);
  ComparisonRow drow;
  drow.algorithm = "dbd";
  drow.status = to_string(d.status);
  drow.f = d.f;
  drow.g = d.g;
  drow.iterations = d.iterations;
  drow.wall_ms = elapsed_ms(t0);
  rep.unbounded_suspect = rep.unbounded_suspect || d.unbounded_suspect;

  BilevelStatus ref_status = d.status;
  double ref_f = d.f;
  if (rep.oracle) {
    ref_status = rep.oracle->status;
    ref_f = rep.oracle->f;
    grade(drow, d.status, ref_status, ref_f, opts.agree_tol);
  } else {
    drow.agrees = true;
    if (d.status == BilevelStatus::kOptimal) drow.gap_pct = 0.0;
  }
  rep.rows.push_back(drow);

  for (double M : big_m_values) {
    ComparisonRow row;
    row.algorithm = "bigm";
    row.M = M;
    const auto t1 = Clock::now();
    try {
      const DbdResult b = solve_bigm(p, BigMConfig::uniform(p, M), opts.milp);
      row.status = to_string(b.status);
      row.f = b.f;
      row.g = b.g;
      row.iterations = b.iterations;
      row.wall_ms = elapsed_ms(t1);
      grade(row, b.status, ref_status, ref_f, opts.agree_tol);
    } catch (const NodeLimitExceeded&) {
      row.status = "NodeLimit";
      row.wall_ms = elapsed_ms(t1);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<ComparisonReport> run_batch(const BatchConfig& cfg) {
  std::vector<ComparisonReport> accepted;
  std::uint64_t next_seed = cfg.first_seed;
  const int jobs = std::max(1, cfg.jobs);
  while (static_cast<int>(accepted.size()) < cfg.count) {
    const int need = cfg.count - static_cast<int>(accepted.size());
    std::vector<ComparisonReport> block(static_cast<std::size_t>(need));
    std::atomic<int> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (int i = cursor++; i < need; i = cursor++) {
        try {
          const std::uint64_t seed = next_seed + static_cast<std::uint64_t>(i);
          const BilevelProblem p =
              gen_random_case(cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.dims[3], seed);
          block[static_cast<std::size_t>(i)] = compare(p, cfg.big_m_values, cfg.compare, seed);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::min(jobs, need); ++j) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    for (ComparisonReport& r : block) {
      if (!r.unbounded_suspect) accepted.push_back(std::move(r));
    }
    next_seed += static_cast<std::uint64_t>(need);
  }
  return accepted;
}

void write_report_csv(std::ostream& out, const std::vector<ComparisonReport>& reports) {
  out << "seed,algorithm,M,status,f,g,iterations,wall_ms,gap_pct\n";
  for (const ComparisonReport& rep : reports) {
    for (const ComparisonRow& r : rep.rows) {
      out << rep.seed << ',' << r.algorithm << ',' << fmt(r.M) << ',' << r.status << ','
          << fmt(r.f) << ',' << fmt(r.g) << ',' << r.iterations << ',' << fmt(r.wall_ms) << ','
          << fmt(r.gap_pct) << '\n';
    }
  }
}

std::string write_oracle_fixtures(const std::vector<OracleFixture>& fixtures) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const OracleFixture& fx : fixtures) {
    nlohmann::ordered_json o;
    o["seed"] = fx.seed;
    o["dims"] = fx.dims;
    o["f"] = fx.f;
    o["u"] = fx.u;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<OracleFixture> read_oracle_fixtures(const std::string& text) {
  std::vector<OracleFixture> out;
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw ParseError("<document>", "expected a JSON array");
    for (const auto& o : arr) {
      OracleFixture fx;
      fx.seed = o.at("seed").get<std::uint64_t>();
      fx.dims = o.at("dims").get<std::array<int, 4>>();
      fx.f = o.at("f").get<double>();
      fx.u = o.at("u").get<BinaryVector>();
      out.push_back(std::move(fx));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<fixtures>", e.what());
  }
  return out;
}

const std::vector<LiteratureProblem>& literature_catalog() {
  static const std::vector<LiteratureProblem> catalog = {
      {"P1", "Bard & Falk 1982", 2, 3, 2, 6, -26.0, 3.2, {0, 0.9}, {0, 0.6, 0.4}},
      {"P2", "Bard & Falk 1982", 2, 2, 2, 5, -3.25, -4.0, {2, 0}, {1.5, 0}},
      {"P3", "Candler & Townsley 1982", 2, 6, 2, 6, -29.2, 3.2, {0, 0.9}, {0, 0.6, 0.4, 0, 0, 0}},
      {"P4", "Anandalingam & White 1990", 1, 1, 1, 6, -49.0, 17.0, {16}, {11}},
      {"P5", "Bard 1991", 1, 2, 1, 5, -1.0, 0.0, {1}, {0, 0}},
      {"P6", "Bard 1998", 1, 2, 1, 5, -2.0, -1.0, {0}, {0, 1}},
      {"P7", "Clark & Westerberg 1990", 1, 2, 1, 5, -13.0, -4.0, {5}, {4, 2}},
      {"P8", "Colson 2002", 2, 3, 1, 3, -14.6, 0.3, {0, 0.65}, {0, 0.3, 0}},
  };
  return catalog;
}

}  // namespace blp
