#include "blp/dbd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "blp/errors.hpp"
#include "blp/log.hpp"

namespace blp {
namespace {

std::string pattern_string(const BinaryVector& u) {
  std::string s;
  for (int b : u) s += static_cast<char>('0' + b);
  return s;
}

// Recession direction of the subproblem cone with positive objective, or
// nothing. Maximises h(w) over the homogeneous rows with sum(w) <= 1.
std::optional<Eigen::VectorXd> farkas_direction(const BilevelProblem& p, const LpModel& sp,
                                                const SimplexOptions& lp) {
  LpModel cone = sp;
  cone.rhs.setZero();
  const Eigen::Index r = cone.rows.rows();
  cone.rows.conservativeResize(r + 1, Eigen::NoChange);
  cone.rows.row(r).setOnes();
  cone.rhs.conservativeResize(r + 1);
  cone.rhs[r] = 1.0;
  cone.row_sense.push_back(RowSense::kLessEqual);
  cone.row_names.push_back("normalise");
  const LpOutcome out = solve_lp(cone, lp);
  if (out.status != LpStatus::kOptimal || out.objective <= 1e-9) return std::nullopt;
  Eigen::VectorXd w = out.primal;
  const double scale = w.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return std::nullopt;
  w /= scale;
  if (sp_objective(p, w) <= 0.0) return std::nullopt;
  return w;
}

bool genuine_ray(const BilevelProblem& p, const LpModel& sp, const Eigen::VectorXd& ray,
                 double tol) {
  if (sp_objective(p, ray) <= 0.0) return false;
  const Eigen::VectorXd a = sp.rows * ray;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > tol) return false;
  }
  for (Eigen::Index j = 0; j < ray.size(); ++j) {
    if (ray[j] < -tol || (sp.upper[j] == 0.0 && std::abs(ray[j]) > tol)) return false;
  }
  return true;
}

}  // namespace

const char* to_string(BilevelStatus s) {
  switch (s) {
    case BilevelStatus::kOptimal: return "Optimal";
    case BilevelStatus::kInfeasible: return "Infeasible";
    case BilevelStatus::kUnbounded: return "Unbounded";
    case BilevelStatus::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

void DbdState::add_point(PointCut cut) {
  auto pos = std::upper_bound(points.begin(), points.end(), cut.V,
                              [](double v, const PointCut& c) { return v < c.V; });
  points.insert(pos, std::move(cut));
}

PointCut extract_point_cut(const BilevelProblem& p, const Eigen::VectorXd& z,
                           const BinaryVector& u_hat, double value, double tol) {
  require_pattern(p, u_hat);
  const SpLayout lay(p);
  PointCut cut;
  cut.V = value;
  cut.origin = u_hat;
  for (int i = 0; i < lay.num_binaries(); ++i) {
    if (z[static_cast<Eigen::Index>(lay.nu(i))] > tol) cut.omega.push_back(i);
    if (z[static_cast<Eigen::Index>(lay.gamma(i))] > tol) cut.omega_prime.push_back(i);
  }
  return cut;
}

RayCut extract_ray_cut(const BilevelProblem& p, const Eigen::VectorXd& ray,
                       const BinaryVector& u_hat, double tol) {
  require_pattern(p, u_hat);
  const SpLayout lay(p);
  RayCut cut;
  cut.origin = u_hat;
  for (int i = 0; i < lay.num_binaries(); ++i) {
    if (ray[static_cast<Eigen::Index>(lay.nu(i))] > tol) cut.psi.push_back(i);
    if (ray[static_cast<Eigen::Index>(lay.gamma(i))] > tol) cut.psi_prime.push_back(i);
  }
  if (cut.psi.empty() && cut.psi_prime.empty()) {
    throw EmptyRayCut("ray has no nu or gamma component above " + std::to_string(tol));
  }
  return cut;
}

MilpModel build_master(const DbdState& s) {
  ModelBuilder b(ObjectiveSense::kMinimize);
  for (int i = 0; i < s.n; ++i) b.mark_binary(b.add_col("u" + std::to_string(i + 1), 0.0, 1.0));
  const std::size_t v0 = b.num_cols();
  b.mark_binary(b.add_col("v0", 0.0, 1.0, s.sentinel));
  for (int k = 0; k < s.K(); ++k) {
    b.mark_binary(b.add_col("v" + std::to_string(k + 1), 0.0, 1.0, s.points[static_cast<std::size_t>(k)].V));
  }
  const auto u = [](int i) { return static_cast<std::size_t>(i); };

  for (int k = 1; k <= s.K(); ++k) {
    const PointCut& c = s.points[static_cast<std::size_t>(k - 1)];
    std::vector<ModelBuilder::Term> t;
    for (int i : c.omega) t.emplace_back(u(i), 1.0);
    const double sign = s.form == PointCutForm::kComplemented ? -1.0 : 1.0;
    for (int i : c.omega_prime) t.emplace_back(u(i), sign);
    for (int kk = k; kk <= s.K(); ++kk) t.emplace_back(v0 + static_cast<std::size_t>(kk), -1.0);
    const double rhs = s.form == PointCutForm::kComplemented
                           ? static_cast<double>(c.omega.size()) - 1.0
                           : static_cast<double>(c.omega.size() + c.omega_prime.size()) - 1.0;
    b.add_row("point" + std::to_string(k), std::move(t), RowSense::kLessEqual, rhs);
  }
  for (int l = 0; l < s.L(); ++l) {
    const RayCut& c = s.rays[static_cast<std::size_t>(l)];
    std::vector<ModelBuilder::Term> t;
    for (int i : c.psi) t.emplace_back(u(i), 1.0);
    for (int i : c.psi_prime) t.emplace_back(u(i), -1.0);
    b.add_row("ray" + std::to_string(l + 1), std::move(t), RowSense::kLessEqual,
              static_cast<double>(c.psi.size()) - 1.0);
  }
  std::vector<ModelBuilder::Term> sel;
  for (int k = 0; k <= s.K(); ++k) sel.emplace_back(v0 + static_cast<std::size_t>(k), 1.0);
  b.add_row("select", std::move(sel), RowSense::kEqual, 1.0);
  return b.build_milp();
}

DbdResult run_dbd(const BilevelProblem& p, const DbdOptions& opts) {
  require_valid(p);
  const int n = p.num_binaries();
  DbdResult res;
  DbdState& s = res.state;
  s.n = n;
  s.sentinel = opts.sentinel;
  s.form = opts.point_cut_form;
  s.u_hat = opts.start_u.value_or(BinaryVector(static_cast<std::size_t>(n), 0));
  require_pattern(p, s.u_hat);
  const std::int64_t cap =
      opts.max_iterations.value_or(10LL * (std::int64_t{1} << std::min(n, 20)));

  auto finish = [&](BilevelStatus status) {
    res.status = status;
    res.trace = s.trace;
    if (!s.incumbent.empty() || (n == 0 && std::isfinite(s.UB))) {
      const LpOutcome lp = solve_lp(build_fixed_u_lp(p, s.incumbent), opts.lp);
      if (lp.status == LpStatus::kOptimal) {
        const PrimalLayout lay(p);
        res.x = lp.primal.segment(static_cast<Eigen::Index>(lay.x), p.n_x);
        res.y = lp.primal.segment(static_cast<Eigen::Index>(lay.y), p.n_y);
        res.u = s.incumbent;
        res.f = p.upper_objective(res.x, res.y);
        res.g = p.lower_objective(res.y);
      } else if (status == BilevelStatus::kOptimal) {
        throw NumericalBreakdown("single-level LP at the incumbent pattern did not solve to optimality");
      }
    }
    return res;
  };

  while (true) {
    if (res.iterations >= cap) return finish(BilevelStatus::kIterationLimit);
    ++res.iterations;
    const BinaryVector u = s.u_hat;
    const LpModel sp = build_sp(p, u);
    const RecoveredOutcome rec = solve_with_recovery(sp, opts.lp);
    const LpOutcome& o = rec.outcome;
    std::string sp_status;
    std::optional<Eigen::VectorXd> ray;

    if (rec.artificial_rows.empty()) {
      sp_status = o.status == LpStatus::kOptimal ? "OPT" : "UNB";
      if (o.status == LpStatus::kOptimal) {
        const PointCut cut = extract_point_cut(p, o.primal, u, o.objective, opts.tol);
        if (o.objective < s.UB) {
          s.UB = o.objective;
          s.incumbent = u;
        }
        s.add_point(cut);
      } else {
        ray = o.ray;
      }
    } else {
      sp_status = "INF";
      if (o.status == LpStatus::kUnbounded && rec.artificial_ray_mass <= opts.tol &&
          genuine_ray(p, sp, o.ray, opts.tol)) {
        ray = o.ray;
      } else {
        ray = farkas_direction(p, sp, opts.lp);
      }
      if (!ray) {
        // No dual ray: the single-level LP at u is feasible, hence unbounded.
        const LpOutcome primal = solve_lp(build_fixed_u_lp(p, u), opts.lp);
        if (primal.status == LpStatus::kUnbounded) {
          res.unbounded_suspect = true;
          s.trace.push_back({static_cast<int>(res.iterations), s.UB, s.LB, sp_status, s.K(), s.L(), u});
          res.status = BilevelStatus::kUnbounded;
          res.trace = s.trace;
          res.u = u;
          return res;
        }
        // Numerically borderline pattern: settle it from the primal side alone.
        PointCut exact;
        exact.origin = u;
        for (int i = 0; i < n; ++i) {
          (u[static_cast<std::size_t>(i)] ? exact.omega : exact.omega_prime).push_back(i);
        }
        if (primal.status == LpStatus::kOptimal) {
          exact.V = primal.objective;
          if (primal.objective < s.UB) {
            s.UB = primal.objective;
            s.incumbent = u;
          }
          s.add_point(std::move(exact));
        } else {
          s.rays.push_back({exact.omega, exact.omega_prime, u});
        }
      }
    }

    if (ray) {
      RayCut cut;
      try {
        cut = extract_ray_cut(p, *ray, u, opts.tol);
      } catch (const EmptyRayCut&) {
        // The ray certifies infeasibility for every pattern.
        s.trace.push_back({static_cast<int>(res.iterations), s.UB, s.LB, sp_status, s.K(), s.L(), u});
        return finish(BilevelStatus::kInfeasible);
      }
      s.rays.push_back(std::move(cut));
    }

    const MilpOutcome mp = solve_milp(build_master(s), opts.master);
    if (mp.status != MilpStatus::kOptimal) {
      s.trace.push_back({static_cast<int>(res.iterations), s.UB, s.LB, sp_status, s.K(), s.L(), u});
      return finish(std::isfinite(s.UB) ? BilevelStatus::kOptimal : BilevelStatus::kInfeasible);
    }
    BinaryVector next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      next[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(mp.incumbent[i]));
    }
    double lb = 0.0;
    for (int k = 0; k <= s.K(); ++k) {
      if (std::lround(mp.incumbent[n + k]) == 1) {
        lb += k == 0 ? s.sentinel : s.points[static_cast<std::size_t>(k - 1)].V;
      }
    }
    s.LB = lb;
    s.u_hat = next;
    s.trace.push_back({static_cast<int>(res.iterations), s.UB, s.LB, sp_status, s.K(), s.L(), u});
    logger().debug("iteration {} u={} sp={} UB={} LB={} K={} L={}", res.iterations,
                   pattern_string(u), sp_status, s.UB, s.LB, s.K(), s.L());
    if (s.UB - s.LB <= opts.epsilon) return finish(BilevelStatus::kOptimal);
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iteration,UB,LB,sp_status,K,L\n";
  char buf[64];
  for (const TraceRow& r : trace) {
    out << r.iteration << ',';
    std::snprintf(buf, sizeof buf, "%.12g", r.UB);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", r.LB);
    out << buf << ',' << r.sp_status << ',' << r.K << ',' << r.L << '\n';
  }
}

}  // namespace blp
