#include "blp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blp/errors.hpp"

namespace blp {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

using Index = Eigen::Index;

// How a model column maps onto nonnegative standard-form columns.
enum class ColKind {
  kFixed,   // z = lower, no standard column
  kShift,   // z = lower + s
  kMirror,  // z = upper - s
  kSplit,   // z = s_plus - s_minus
};

struct ColMap {
  ColKind kind;
  Index std_col;
  double offset;
};

// min c's  s.t.  A s = b (b >= 0),  s >= 0, with an identity column (slack
// or artificial) in every row.
struct StandardForm {
  Index model_rows = 0;
  Index num_struct = 0;
  Index num_art = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;  // phase-2 cost, zero on slacks and artificials
  Eigen::VectorXd phase1_cost;
  std::vector<double> sigma;        // row sign flip applied to make b >= 0
  std::vector<Index> unit_col;      // identity column of each row
  std::vector<char> is_art;
  std::vector<Index> art_home_row;  // for artificial columns, their row
  std::vector<ColMap> colmap;

  // <=-normalised model rows in minimisation form.
  Eigen::MatrixXd norm_rows;
  Eigen::VectorXd norm_rhs;
  Eigen::VectorXd min_cost;

  Index num_cols() const { return a.cols(); }
};

StandardForm standardize(const LpModel& m) {
  StandardForm sf;
  const Index n = static_cast<Index>(m.num_cols());
  const Index mr = static_cast<Index>(m.num_rows());
  sf.model_rows = mr;

  sf.min_cost = m.sense == ObjectiveSense::kMinimize ? m.cost : Eigen::VectorXd(-m.cost);
  sf.norm_rows = mr > 0 ? m.rows : Eigen::MatrixXd::Zero(0, n);
  sf.norm_rhs = m.rhs;
  std::vector<char> is_eq(static_cast<std::size_t>(mr), 0);
  for (Index i = 0; i < mr; ++i) {
    const RowSense s = m.row_sense[static_cast<std::size_t>(i)];
    if (s == RowSense::kGreaterEqual) {
      sf.norm_rows.row(i) *= -1.0;
      sf.norm_rhs[i] *= -1.0;
    }
    is_eq[static_cast<std::size_t>(i)] = s == RowSense::kEqual;
  }

  // Column transforms.
  Index ns = 0;
  std::vector<Index> ub_rows_for;  // std col of each shifted column with a finite upper
  std::vector<double> ub_width;
  sf.colmap.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const double lo = m.lower[j], hi = m.upper[j];
    if (lo == hi) {
      sf.colmap.push_back({ColKind::kFixed, -1, lo});
    } else if (std::isfinite(lo)) {
      sf.colmap.push_back({ColKind::kShift, ns, lo});
      if (std::isfinite(hi)) {
        ub_rows_for.push_back(ns);
        ub_width.push_back(hi - lo);
      }
      ++ns;
    } else if (std::isfinite(hi)) {
      sf.colmap.push_back({ColKind::kMirror, ns++, hi});
    } else {
      sf.colmap.push_back({ColKind::kSplit, ns, 0.0});
      ns += 2;
    }
  }
  sf.num_struct = ns;

  const Index rows = mr + static_cast<Index>(ub_rows_for.size());
  Eigen::MatrixXd a_struct = Eigen::MatrixXd::Zero(rows, ns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd cost_struct = Eigen::VectorXd::Zero(ns);
  if (mr > 0) rhs.head(mr) = sf.norm_rhs;

  for (Index j = 0; j < n; ++j) {
    const ColMap& cm = sf.colmap[static_cast<std::size_t>(j)];
    const double cj = sf.min_cost[j];
    switch (cm.kind) {
      case ColKind::kFixed:
      case ColKind::kShift:
        if (mr > 0) rhs.head(mr) -= sf.norm_rows.col(j) * cm.offset;
        if (cm.kind == ColKind::kShift) {
          if (mr > 0) a_struct.col(cm.std_col).head(mr) = sf.norm_rows.col(j);
          cost_struct[cm.std_col] = cj;
        }
        break;
      case ColKind::kMirror:
        if (mr > 0) {
          rhs.head(mr) -= sf.norm_rows.col(j) * cm.offset;
          a_struct.col(cm.std_col).head(mr) = -sf.norm_rows.col(j);
        }
        cost_struct[cm.std_col] = -cj;
        break;
      case ColKind::kSplit:
        if (mr > 0) {
          a_struct.col(cm.std_col).head(mr) = sf.norm_rows.col(j);
          a_struct.col(cm.std_col + 1).head(mr) = -sf.norm_rows.col(j);
        }
        cost_struct[cm.std_col] = cj;
        cost_struct[cm.std_col + 1] = -cj;
        break;
    }
  }
  for (std::size_t k = 0; k < ub_rows_for.size(); ++k) {
    const Index r = mr + static_cast<Index>(k);
    a_struct(r, ub_rows_for[k]) = 1.0;
    rhs[r] = ub_width[k];
  }

  // Slacks on every inequality row; flip rows with negative rhs.
  std::vector<char> row_is_eq(static_cast<std::size_t>(rows), 0);
  for (Index i = 0; i < mr; ++i) row_is_eq[static_cast<std::size_t>(i)] = is_eq[static_cast<std::size_t>(i)];
  Index n_slack = 0;
  for (Index i = 0; i < rows; ++i) n_slack += row_is_eq[static_cast<std::size_t>(i)] ? 0 : 1;

  sf.sigma.assign(static_cast<std::size_t>(rows), 1.0);
  std::vector<Index> slack_of(static_cast<std::size_t>(rows), -1);
  std::vector<char> needs_art(static_cast<std::size_t>(rows), 0);
  Index next_slack = ns;
  for (Index i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!row_is_eq[ui]) slack_of[ui] = next_slack++;
    if (rhs[i] < 0.0) sf.sigma[ui] = -1.0;
    needs_art[ui] = row_is_eq[ui] || sf.sigma[ui] < 0.0;
    sf.num_art += needs_art[ui];
  }

  const Index total = ns + n_slack + sf.num_art;
  sf.a = Eigen::MatrixXd::Zero(rows, total);
  sf.a.leftCols(ns) = a_struct;
  sf.b = rhs;
  sf.unit_col.assign(static_cast<std::size_t>(rows), -1);
  sf.is_art.assign(static_cast<std::size_t>(total), 0);
  sf.art_home_row.assign(static_cast<std::size_t>(total), -1);
  Index next_art = ns + n_slack;
  for (Index i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (slack_of[ui] >= 0) sf.a(i, slack_of[ui]) = 1.0;
    sf.a.row(i) *= sf.sigma[ui];
    sf.b[i] *= sf.sigma[ui];
    if (needs_art[ui]) {
      sf.a(i, next_art) = 1.0;
      sf.unit_col[ui] = next_art;
      sf.is_art[static_cast<std::size_t>(next_art)] = 1;
      sf.art_home_row[static_cast<std::size_t>(next_art)] = i;
      ++next_art;
    } else {
      sf.unit_col[ui] = slack_of[ui];
    }
  }
  sf.cost = Eigen::VectorXd::Zero(total);
  sf.cost.head(ns) = cost_struct;
  sf.phase1_cost = Eigen::VectorXd::Zero(total);
  for (Index j = 0; j < total; ++j) {
    if (sf.is_art[static_cast<std::size_t>(j)]) sf.phase1_cost[j] = 1.0;
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const SimplexOptions& opts)
      : sf_(sf), opts_(opts), basis_(sf.unit_col) {
    in_basis_.assign(static_cast<std::size_t>(sf.num_cols()), 0);
    for (Index c : basis_) in_basis_[static_cast<std::size_t>(c)] = 1;
    tableau_ = sf.a;
    beta_ = sf.b;
  }

  enum class PhaseResult { kOptimal, kUnbounded };

  PhaseResult run_phase(const Eigen::VectorXd& cost, Index& entering_out) {
    int degenerate_run = 0;
    int since_refactor = 0;
    int weak_pivots = 0;
    bool bland = opts_.bland_after <= 0;
    const Index rows = tableau_.rows();
    const Index cols = tableau_.cols();
    while (true) {
      const Eigen::VectorXd d = reduced_costs(cost);
      Index q = -1;
      double best = -opts_.optimality_tol;
      for (Index j = 0; j < cols; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)] || sf_.is_art[static_cast<std::size_t>(j)]) {
          continue;
        }
        if (bland) {
          if (d[j] < -opts_.optimality_tol) {
            q = j;
            break;
          }
        } else if (d[j] < best) {
          best = d[j];
          q = j;
        }
      }
      if (q < 0) {
        if (since_refactor > 0) {
          refactor();
          since_refactor = 0;
          continue;
        }
        return PhaseResult::kOptimal;
      }

      Index r = -1;
      double best_ratio = kInf;
      double best_pivot = 0.0;
      for (Index i = 0; i < rows; ++i) {
        const double a = tableau_(i, q);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = std::max(beta_[i], 0.0) / a;
        const double tie = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
        bool take = false;
        if (ratio < best_ratio - tie) {
          take = true;
        } else if (ratio <= best_ratio + tie) {
          if (bland) {
            take = basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)];
          } else {
            take = a > best_pivot;
          }
        }
        if (take) {
          r = i;
          best_ratio = ratio;
          best_pivot = a;
        }
      }
      if (r < 0) {
        if (since_refactor > 0) {
          refactor();
          since_refactor = 0;
          continue;
        }
        entering_out = q;
        return PhaseResult::kUnbounded;
      }

      pivot(r, q);
      ++pivots_;
      ++since_refactor;
      if (static_cast<int>(pivots_) > opts_.max_pivots) {
        throw NumericalBreakdown("simplex pivot limit reached (" +
                                 std::to_string(opts_.max_pivots) + ")");
      }
      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
      if (degenerate_run >= opts_.bland_after) bland = true;
      if (best_pivot < 1e-9) {
        if (++weak_pivots > 50) {
          throw NumericalBreakdown("repeated pivots below 1e-9 in magnitude");
        }
        refactor();
        since_refactor = 0;
      } else if (since_refactor >= opts_.refactor_every) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  // Pivot basic artificials sitting at zero out of the basis where possible.
  void drive_out_artificials() {
    for (Index i = 0; i < tableau_.rows(); ++i) {
      if (!sf_.is_art[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])]) continue;
      Index best = -1;
      double mag = 1e-9;
      for (Index j = 0; j < tableau_.cols(); ++j) {
        if (sf_.is_art[static_cast<std::size_t>(j)] || in_basis_[static_cast<std::size_t>(j)]) {
          continue;
        }
        if (std::abs(tableau_(i, j)) > mag) {
          mag = std::abs(tableau_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
        ++pivots_;
      }
    }
    refactor();
  }

  void refactor() {
    const Index rows = tableau_.rows();
    if (rows == 0) return;
    Eigen::MatrixXd basis_mat(rows, rows);
    for (Index i = 0; i < rows; ++i) basis_mat.col(i) = sf_.a.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
    if (!lu.isInvertible()) throw NumericalBreakdown("singular basis during refactorisation");
    tableau_ = lu.solve(sf_.a);
    beta_ = lu.solve(sf_.b);
    for (Index i = 0; i < rows; ++i) {
      tableau_.col(basis_[static_cast<std::size_t>(i)]).setZero();
      tableau_(i, basis_[static_cast<std::size_t>(i)]) = 1.0;
      if (beta_[i] < 0.0 && beta_[i] > -opts_.feasibility_tol) beta_[i] = 0.0;
    }
  }

  // y = B^{-T} c_B.
  Eigen::VectorXd row_prices(const Eigen::VectorXd& cost) const {
    const Index rows = tableau_.rows();
    if (rows == 0) return Eigen::VectorXd::Zero(0);
    Eigen::MatrixXd bt(rows, rows);
    Eigen::VectorXd cb(rows);
    for (Index i = 0; i < rows; ++i) {
      bt.row(i) = sf_.a.col(basis_[static_cast<std::size_t>(i)]).transpose();
      cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    }
    return Eigen::FullPivLU<Eigen::MatrixXd>(bt).solve(cb);
  }

  Eigen::VectorXd reduced_costs(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(tableau_.rows());
    for (Index i = 0; i < tableau_.rows(); ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    Eigen::VectorXd d = cost;
    if (tableau_.rows() > 0) d.noalias() -= tableau_.transpose() * cb;
    for (Index c : basis_) d[c] = 0.0;
    return d;
  }

  Eigen::VectorXd std_point() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(tableau_.cols());
    for (Index i = 0; i < tableau_.rows(); ++i) {
      s[basis_[static_cast<std::size_t>(i)]] = std::max(beta_[i], 0.0);
    }
    return s;
  }

  // Direction of the unbounded edge along entering column q.
  Eigen::VectorXd std_ray(Index q) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(tableau_.cols());
    d[q] = 1.0;
    for (Index i = 0; i < tableau_.rows(); ++i) {
      d[basis_[static_cast<std::size_t>(i)]] = -tableau_(i, q);
    }
    return d;
  }

  double basic_artificial_mass() const {
    double mass = 0.0;
    for (Index i = 0; i < tableau_.rows(); ++i) {
      if (sf_.is_art[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])]) {
        mass += std::max(beta_[i], 0.0);
      }
    }
    return mass;
  }

  std::vector<std::size_t> positive_artificial_rows(double tol) const {
    std::vector<std::size_t> out;
    for (Index i = 0; i < tableau_.rows(); ++i) {
      const Index c = basis_[static_cast<std::size_t>(i)];
      if (sf_.is_art[static_cast<std::size_t>(c)] && beta_[i] > tol) {
        const Index home = sf_.art_home_row[static_cast<std::size_t>(c)];
        if (home < sf_.model_rows) out.push_back(static_cast<std::size_t>(home));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(Index r, Index q) {
    const double piv = tableau_(r, q);
    tableau_.row(r) /= piv;
    beta_[r] /= piv;
    Eigen::VectorXd col = tableau_.col(q);
    col[r] = 0.0;
    tableau_.noalias() -= col * tableau_.row(r);
    beta_.noalias() -= col * beta_[r];
    tableau_.col(q).setZero();
    tableau_(r, q) = 1.0;
    in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 0;
    basis_[static_cast<std::size_t>(r)] = q;
    in_basis_[static_cast<std::size_t>(q)] = 1;
  }

  const StandardForm& sf_;
  const SimplexOptions& opts_;
  std::vector<Index> basis_;
  std::vector<char> in_basis_;
  Eigen::MatrixXd tableau_;
  Eigen::VectorXd beta_;
  std::size_t pivots_ = 0;
};

Eigen::VectorXd to_model_point(const StandardForm& sf, const Eigen::VectorXd& s) {
  Eigen::VectorXd z(static_cast<Index>(sf.colmap.size()));
  for (std::size_t j = 0; j < sf.colmap.size(); ++j) {
    const ColMap& cm = sf.colmap[j];
    const auto jj = static_cast<Index>(j);
    switch (cm.kind) {
      case ColKind::kFixed: z[jj] = cm.offset; break;
      case ColKind::kShift: z[jj] = cm.offset + s[cm.std_col]; break;
      case ColKind::kMirror: z[jj] = cm.offset - s[cm.std_col]; break;
      case ColKind::kSplit: z[jj] = s[cm.std_col] - s[cm.std_col + 1]; break;
    }
  }
  return z;
}

Eigen::VectorXd to_model_direction(const StandardForm& sf, const Eigen::VectorXd& s) {
  Eigen::VectorXd d(static_cast<Index>(sf.colmap.size()));
  for (std::size_t j = 0; j < sf.colmap.size(); ++j) {
    const ColMap& cm = sf.colmap[j];
    const auto jj = static_cast<Index>(j);
    switch (cm.kind) {
      case ColKind::kFixed: d[jj] = 0.0; break;
      case ColKind::kShift: d[jj] = s[cm.std_col]; break;
      case ColKind::kMirror: d[jj] = -s[cm.std_col]; break;
      case ColKind::kSplit: d[jj] = s[cm.std_col] - s[cm.std_col + 1]; break;
    }
  }
  return d;
}

// Row multipliers pi_i = -sigma_i y_i on the model rows.
Eigen::VectorXd model_row_multipliers(const StandardForm& sf, const Eigen::VectorXd& y) {
  Eigen::VectorXd pi(sf.model_rows);
  for (Index i = 0; i < sf.model_rows; ++i) {
    pi[i] = -sf.sigma[static_cast<std::size_t>(i)] * y[i];
  }
  return pi;
}

}  // namespace

LpOutcome solve_lp(const LpModel& m, const SimplexOptions& opts) {
  if (const std::string err = m.check(); !err.empty()) {
    throw InvalidProblem("malformed LP: " + err);
  }
  const StandardForm sf = standardize(m);
  Simplex sx(sf, opts);
  LpOutcome out;
  Index entering = -1;

  if (sf.num_art > 0) {
    sx.run_phase(sf.phase1_cost, entering);
    sx.refactor();
    const double scale = 1.0 + (sf.b.size() > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);
    out.phase1_objective = sx.basic_artificial_mass();
    if (out.phase1_objective > opts.feasibility_tol * scale) {
      out.status = LpStatus::kInfeasible;
      out.farkas = model_row_multipliers(sf, sx.row_prices(sf.phase1_cost));
      out.infeasible_rows = sx.positive_artificial_rows(opts.feasibility_tol);
      out.pivots = sx.pivots();
      return out;
    }
    sx.drive_out_artificials();
  }

  const auto result = sx.run_phase(sf.cost, entering);
  out.pivots = sx.pivots();
  out.primal = to_model_point(sf, sx.std_point());
  out.objective = m.cost.dot(out.primal);
  if (result == Simplex::PhaseResult::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    Eigen::VectorXd ray = to_model_direction(sf, sx.std_ray(entering));
    const double norm = ray.size() > 0 ? ray.cwiseAbs().maxCoeff() : 0.0;
    if (norm > 0.0) ray /= norm;
    for (Index j = 0; j < ray.size(); ++j) {
      if (std::abs(ray[j]) < 1e-14) ray[j] = 0.0;
    }
    const double gain = sf.min_cost.dot(ray);
    if (!(gain < 0.0)) {
      throw NumericalBreakdown("unbounded edge does not improve the objective");
    }
    out.ray = std::move(ray);
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.row_duals = model_row_multipliers(sf, sx.row_prices(sf.cost));
  out.reduced_costs = sf.min_cost;
  if (sf.model_rows > 0) out.reduced_costs.noalias() += sf.norm_rows.transpose() * out.row_duals;
  return out;
}

RecoveredOutcome solve_with_recovery(const LpModel& m, const SimplexOptions& opts) {
  RecoveredOutcome rec;
  rec.outcome = solve_lp(m, opts);
  if (rec.outcome.status != LpStatus::kInfeasible) return rec;
  if (rec.outcome.infeasible_rows.empty()) {
    throw NumericalBreakdown("infeasible model but no row carries a positive artificial");
  }
  rec.artificial_rows = rec.outcome.infeasible_rows;

  const Index n = static_cast<Index>(m.num_cols());
  const Index extra = 2 * static_cast<Index>(rec.artificial_rows.size());
  LpModel relaxed = m;
  relaxed.cost.conservativeResize(n + extra);
  relaxed.lower.conservativeResize(n + extra);
  relaxed.upper.conservativeResize(n + extra);
  relaxed.rows.conservativeResize(Eigen::NoChange, n + extra);
  relaxed.rows.rightCols(extra).setZero();
  const double penalty = m.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (std::size_t k = 0; k < rec.artificial_rows.size(); ++k) {
    const Index s = n + 2 * static_cast<Index>(k);
    const auto r = static_cast<Index>(rec.artificial_rows[k]);
    relaxed.rows(r, s) = 1.0;
    relaxed.rows(r, s + 1) = -1.0;
    for (Index c : {s, s + 1}) {
      relaxed.cost[c] = penalty;
      relaxed.lower[c] = 0.0;
      relaxed.upper[c] = kInf;
    }
    relaxed.col_names.push_back("s[" + std::to_string(r + 1) + "]");
    relaxed.col_names.push_back("t[" + std::to_string(r + 1) + "]");
  }

  LpOutcome full = solve_lp(relaxed, opts);
  rec.outcome.status = full.status;
  rec.outcome.pivots += full.pivots;
  rec.outcome.objective = full.objective;
  rec.outcome.row_duals = full.row_duals;
  if (full.status == LpStatus::kInfeasible) {
    rec.outcome.farkas = full.farkas;
    return rec;
  }
  rec.outcome.primal = full.primal.head(n);
  rec.artificial_mass = full.primal.tail(extra).sum();
  if (full.status == LpStatus::kOptimal) {
    rec.outcome.reduced_costs = full.reduced_costs.head(n);
  } else {
    rec.outcome.ray = full.ray.head(n);
    rec.artificial_ray_mass = full.ray.tail(extra).cwiseAbs().sum();
  }
  return rec;
}

}  // namespace blp
