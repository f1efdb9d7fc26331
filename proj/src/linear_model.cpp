#include "blp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blp {

std::string LpModel::check() const {
  const auto n = cost.size();
  std::ostringstream err;
  if (rows.cols() != n && rows.rows() > 0) {
    err << "constraint matrix has " << rows.cols() << " columns, expected " << n;
  } else if (lower.size() != n || upper.size() != n) {
    err << "bound vectors do not match column count " << n;
  } else if (rhs.size() != rows.rows() ||
             row_sense.size() != static_cast<std::size_t>(rows.rows())) {
    err << "row data sizes disagree";
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
          lower[j] == kInf || upper[j] == -kInf) {
        err << "column " << j << " has invalid bounds [" << lower[j] << ", "
            << upper[j] << "]";
        break;
      }
      if (!std::isfinite(cost[j])) {
        err << "column " << j << " has non-finite cost";
        break;
      }
    }
    if (err.tellp() == 0 && (!rows.allFinite() || !rhs.allFinite())) {
      err << "constraint data contains non-finite values";
    }
  }
  return err.str();
}

std::string MilpModel::check() const {
  std::string base = LpModel::check();
  if (!base.empty()) return base;
  for (std::size_t j : binaries) {
    if (j >= num_cols()) return "binary index " + std::to_string(j) + " out of range";
    const auto jj = static_cast<Eigen::Index>(j);
    if (lower[jj] < 0.0 || upper[jj] > 1.0) {
      return "binary column " + std::to_string(j) + " has bounds outside [0, 1]";
    }
  }
  return {};
}

std::size_t ModelBuilder::add_col(std::string name, double lower, double upper,
                                  double cost) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  col_names_.push_back(std::move(name));
  return cost_.size() - 1;
}

std::size_t ModelBuilder::add_row(std::string name, std::vector<Term> terms,
                                  RowSense sense, double rhs) {
  row_terms_.push_back(std::move(terms));
  row_sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return row_terms_.size() - 1;
}

LpModel ModelBuilder::build_lp() const {
  LpModel m;
  const auto n = static_cast<Eigen::Index>(cost_.size());
  const auto r = static_cast<Eigen::Index>(row_terms_.size());
  m.sense = sense_;
  m.cost = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n);
  m.lower = Eigen::Map<const Eigen::VectorXd>(lower_.data(), n);
  m.upper = Eigen::Map<const Eigen::VectorXd>(upper_.data(), n);
  m.rhs = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), r);
  m.rows = Eigen::MatrixXd::Zero(r, n);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (const auto& [col, coef] : row_terms_[static_cast<std::size_t>(i)]) {
      m.rows(i, static_cast<Eigen::Index>(col)) += coef;
    }
  }
  m.row_sense = row_sense_;
  m.row_names = row_names_;
  m.col_names = col_names_;
  return m;
}

MilpModel ModelBuilder::build_milp() const {
  MilpModel m;
  static_cast<LpModel&>(m) = build_lp();
  m.binaries = binaries_;
  std::sort(m.binaries.begin(), m.binaries.end());
  m.binaries.erase(std::unique(m.binaries.begin(), m.binaries.end()),
                   m.binaries.end());
  return m;
}

Eigen::VectorXd row_activity(const LpModel& m, const Eigen::VectorXd& z) {
  if (m.rows.rows() == 0) return Eigen::VectorXd::Zero(0);
  return m.rows * z;
}

double max_primal_violation(const LpModel& m, const Eigen::VectorXd& z) {
  double worst = 0.0;
  const Eigen::VectorXd act = row_activity(m, z);
  for (Eigen::Index i = 0; i < act.size(); ++i) {
    const double d = act[i] - m.rhs[i];
    switch (m.row_sense[static_cast<std::size_t>(i)]) {
      case RowSense::kLessEqual: worst = std::max(worst, d); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, -d); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(d)); break;
    }
  }
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    worst = std::max({worst, m.lower[j] - z[j], z[j] - m.upper[j]});
  }
  return worst;
}

}  // namespace blp
