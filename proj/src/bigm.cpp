#include "blp/bigm.hpp"

#include <string>

#include "blp/errors.hpp"

namespace blp {
namespace {

using Term = ModelBuilder::Term;

std::string idx(const char* base, int i) {
  return std::string(base) + "[" + std::to_string(i + 1) + "]";
}

void push_nonzero(std::vector<Term>& t, std::size_t col, double coef) {
  if (coef != 0.0) t.emplace_back(col, coef);
}

}  // namespace

BigMConfig BigMConfig::uniform(const BilevelProblem& p, double m) {
  BigMConfig c;
  c.m1 = Eigen::VectorXd::Constant(p.n_l, m);
  c.m2 = Eigen::VectorXd::Constant(p.n_l, m);
  c.m3 = Eigen::VectorXd::Constant(p.n_y, m);
  c.m4 = Eigen::VectorXd::Constant(p.n_y, m);
  return c;
}

void BigMConfig::require_valid(const BilevelProblem& p) const {
  auto check = [](const Eigen::VectorXd& v, int len, const char* name) {
    if (v.size() != len) {
      throw InvalidProblem(std::string("big-M vector ") + name + " has wrong length");
    }
    if (len > 0 && !(v.array() > 0.0).all()) {
      throw InvalidProblem(std::string("big-M vector ") + name + " must be positive");
    }
    if (!v.allFinite()) {
      throw InvalidProblem(std::string("big-M vector ") + name + " must be finite");
    }
  };
  check(m1, p.n_l, "M1");
  check(m2, p.n_l, "M2");
  check(m3, p.n_y, "M3");
  check(m4, p.n_y, "M4");
}

BigMLayout::BigMLayout(const BilevelProblem& p)
    : x(0),
      y(static_cast<std::size_t>(p.n_x)),
      lambda(static_cast<std::size_t>(p.n_x + p.n_y)),
      u1(static_cast<std::size_t>(p.n_x + p.n_y + p.n_l)),
      u2(static_cast<std::size_t>(p.n_x + p.n_y + 2 * p.n_l)),
      num_cols(static_cast<std::size_t>(p.n_x + 2 * p.n_y + 2 * p.n_l)) {}

MilpModel build_bigm_milp(const BilevelProblem& p, const BigMConfig& m) {
  require_valid(p);
  m.require_valid(p);
  const BigMLayout lay(p);
  ModelBuilder b(ObjectiveSense::kMinimize);

  for (int j = 0; j < p.n_x; ++j) {
    b.add_col(idx("x", j), 0.0, p.x_upper ? (*p.x_upper)[j] : kInf, p.A[j]);
  }
  for (int j = 0; j < p.n_y; ++j) {
    b.add_col(idx("y", j), 0.0, p.y_upper ? (*p.y_upper)[j] : kInf, p.B[j]);
  }
  for (int i = 0; i < p.n_l; ++i) b.add_col(idx("lambda", i), 0.0, kInf);
  for (int i = 0; i < p.n_l; ++i) b.mark_binary(b.add_col(idx("u1", i), 0.0, 1.0));
  for (int j = 0; j < p.n_y; ++j) b.mark_binary(b.add_col(idx("u2", j), 0.0, 1.0));

  auto xy_terms = [&](const Eigen::MatrixXd& cx, const Eigen::MatrixXd& dy, int row,
                      double sign) {
    std::vector<Term> t;
    for (int j = 0; j < p.n_x; ++j) push_nonzero(t, lay.x + j, sign * cx(row, j));
    for (int j = 0; j < p.n_y; ++j) push_nonzero(t, lay.y + j, sign * dy(row, j));
    return t;
  };
  auto jt_lambda = [&](int j, double sign) {
    std::vector<Term> t;
    for (int i = 0; i < p.n_l; ++i) push_nonzero(t, lay.lambda + i, sign * p.J(i, j));
    return t;
  };

  for (int i = 0; i < p.n_u; ++i) {
    b.add_row(idx("upper", i), xy_terms(p.C, p.D, i, 1.0), RowSense::kLessEqual, p.E[i]);
  }
  for (int i = 0; i < p.n_l; ++i) {
    b.add_row(idx("lower", i), xy_terms(p.H, p.J, i, 1.0), RowSense::kLessEqual, p.N[i]);
  }
  for (int j = 0; j < p.n_y; ++j) {
    b.add_row(idx("dual_feas", j), jt_lambda(j, -1.0), RowSense::kLessEqual, p.G[j]);
  }
  // -Hx - Jy + M1 u1 <= M1 - N
  for (int i = 0; i < p.n_l; ++i) {
    auto t = xy_terms(p.H, p.J, i, -1.0);
    t.emplace_back(lay.u1 + i, m.m1[i]);
    b.add_row(idx("slack_off", i), std::move(t), RowSense::kLessEqual, m.m1[i] - p.N[i]);
  }
  // lambda - M2 u1 <= 0
  for (int i = 0; i < p.n_l; ++i) {
    b.add_row(idx("lambda_off", i), {{lay.lambda + i, 1.0}, {lay.u1 + i, -m.m2[i]}},
              RowSense::kLessEqual, 0.0);
  }
  // J'lambda + M3 u2 <= M3 - G
  for (int j = 0; j < p.n_y; ++j) {
    auto t = jt_lambda(j, 1.0);
    t.emplace_back(lay.u2 + j, m.m3[j]);
    b.add_row(idx("redcost_off", j), std::move(t), RowSense::kLessEqual, m.m3[j] - p.G[j]);
  }
  // y - M4 u2 <= 0
  for (int j = 0; j < p.n_y; ++j) {
    b.add_row(idx("y_off", j), {{lay.y + j, 1.0}, {lay.u2 + j, -m.m4[j]}},
              RowSense::kLessEqual, 0.0);
  }
  return b.build_milp();
}

}  // namespace blp
