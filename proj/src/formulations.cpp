#include "blp/formulations.hpp"

#include <string>

#include "blp/errors.hpp"

namespace blp {
namespace {

using Term = ModelBuilder::Term;

std::string idx(const char* base, Eigen::Index i) {
  return std::string(base) + "[" + std::to_string(i + 1) + "]";
}

void push_nonzero(std::vector<Term>& terms, std::size_t col, double coef) {
  if (coef != 0.0) terms.emplace_back(col, coef);
}

}  // namespace

void require_pattern(const BilevelProblem& p, const BinaryVector& u) {
  if (static_cast<int>(u.size()) != p.num_binaries()) {
    throw InvalidProblem("pattern has length " + std::to_string(u.size()) +
                         ", expected n_l + n_y = " + std::to_string(p.num_binaries()));
  }
  for (int v : u) {
    if (v != 0 && v != 1) throw InvalidProblem("pattern entries must be 0 or 1");
  }
}

UpperBlock upper_block(const BilevelProblem& p) {
  const int nxb = p.x_upper ? p.n_x : 0;
  const int nyb = p.y_upper ? p.n_y : 0;
  const int rows = p.n_u + nxb + nyb;
  UpperBlock b;
  b.C = Eigen::MatrixXd::Zero(rows, p.n_x);
  b.D = Eigen::MatrixXd::Zero(rows, p.n_y);
  b.E = Eigen::VectorXd::Zero(rows);
  b.C.topRows(p.n_u) = p.C;
  b.D.topRows(p.n_u) = p.D;
  b.E.head(p.n_u) = p.E;
  for (int j = 0; j < nxb; ++j) {
    b.C(p.n_u + j, j) = 1.0;
    b.E[p.n_u + j] = (*p.x_upper)[j];
  }
  for (int j = 0; j < nyb; ++j) {
    b.D(p.n_u + nxb + j, j) = 1.0;
    b.E[p.n_u + nxb + j] = (*p.y_upper)[j];
  }
  return b;
}

SpLayout::SpLayout(const BilevelProblem& p)
    : n_mu1(p.n_u + (p.x_upper ? p.n_x : 0) + (p.y_upper ? p.n_y : 0)),
      n_l(p.n_l),
      n_y(p.n_y) {
  mu1 = 0;
  mu2 = mu1 + static_cast<std::size_t>(n_mu1);
  mu3 = mu2 + static_cast<std::size_t>(n_l);
  nu1 = mu3 + static_cast<std::size_t>(n_y);
  nu2 = nu1 + static_cast<std::size_t>(n_l);
  gamma1 = nu2 + static_cast<std::size_t>(n_y);
  gamma2 = gamma1 + static_cast<std::size_t>(n_l);
  num_cols = gamma2 + static_cast<std::size_t>(n_y);
}

LpModel build_sp(const BilevelProblem& p, const BinaryVector& u) {
  require_valid(p);
  require_pattern(p, u);
  const UpperBlock up = upper_block(p);
  const SpLayout lay(p);
  ModelBuilder b(ObjectiveSense::kMaximize);

  for (int i = 0; i < lay.n_mu1; ++i) b.add_col(idx("mu1", i), 0.0, kInf, -up.E[i]);
  for (int i = 0; i < p.n_l; ++i) b.add_col(idx("mu2", i), 0.0, kInf, -p.N[i]);
  for (int j = 0; j < p.n_y; ++j) b.add_col(idx("mu3", j), 0.0, kInf, -p.G[j]);
  for (int i = 0; i < p.n_l; ++i) {
    b.add_col(idx("nu1", i), 0.0, u[static_cast<std::size_t>(i)] == 1 ? kInf : 0.0, p.N[i]);
  }
  for (int j = 0; j < p.n_y; ++j) {
    b.add_col(idx("nu2", j), 0.0,
              u[static_cast<std::size_t>(p.n_l + j)] == 1 ? kInf : 0.0, p.G[j]);
  }
  for (int i = 0; i < p.n_l; ++i) {
    b.add_col(idx("gamma1", i), 0.0, u[static_cast<std::size_t>(i)] == 0 ? kInf : 0.0);
  }
  for (int j = 0; j < p.n_y; ++j) {
    b.add_col(idx("gamma2", j), 0.0,
              u[static_cast<std::size_t>(p.n_l + j)] == 0 ? kInf : 0.0);
  }

  // Dual row of x_j: -mu1'C + (nu1 - mu2)'H <= A.
  for (int j = 0; j < p.n_x; ++j) {
    std::vector<Term> t;
    for (int i = 0; i < lay.n_mu1; ++i) push_nonzero(t, lay.mu1 + i, -up.C(i, j));
    for (int i = 0; i < p.n_l; ++i) {
      push_nonzero(t, lay.mu2 + i, -p.H(i, j));
      push_nonzero(t, lay.nu1 + i, p.H(i, j));
    }
    b.add_row(idx("x", j), std::move(t), RowSense::kLessEqual, p.A[j]);
  }
  // Dual row of y_j: -mu1'D + (nu1 - mu2)'J - gamma2 <= B.
  for (int j = 0; j < p.n_y; ++j) {
    std::vector<Term> t;
    for (int i = 0; i < lay.n_mu1; ++i) push_nonzero(t, lay.mu1 + i, -up.D(i, j));
    for (int i = 0; i < p.n_l; ++i) {
      push_nonzero(t, lay.mu2 + i, -p.J(i, j));
      push_nonzero(t, lay.nu1 + i, p.J(i, j));
    }
    t.emplace_back(lay.gamma2 + j, -1.0);
    b.add_row(idx("y", j), std::move(t), RowSense::kLessEqual, p.B[j]);
  }
  // Dual row of lambda_i: (J mu3)_i - (J nu2)_i - gamma1_i <= 0.
  for (int i = 0; i < p.n_l; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < p.n_y; ++j) {
      push_nonzero(t, lay.mu3 + j, p.J(i, j));
      push_nonzero(t, lay.nu2 + j, -p.J(i, j));
    }
    t.emplace_back(lay.gamma1 + i, -1.0);
    b.add_row(idx("lambda", i), std::move(t), RowSense::kLessEqual, 0.0);
  }
  return b.build_lp();
}

double sp_objective(const BilevelProblem& p, const Eigen::VectorXd& z) {
  const UpperBlock up = upper_block(p);
  const SpLayout lay(p);
  auto seg = [&](std::size_t off, int len) {
    return z.segment(static_cast<Eigen::Index>(off), len);
  };
  return -seg(lay.mu1, lay.n_mu1).dot(up.E) - seg(lay.mu2, p.n_l).dot(p.N) -
         seg(lay.mu3, p.n_y).dot(p.G) + seg(lay.nu1, p.n_l).dot(p.N) +
         seg(lay.nu2, p.n_y).dot(p.G);
}

double big_m_dual_objective(const BilevelProblem& p, const BinaryVector& u,
                            const Eigen::VectorXd& z, const Eigen::VectorXd& m1,
                            const Eigen::VectorXd& m2, const Eigen::VectorXd& m3,
                            const Eigen::VectorXd& m4) {
  const SpLayout lay(p);
  double value = sp_objective(p, z);
  for (int i = 0; i < p.n_l; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    value -= z[static_cast<Eigen::Index>(lay.nu1 + i)] * m1[i] * (1.0 - ui);
    value -= z[static_cast<Eigen::Index>(lay.gamma1 + i)] * m2[i] * ui;
  }
  for (int j = 0; j < p.n_y; ++j) {
    const double uj = u[static_cast<std::size_t>(p.n_l + j)];
    value -= z[static_cast<Eigen::Index>(lay.nu2 + j)] * m3[j] * (1.0 - uj);
    value -= z[static_cast<Eigen::Index>(lay.gamma2 + j)] * m4[j] * uj;
  }
  return value;
}

LpModel build_fixed_u_lp(const BilevelProblem& p, const BinaryVector& u) {
  require_valid(p);
  require_pattern(p, u);
  const UpperBlock up = upper_block(p);
  const PrimalLayout lay(p);
  ModelBuilder b(ObjectiveSense::kMinimize);

  for (int j = 0; j < p.n_x; ++j) b.add_col(idx("x", j), 0.0, kInf, p.A[j]);
  for (int j = 0; j < p.n_y; ++j) {
    b.add_col(idx("y", j), 0.0, u[static_cast<std::size_t>(p.n_l + j)] == 1 ? kInf : 0.0,
              p.B[j]);
  }
  for (int i = 0; i < p.n_l; ++i) {
    b.add_col(idx("lambda", i), 0.0, u[static_cast<std::size_t>(i)] == 1 ? kInf : 0.0);
  }

  auto leader_terms = [&](const Eigen::MatrixXd& cx, const Eigen::MatrixXd& dy,
                          Eigen::Index row, double sign) {
    std::vector<Term> t;
    for (int j = 0; j < p.n_x; ++j) push_nonzero(t, lay.x + j, sign * cx(row, j));
    for (int j = 0; j < p.n_y; ++j) push_nonzero(t, lay.y + j, sign * dy(row, j));
    return t;
  };

  for (Eigen::Index i = 0; i < up.E.size(); ++i) {
    b.add_row(idx("upper", i), leader_terms(up.C, up.D, i, 1.0), RowSense::kLessEqual,
              up.E[i]);
  }
  for (int i = 0; i < p.n_l; ++i) {
    b.add_row(idx("lower", i), leader_terms(p.H, p.J, i, 1.0), RowSense::kLessEqual,
              p.N[i]);
  }
  for (int j = 0; j < p.n_y; ++j) {
    std::vector<Term> t;
    for (int i = 0; i < p.n_l; ++i) push_nonzero(t, lay.lambda + i, -p.J(i, j));
    b.add_row(idx("dual_feas", j), std::move(t), RowSense::kLessEqual, p.G[j]);
  }
  for (int i = 0; i < p.n_l; ++i) {
    if (u[static_cast<std::size_t>(i)] != 1) continue;
    b.add_row(idx("active", i), leader_terms(p.H, p.J, i, -1.0), RowSense::kLessEqual,
              -p.N[i]);
  }
  for (int j = 0; j < p.n_y; ++j) {
    if (u[static_cast<std::size_t>(p.n_l + j)] != 1) continue;
    std::vector<Term> t;
    for (int i = 0; i < p.n_l; ++i) push_nonzero(t, lay.lambda + i, p.J(i, j));
    b.add_row(idx("red_cost", j), std::move(t), RowSense::kLessEqual, -p.G[j]);
  }
  return b.build_lp();
}

LpModel build_lower_level_lp(const BilevelProblem& p, const Eigen::VectorXd& x) {
  ModelBuilder b(ObjectiveSense::kMinimize);
  for (int j = 0; j < p.n_y; ++j) b.add_col(idx("y", j), 0.0, kInf, p.G[j]);
  const Eigen::VectorXd rhs = p.N - p.H * x;
  for (int i = 0; i < p.n_l; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < p.n_y; ++j) push_nonzero(t, static_cast<std::size_t>(j), p.J(i, j));
    b.add_row(idx("lower", i), std::move(t), RowSense::kLessEqual, rhs[i]);
  }
  return b.build_lp();
}

}  // namespace blp
