#include "blp/problem.hpp"

#include <sstream>

#include "blp/errors.hpp"

namespace blp {
namespace {

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.data()[i] != b.data()[i]) return false;
  }
  return true;
}

bool same_optional(const std::optional<Eigen::VectorXd>& a,
                   const std::optional<Eigen::VectorXd>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_bits(*a, *b);
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void dims(const std::string& field, Eigen::Index rows, Eigen::Index cols,
            int want_rows, int want_cols) {
    if (rows != want_rows || cols != want_cols) {
      std::ostringstream msg;
      msg << field << " has shape " << rows << "x" << cols << ", expected "
          << want_rows << "x" << want_cols;
      report_.violations.push_back({ViolationKind::kDimension, field, msg.str()});
    }
  }

  void finite(const std::string& field, const Eigen::MatrixXd& m) {
    if (!m.allFinite()) {
      report_.violations.push_back(
          {ViolationKind::kNonFinite, field, field + " contains a non-finite entry"});
    }
  }

  void matrix(const std::string& field, const Eigen::MatrixXd& m, int r, int c) {
    dims(field, m.rows(), m.cols(), r, c);
    finite(field, m);
  }

  void vector(const std::string& field, const Eigen::VectorXd& v, int len) {
    dims(field, v.size(), 1, len, 1);
    finite(field, v);
  }

  void box(const std::string& field, const std::optional<Eigen::VectorXd>& v, int len) {
    if (!v) return;
    vector(field, *v, len);
    if (v->size() > 0 && v->allFinite() && !(v->array() > 0.0).all()) {
      report_.violations.push_back({ViolationKind::kNonPositiveBound, field,
                                    field + " must be strictly positive"});
    }
  }

 private:
  ValidationReport& report_;
};

}  // namespace

bool operator==(const BilevelProblem& a, const BilevelProblem& b) {
  return a.n_x == b.n_x && a.n_y == b.n_y && a.n_u == b.n_u && a.n_l == b.n_l &&
         same_bits(a.A, b.A) && same_bits(a.B, b.B) && same_bits(a.C, b.C) &&
         same_bits(a.D, b.D) && same_bits(a.E, b.E) && same_bits(a.G, b.G) &&
         same_bits(a.H, b.H) && same_bits(a.J, b.J) && same_bits(a.N, b.N) &&
         same_optional(a.x_upper, b.x_upper) && same_optional(a.y_upper, b.y_upper);
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << "; ";
    out << violations[i].message;
  }
  return out.str();
}

ValidationReport validate_problem(const BilevelProblem& p) {
  ValidationReport report;
  if (p.n_x < 0 || p.n_y < 0 || p.n_u < 0 || p.n_l < 0) {
    report.violations.push_back(
        {ViolationKind::kDimension, "n_*", "dimensions must be nonnegative"});
    return report;
  }
  Checker c(report);
  c.vector("A", p.A, p.n_x);
  c.vector("B", p.B, p.n_y);
  c.matrix("C", p.C, p.n_u, p.n_x);
  c.matrix("D", p.D, p.n_u, p.n_y);
  c.vector("E", p.E, p.n_u);
  c.vector("G", p.G, p.n_y);
  c.matrix("H", p.H, p.n_l, p.n_x);
  c.matrix("J", p.J, p.n_l, p.n_y);
  c.vector("N", p.N, p.n_l);
  c.box("x_upper", p.x_upper, p.n_x);
  c.box("y_upper", p.y_upper, p.n_y);
  return report;
}

void require_valid(const BilevelProblem& p) {
  const ValidationReport report = validate_problem(p);
  if (!report.ok()) throw InvalidProblem("invalid bilevel problem: " + report.summary());
}

BilevelProblem illustrative_example() {
  BilevelProblem p;
  p.n_x = 1;
  p.n_y = 1;
  p.n_u = 1;
  p.n_l = 2;
  p.A = Eigen::VectorXd::Constant(1, 0.01);
  p.B = Eigen::VectorXd::Constant(1, -1.0);
  // x <= 1
  p.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
  p.D = Eigen::MatrixXd::Zero(1, 1);
  p.E = Eigen::VectorXd::Constant(1, 1.0);
  p.G = Eigen::VectorXd::Constant(1, 1.0);
  // x - 0.01y <= 0.5 and -x - y <= -1
  p.H.resize(2, 1);
  p.H << 1.0, -1.0;
  p.J.resize(2, 1);
  p.J << -0.01, -1.0;
  p.N.resize(2);
  p.N << 0.5, -1.0;
  return p;
}

}  // namespace blp
