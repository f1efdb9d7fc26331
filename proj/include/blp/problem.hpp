#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace blp {

// Linear bilevel program
//
//   min_x  A'x + B'y
//   s.t.   C x + D y <= E,  x >= 0,  x <= x_upper (optional)
//          y <= y_upper (optional, enforced by the leader)
//          y in argmin_y { G'y : H x + J y <= N, y >= 0 }
//
// Dimensions: x in R^n_x, y in R^n_y, n_u leader rows, n_l follower rows.
struct BilevelProblem {
  int n_x = 0;
  int n_y = 0;
  int n_u = 0;
  int n_l = 0;
  Eigen::VectorXd A;  // n_x
  Eigen::VectorXd B;  // n_y
  Eigen::MatrixXd C;  // n_u x n_x
  Eigen::MatrixXd D;  // n_u x n_y
  Eigen::VectorXd E;  // n_u
  Eigen::VectorXd G;  // n_y
  Eigen::MatrixXd H;  // n_l x n_x
  Eigen::MatrixXd J;  // n_l x n_y
  Eigen::VectorXd N;  // n_l
  std::optional<Eigen::VectorXd> x_upper;
  std::optional<Eigen::VectorXd> y_upper;

  // Length of the complementarity pattern vector u = [u1 (n_l), u2 (n_y)].
  int num_binaries() const { return n_l + n_y; }

  double upper_objective(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return A.dot(x) + B.dot(y);
  }
  double lower_objective(const Eigen::VectorXd& y) const { return G.dot(y); }

  friend bool operator==(const BilevelProblem& a, const BilevelProblem& b);
};

enum class ViolationKind { kDimension, kNonFinite, kNonPositiveBound };

struct Violation {
  ViolationKind kind;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_problem(const BilevelProblem& p);

// Throws InvalidProblem carrying the report summary when p is malformed.
void require_valid(const BilevelProblem& p);

// The illustrative instance
//   min 0.01x - y,  0 <= x <= 1,
//   y in argmin { y : 0.01y - x >= -0.5, y + x >= 1, y >= 0 }
// with the follower rows normalised to <= form.
BilevelProblem illustrative_example();

}  // namespace blp
