#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace blp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// Dense linear program:
//   optimize  cost' z
//   s.t.      rows(i) . z  (sense_i)  rhs_i
//             lower <= z <= upper
// Lower bounds are finite or -inf, upper bounds finite or +inf.
struct LpModel {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  Eigen::VectorXd cost;
  Eigen::MatrixXd rows;
  std::vector<RowSense> row_sense;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;

  std::size_t num_rows() const { return static_cast<std::size_t>(rows.rows()); }
  std::size_t num_cols() const { return static_cast<std::size_t>(cost.size()); }

  // Empty string when the model is well-formed, otherwise the first problem.
  std::string check() const;
};

// Mixed-binary linear program. Columns listed in `binaries` take values in
// {0, 1}; their [lower, upper] bounds must lie inside [0, 1].
struct MilpModel : LpModel {
  std::vector<std::size_t> binaries;

  std::string check() const;
  const LpModel& relaxation() const { return *this; }
};

// Row-at-a-time construction of an LpModel. Rows are collected as sparse
// terms and densified by build().
class ModelBuilder {
 public:
  using Term = std::pair<std::size_t, double>;

  explicit ModelBuilder(ObjectiveSense sense = ObjectiveSense::kMinimize)
      : sense_(sense) {}

  std::size_t add_col(std::string name, double lower, double upper,
                      double cost = 0.0);
  std::size_t add_row(std::string name, std::vector<Term> terms, RowSense sense,
                      double rhs);
  void mark_binary(std::size_t col) { binaries_.push_back(col); }

  std::size_t num_cols() const { return cost_.size(); }
  std::size_t num_rows() const { return row_terms_.size(); }

  LpModel build_lp() const;
  MilpModel build_milp() const;

 private:
  ObjectiveSense sense_;
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::string> col_names_;
  std::vector<std::vector<Term>> row_terms_;
  std::vector<RowSense> row_sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
  std::vector<std::size_t> binaries_;
};

// Activity Az and the largest signed violation of each row / bound at z.
Eigen::VectorXd row_activity(const LpModel& m, const Eigen::VectorXd& z);
double max_primal_violation(const LpModel& m, const Eigen::VectorXd& z);

}  // namespace blp
