#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "blp/problem.hpp"

namespace blp {

// JSON problem files. Keys, in the order the writer emits them:
//   n_x, n_y, n_u, n_l            integers
//   A, B, E, G, N                 arrays of numbers
//   C, D, H, J                    arrays of row arrays (row-major)
//   x_upper, y_upper              optional arrays
// Numbers are written in shortest round-trip form, so read(write(p)) == p.
//
// read_problem throws ParseError (naming the offending field) on malformed
// input and ValidationError when the decoded instance is inconsistent.
BilevelProblem read_problem(std::string_view text);
std::string write_problem(const BilevelProblem& p);

BilevelProblem load_problem(const std::filesystem::path& path);
void save_problem(const std::filesystem::path& path, const BilevelProblem& p);

}  // namespace blp
