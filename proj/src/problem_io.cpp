#include "blp/problem_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blp/errors.hpp"

namespace blp {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 15> kKeys = {
    "n_x", "n_y", "n_u", "n_l", "A", "B", "C", "D", "E",
    "G",   "H",   "J",   "N",   "x_upper", "y_upper"};

const Json& require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(key, "missing required key");
  return *it;
}

int read_dim(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number_integer()) throw ParseError(key, "expected an integer");
  const auto value = v.get<long long>();
  if (value < 0 || value > 1'000'000) throw ParseError(key, "dimension out of range");
  return static_cast<int>(value);
}

double read_number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  return v.get<double>();
}

Eigen::VectorXd read_vector(const Json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] =
        read_number(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

// Rows of an empty matrix carry no column count, so `cols_if_empty` supplies it.
Eigen::MatrixXd read_matrix(const Json& v, const std::string& field, int cols_if_empty) {
  if (!v.is_array()) throw ParseError(field, "expected an array of row arrays");
  const auto rows = static_cast<Eigen::Index>(v.size());
  if (rows == 0) return Eigen::MatrixXd::Zero(0, cols_if_empty);
  Eigen::Index cols = -1;
  Eigen::MatrixXd out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw ParseError(rf, "expected a row array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(v[i].size());
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(v[i].size()) != cols) {
      throw ParseError(rf, "row length differs from the first row");
    }
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          read_number(v[i][j], rf + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

BilevelProblem read_problem(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!doc.is_object()) throw ParseError("<document>", "top level must be an object");
  for (const auto& item : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end()) {
      throw ParseError(item.key(), "unknown key");
    }
  }

  BilevelProblem p;
  p.n_x = read_dim(doc, "n_x");
  p.n_y = read_dim(doc, "n_y");
  p.n_u = read_dim(doc, "n_u");
  p.n_l = read_dim(doc, "n_l");
  p.A = read_vector(require(doc, "A"), "A");
  p.B = read_vector(require(doc, "B"), "B");
  p.C = read_matrix(require(doc, "C"), "C", p.n_x);
  p.D = read_matrix(require(doc, "D"), "D", p.n_y);
  p.E = read_vector(require(doc, "E"), "E");
  p.G = read_vector(require(doc, "G"), "G");
  p.H = read_matrix(require(doc, "H"), "H", p.n_x);
  p.J = read_matrix(require(doc, "J"), "J", p.n_y);
  p.N = read_vector(require(doc, "N"), "N");
  if (doc.contains("x_upper")) p.x_upper = read_vector(doc["x_upper"], "x_upper");
  if (doc.contains("y_upper")) p.y_upper = read_vector(doc["y_upper"], "y_upper");

  const ValidationReport report = validate_problem(p);
  if (!report.ok()) throw ValidationError("invalid problem file: " + report.summary());
  return p;
}

std::string write_problem(const BilevelProblem& p) {
  Json doc;
  doc["n_x"] = p.n_x;
  doc["n_y"] = p.n_y;
  doc["n_u"] = p.n_u;
  doc["n_l"] = p.n_l;
  doc["A"] = vector_json(p.A);
  doc["B"] = vector_json(p.B);
  doc["C"] = matrix_json(p.C);
  doc["D"] = matrix_json(p.D);
  doc["E"] = vector_json(p.E);
  doc["G"] = vector_json(p.G);
  doc["H"] = matrix_json(p.H);
  doc["J"] = matrix_json(p.J);
  doc["N"] = vector_json(p.N);
  if (p.x_upper) doc["x_upper"] = vector_json(*p.x_upper);
  if (p.y_upper) doc["y_upper"] = vector_json(*p.y_upper);

  // One key per line, values compact.
  std::ostringstream out;
  out << "{\n";
  bool first = true;
  for (const auto& item : doc.items()) {
    if (!first) out << ",\n";
    first = false;
    out << "  " << Json(item.key()).dump() << ": " << item.value().dump();
  }
  out << "\n}\n";
  return out.str();
}

BilevelProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_problem(buf.str());
}

void save_problem(const std::filesystem::path& path, const BilevelProblem& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write problem file " + path.string());
  out << write_problem(p);
}

}  // namespace blp
