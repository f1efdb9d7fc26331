#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "blp/cli.hpp"
#include "blp/problem_io.hpp"

using namespace blp;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "blp");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string example_path() { return std::string(BLP_SOURCE_DIR) + "/data/illustrative.json"; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "blp_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve with the decomposition") {
  const Run r = cli({"solve", "--algorithm", "dbd", example_path()});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "status") == "Optimal");
  CHECK(field(r.out, "f") == "-49.99");
  CHECK(field(r.out, "x") == "[1]");
  CHECK(field(r.out, "y") == "[50]");
  CHECK(field(r.out, "u") == "[1,0,1]");
  CHECK(field(r.out, "iterations") == "4");
}

TEST_CASE("solve with big-M matches the decomposition") {
  const Run a = cli({"solve", "--algorithm", "bigm", "--M", "100", example_path()});
  const Run b = cli({"solve", example_path()});
  CHECK(a.code == kExitOk);
  CHECK(field(a.out, "f") == field(b.out, "f"));
  CHECK(field(a.out, "algorithm") == "bigm");
  const Run o = cli({"solve", "--algorithm", "oracle", example_path()});
  CHECK(field(o.out, "f") == "-49.99");
  CHECK(field(o.out, "iterations") == "8");
}

TEST_CASE("plain point cuts and a start pattern") {
  const Run r = cli({"solve", "--mp-point-cut", "plain", "--start-u", "1,1,1", example_path()});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "f") == "-49.99");
}

TEST_CASE("numbers keep at least nine significant digits") {
  const auto p = scratch("digits.json");
  REQUIRE(cli({"gen", "--nx", "2", "--ny", "2", "--nu", "1", "--nl", "1", "--seed", "1", "-o", p.string()}).code ==
          kExitOk);
  const Run r = cli({"solve", "--algorithm", "oracle", p.string()});
  REQUIRE(field(r.out, "status") == "Optimal");
  const Run j = cli({"oracle", "--json", p.string()});
  const double exact = nlohmann::json::parse(j.out).at("f").get<double>();
  const double printed = std::stod(field(r.out, "f"));
  CHECK(std::abs(printed - exact) <= 1e-9 * std::abs(exact));
}

TEST_CASE("json output") {
  const Run r = cli({"solve", "--json", example_path()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("status") == "Optimal");
  CHECK(j.at("f").get<double>() == doctest::Approx(-49.99));
  CHECK(j.at("u") == nlohmann::json::array({1, 0, 1}));
  const Run o = cli({"oracle", "--json", example_path()});
  CHECK(nlohmann::json::parse(o.out).at("patterns") == 8);
}

TEST_CASE("trace file has the expected bound shape") {
  const auto t = scratch("trace.csv");
  const Run r = cli({"solve", "--algorithm", "dbd", "--trace", t.string(), example_path()});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(slurp(t));
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,UB,LB,sp_status,K,L");
  std::vector<double> ub, lb;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 6);
    ub.push_back(std::stod(cells[1]));
    lb.push_back(std::stod(cells[2]));
  }
  REQUIRE(!ub.empty());
  for (std::size_t i = 1; i < ub.size(); ++i) {
    CHECK(ub[i] <= ub[i - 1]);
    CHECK(lb[i] >= lb[i - 1]);
  }
  CHECK(ub.back() == doctest::Approx(-49.99));
  CHECK(lb.back() == doctest::Approx(-49.99));
}

TEST_CASE("generated files round trip and the oracle is deterministic") {
  const auto p = scratch("p.json");
  const Run g = cli({"gen", "--nx", "5", "--ny", "5", "--nu", "3", "--nl", "3", "--seed", "7", "-o", p.string()});
  REQUIRE(g.code == kExitOk);
  const Run a = cli({"oracle", p.string()});
  const Run b = cli({"oracle", p.string()});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
  CHECK(cli({"solve", p.string()}).code == kExitOk);
  CHECK(cli({"solve", "--algorithm", "bigm", p.string()}).code == kExitOk);
  CHECK(cli({"compare", p.string()}).code == kExitOk);
  const Run stdout_gen = cli({"gen", "--nx", "5", "--ny", "5", "--nu", "3", "--nl", "3", "--seed", "7"});
  CHECK(stdout_gen.out == slurp(p));
  CHECK(read_problem(stdout_gen.out) == load_problem(p));
}

TEST_CASE("compare on a file and on a batch") {
  const Run r = cli({"compare", "--M", "100", "--M", "1000000", example_path()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("seed,algorithm,M,status,f,g,iterations,wall_ms,gap_pct\n", 0) == 0);
  CHECK(r.out.find("summary dbd:") != std::string::npos);
  CHECK(r.out.find("dbd_iteration_reduction_pct=") != std::string::npos);

  const auto csv = scratch("report.csv");
  const Run b = cli({"compare", "--nx", "3", "--ny", "3", "--nu", "2", "--nl", "2", "--seed", "1", "--count", "5",
                     "--jobs", "2", "--M", "0.5", "--csv", csv.string()});
  REQUIRE(b.code == kExitOk);
  std::istringstream in(slurp(csv));
  std::string line;
  int rows = 0;
  std::getline(in, line);
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 15);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"solve"}).code == kExitUsage);
  CHECK(cli({"solve", "--algorithm", "simplex", example_path()}).code == kExitUsage);
  CHECK(cli({"gen", "--nx", "0", "--ny", "1", "--nu", "1", "--nl", "1"}).code == kExitUsage);
  CHECK(cli({"solve", "/nonexistent/problem.json"}).code == kExitUsage);
  CHECK(cli({"solve", "--start-u", "012", example_path()}).code == kExitUsage);
  CHECK(cli({"solve", "--start-u", "1,1", example_path()}).code == kExitUsage);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"n_x\": \"one\"}";
  const Run r = cli({"solve", bad.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("n_x") != std::string::npos);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("solver limits exit with 3") {
  const Run r = cli({"solve", "--max-iterations", "1", example_path()});
  CHECK(r.code == kExitSolver);
  CHECK(field(r.out, "status") == "IterationLimit");
  CHECK(cli({"solve", "--algorithm", "bigm", "--node-limit", "1", example_path()}).code == kExitSolver);
  const auto big = scratch("big.json");
  REQUIRE(cli({"gen", "--nx", "1", "--ny", "13", "--nu", "1", "--nl", "12", "-o", big.string()}).code == kExitOk);
  CHECK(cli({"oracle", big.string()}).code == kExitSolver);
}

TEST_CASE("infeasible instances are a successful run") {
  const auto p = scratch("s7.json");
  REQUIRE(cli({"gen", "--nx", "3", "--ny", "3", "--nu", "2", "--nl", "2", "--seed", "7", "-o", p.string()}).code ==
          kExitOk);
  const Run r = cli({"solve", p.string()});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "status") == "Infeasible");
}

}  // TEST_SUITE
