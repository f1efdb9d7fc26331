#include "blp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blp/baselines.hpp"
#include "blp/dbd.hpp"
#include "blp/errors.hpp"
#include "blp/problem_io.hpp"
#include "blp/random_case.hpp"

namespace blp {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <typename Vec>
std::string list(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.size()); ++i) {
    if (i) s += ',';
    s += num(static_cast<double>(v[static_cast<std::size_t>(i)]));
  }
  return s + "]";
}

std::string list(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += num(v[i]);
  }
  return s + "]";
}

Json json_num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json json_vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

struct SolveArgs {
  std::string file;
  std::string algorithm = "dbd";
  std::vector<double> M{100.0};
  double epsilon = 1e-6;
  double tol = 1e-7;
  double sentinel = -1e4;
  std::string start_u;
  std::string point_cut = "complemented";
  long long max_iterations = 0;
  long long node_limit = 1'000'000;
  std::string trace;
  bool json = false;
};

struct GenArgs {
  int nx = 0, ny = 0, nu = 0, nl = 0;
  std::uint64_t seed = 1;
  std::string output;
};

struct CompareArgs {
  std::string file;
  std::vector<double> M{100.0};
  bool no_oracle = false;
  int nx = 0, ny = 0, nu = 0, nl = 0;
  std::uint64_t seed = 1;
  int count = 0;
  int jobs = 1;
  std::string csv;
  double epsilon = 1e-6;
  double tol = 1e-7;
  long long node_limit = 1'000'000;
};

struct OracleArgs {
  std::string file;
  bool json = false;
};

BinaryVector parse_pattern(const std::string& text) {
  BinaryVector u;
  for (char c : text) {
    if (c == '0' || c == '1') {
      u.push_back(c - '0');
    } else if (c != ',' && c != ' ' && c != '[' && c != ']') {
      throw CLI::ValidationError("--start-u", "pattern must contain only 0/1 digits");
    }
  }
  return u;
}

void print_result(std::ostream& out, const std::string& algorithm, const DbdResult& r, bool json) {
  if (json) {
    Json j;
    j["algorithm"] = algorithm;
    j["status"] = to_string(r.status);
    j["f"] = json_num(r.f);
    j["g"] = json_num(r.g);
    j["x"] = json_vec(r.x);
    j["y"] = json_vec(r.y);
    j["u"] = r.u;
    j["iterations"] = r.iterations;
    if (r.unbounded_suspect) j["unbounded_suspect"] = true;
    out << j.dump(2) << '\n';
    return;
  }
  out << "algorithm=" << algorithm << '\n' << "status=" << to_string(r.status) << '\n';
  if (r.status == BilevelStatus::kOptimal) {
    out << "f=" << num(r.f) << '\n'
        << "g=" << num(r.g) << '\n'
        << "x=" << list(r.x) << '\n'
        << "y=" << list(r.y) << '\n'
        << "u=" << list(r.u) << '\n';
  }
  if (r.unbounded_suspect) out << "unbounded_suspect=1\n";
  out << "iterations=" << r.iterations << '\n';
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const BilevelProblem p = load_problem(a.file);
  DbdResult r;
  if (a.algorithm == "dbd") {
    DbdOptions o;
    o.epsilon = a.epsilon;
    o.tol = a.tol;
    o.sentinel = a.sentinel;
    if (!a.start_u.empty()) o.start_u = parse_pattern(a.start_u);
    o.point_cut_form =
        a.point_cut == "plain" ? PointCutForm::kUncomplemented : PointCutForm::kComplemented;
    if (a.max_iterations > 0) o.max_iterations = a.max_iterations;
    o.master.node_limit = static_cast<std::size_t>(a.node_limit);
    r = run_dbd(p, o);
    if (!a.trace.empty()) {
      std::ofstream t(a.trace);
      if (!t) throw Error("cannot write trace file " + a.trace);
      write_trace_csv(t, r.trace);
    }
  } else if (a.algorithm == "bigm") {
    MilpOptions o;
    o.node_limit = static_cast<std::size_t>(a.node_limit);
    r = solve_bigm(p, BigMConfig::uniform(p, a.M.front()), o);
  } else {
    const OracleResult o = enumerate_oracle(p);
    r.status = o.status;
    r.x = o.x;
    r.y = o.y;
    r.u = o.u;
    r.f = o.f;
    r.g = o.g;
    r.iterations = o.patterns;
    r.unbounded_suspect = o.unbounded_suspect;
  }
  print_result(out, a.algorithm, r, a.json);
  if (r.status == BilevelStatus::kIterationLimit) {
    err << "error: iteration limit reached before the bounds met\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const BilevelProblem p = gen_random_case(a.nx, a.ny, a.nu, a.nl, a.seed);
  if (a.output.empty() || a.output == "-") {
    out << write_problem(p);
  } else {
    save_problem(a.output, p);
  }
  return kExitOk;
}

void print_summary(std::ostream& out, const std::vector<ComparisonReport>& reports,
                   const std::vector<double>& Ms) {
  std::map<std::string, int> agree, infeasible, suboptimal, total;
  std::map<std::string, double> iters, reduction;
  std::map<std::string, int> reduction_n;
  auto key = [](const ComparisonRow& r) {
    return r.algorithm == "bigm" ? "bigm(M=" + num(r.M) + ")" : r.algorithm;
  };
  for (const ComparisonReport& rep : reports) {
    for (const ComparisonRow& r : rep.rows) {
      const std::string k = key(r);
      ++total[k];
      agree[k] += r.agrees;
      infeasible[k] += r.infeasible;
      suboptimal[k] += r.suboptimal;
      iters[k] += static_cast<double>(r.iterations);
    }
    for (double M : Ms) {
      const double red = rep.iteration_reduction_pct(M);
      if (std::isfinite(red)) {
        reduction["bigm(M=" + num(M) + ")"] += red;
        ++reduction_n["bigm(M=" + num(M) + ")"];
      }
    }
  }
  for (const auto& [k, n] : total) {
    out << "summary " << k << ": runs=" << n << " agree=" << agree[k]
        << " infeasible=" << infeasible[k] << " suboptimal=" << suboptimal[k]
        << " mean_iterations=" << num(iters[k] / n);
    if (reduction_n[k] > 0) {
      out << " dbd_iteration_reduction_pct=" << num(reduction[k] / reduction_n[k]);
    }
    out << '\n';
  }
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  CompareOptions opts;
  opts.run_oracle = !a.no_oracle;
  opts.dbd.epsilon = a.epsilon;
  opts.dbd.tol = a.tol;
  opts.dbd.master.node_limit = static_cast<std::size_t>(a.node_limit);
  opts.milp.node_limit = static_cast<std::size_t>(a.node_limit);
  std::vector<ComparisonReport> reports;
  if (a.count > 0) {
    if (!a.file.empty()) {
      err << "error: give either a problem file or --count, not both\n";
      return kExitUsage;
    }
    if (a.nx <= 0 || a.ny <= 0 || a.nu <= 0 || a.nl <= 0) {
      err << "error: batch mode needs positive --nx --ny --nu --nl\n";
      return kExitUsage;
    }
    BatchConfig cfg;
    cfg.dims = {a.nx, a.ny, a.nu, a.nl};
    cfg.first_seed = a.seed;
    cfg.count = a.count;
    cfg.jobs = a.jobs;
    cfg.big_m_values = a.M;
    cfg.compare = opts;
    reports = run_batch(cfg);
  } else {
    if (a.file.empty()) {
      err << "error: compare needs a problem file or --count\n";
      return kExitUsage;
    }
    reports.push_back(compare(load_problem(a.file), a.M, opts));
  }
  if (a.csv.empty()) {
    write_report_csv(out, reports);
  } else {
    std::ofstream f(a.csv);
    if (!f) throw Error("cannot write report file " + a.csv);
    write_report_csv(f, reports);
  }
  print_summary(out, reports, a.M);
  return kExitOk;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const OracleResult o = enumerate_oracle(load_problem(a.file));
  if (a.json) {
    Json j;
    j["status"] = to_string(o.status);
    j["f"] = json_num(o.f);
    j["g"] = json_num(o.g);
    j["x"] = json_vec(o.x);
    j["y"] = json_vec(o.y);
    j["u"] = o.u;
    j["patterns"] = o.patterns;
    j["optimal_patterns"] = o.optimal_patterns;
    j["unbounded_suspect"] = o.unbounded_suspect;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "status=" << to_string(o.status) << '\n';
  if (o.status == BilevelStatus::kOptimal) {
    out << "f=" << num(o.f) << '\n'
        << "g=" << num(o.g) << '\n'
        << "x=" << list(o.x) << '\n'
        << "y=" << list(o.y) << '\n'
        << "u=" << list(o.u) << '\n';
  }
  out << "patterns=" << o.patterns << '\n'
      << "optimal_patterns=" << o.optimal_patterns << '\n'
      << "unbounded_suspect=" << (o.unbounded_suspect ? 1 : 0) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear bilevel program solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve a problem file");
  s->add_option("file", solve.file, "Problem JSON")->required();
  s->add_option("--algorithm", solve.algorithm, "dbd, bigm or oracle")
      ->check(CLI::IsMember({"dbd", "bigm", "oracle"}));
  s->add_option("--M", solve.M, "Big-M value (first one is used)")
      ->check(CLI::PositiveNumber)
      ->allow_extra_args(false);
  s->add_option("--epsilon", solve.epsilon, "Termination tolerance on UB - LB");
  s->add_option("--tol", solve.tol, "Support threshold for cut extraction");
  s->add_option("--sentinel", solve.sentinel, "Master objective value of the empty selection");
  s->add_option("--start-u", solve.start_u, "Initial pattern, e.g. 0,1,1");
  s->add_option("--mp-point-cut", solve.point_cut, "complemented or plain")
      ->check(CLI::IsMember({"complemented", "plain"}));
  s->add_option("--max-iterations", solve.max_iterations, "DBD iteration cap");
  s->add_option("--node-limit", solve.node_limit, "Branch-and-bound node cap");
  s->add_option("--trace", solve.trace, "Write the DBD bound trace as CSV");
  s->add_flag("--json", solve.json, "JSON output");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random problem");
  g->add_option("--nx", gen.nx)->required()->check(CLI::PositiveNumber);
  g->add_option("--ny", gen.ny)->required()->check(CLI::PositiveNumber);
  g->add_option("--nu", gen.nu)->required()->check(CLI::PositiveNumber);
  g->add_option("--nl", gen.nl)->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("-o,--output", gen.output, "Output path (stdout when absent)");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Compare DBD, big-M and the oracle");
  c->add_option("file", cmp.file, "Problem JSON");
  c->add_option("--M", cmp.M, "Big-M value, repeat for several")
      ->check(CLI::PositiveNumber)
      ->allow_extra_args(false);
  c->add_flag("--no-oracle", cmp.no_oracle, "Skip the enumeration oracle");
  c->add_option("--nx", cmp.nx);
  c->add_option("--ny", cmp.ny);
  c->add_option("--nu", cmp.nu);
  c->add_option("--nl", cmp.nl);
  c->add_option("--seed", cmp.seed, "First seed of a batch");
  c->add_option("--count", cmp.count, "Number of generated instances");
  c->add_option("--jobs", cmp.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  c->add_option("--csv", cmp.csv, "Write the report CSV here instead of stdout");
  c->add_option("--epsilon", cmp.epsilon);
  c->add_option("--tol", cmp.tol);
  c->add_option("--node-limit", cmp.node_limit);

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Enumerate every pattern of a problem file");
  o->add_option("file", orc.file, "Problem JSON")->required();
  o->add_flag("--json", orc.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (g->parsed()) return cmd_gen(gen, out);
    if (c->parsed()) return cmd_compare(cmp, out, err);
    return cmd_oracle(orc, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidProblem& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return (dynamic_cast<const NumericalBreakdown*>(&e) || dynamic_cast<const NodeLimitExceeded*>(&e) ||
            dynamic_cast<const CapExceeded*>(&e) || dynamic_cast<const EmptyRayCut*>(&e))
               ? kExitSolver
               : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace blp
