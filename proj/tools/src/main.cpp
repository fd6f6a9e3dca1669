#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tensorfn_cli/job.hpp"

using namespace tensorfn;
using namespace tensorfn::cli;

namespace {

struct Flags {
  std::string input;
  std::string output;
  std::string fn;
  std::string matrix;
  std::string method;
  std::string kind;
  int order = 0;
  int power = 0;
  int quad_points = 0;
  double tol = -1.0;
  bool dense = false;
  int indent = 2;
};

Json read_document(const std::string& path) {
  if (path == "-") return Json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open input file '" + path + "'");
  return Json::parse(in);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(part, &used);
    } catch (const std::exception&) {
      throw ArgumentError("bad number '" + part + "' in --matrix");
    }
    if (part.find_first_not_of(" \t", used) != std::string::npos) throw ArgumentError("bad number '" + part + "' in --matrix");
    v.push_back(x);
  }
  return v;
}

JobSpec build_job(Command command, const Flags& f) {
  JobSpec job = f.input.empty() ? JobSpec{} : parse_job(read_document(f.input));
  job.command = command;
  if (!f.fn.empty()) job.fn = f.fn;
  if (!f.matrix.empty()) job.a = matrix_from_json(Json(parse_list(f.matrix)), "--matrix");
  if (f.order != 0) job.order = f.order;
  if (f.tol >= 0.0) job.cluster_tol = f.tol;
  if (!f.method.empty()) job.method = parse_coeff_method(f.method);
  if (f.dense) job.dense = true;
  if (f.quad_points != 0) job.quad_points = f.quad_points;
  if (!f.kind.empty()) {
    Json s = {{"solve", {{"kind", f.kind}}}};
    job.solve_kind = parse_job(s).solve_kind;
  }
  if (f.power != 0) job.power = f.power;
  return job;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral derivatives of functions of symmetric 3x3 tensors"};
  app.require_subcommand(1);
  Flags flags;

  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::eval, "eval", "f(A)"},
      {Command::grad, "grad", "coefficient table of (1/n!) grad^(n) f(A), optional dense export"},
      {Command::taylor, "taylor", "truncated Taylor expansion of f(A + X) and its remainder"},
      {Command::solve, "solve", "Sylvester-type solvers (power, commutator, log)"},
      {Command::check, "check", "run the invariant suite on the given input"},
  };
  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--input", flags.input, "job document (JSON), '-' for stdin");
    sub->add_option("--output", flags.output, "write the result document here instead of stdout");
    sub->add_option("--matrix", flags.matrix, "A as 6 upper-triangle or 9 row-major comma-separated values");
    sub->add_option("--indent", flags.indent, "JSON indentation, -1 for compact output");
    if (s.command != Command::solve) sub->add_option("--fn", flags.fn, "function spec, e.g. exp, log, seth_hill:-2");
    if (s.command == Command::grad || s.command == Command::taylor || s.command == Command::check) {
      sub->add_option("--order", flags.order, "derivative order n (1..6)");
      sub->add_option("--method", flags.method, "coefficient path: dd, residue or interp");
    }
    sub->add_option("--tol", flags.tol, "relative eigenvalue clustering tolerance");
    if (s.command == Command::grad) sub->add_flag("--dense", flags.dense, "include dense components (n <= 4)");
    if (s.command == Command::solve) {
      sub->add_option("--kind", flags.kind, "power, commutator or log");
      sub->add_option("--m", flags.power, "exponent m of the power equation");
      sub->add_option("--quad-points", flags.quad_points, "Gauss-Legendre points for the log solver");
    }
    apps.emplace_back(sub, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    Command command = Command::eval;
    for (const auto& [sub, c] : apps) {
      if (sub->parsed()) command = c;
    }
    const JobSpec job = build_job(command, flags);
    bool passed = true;
    const Json result = run(job, &passed);
    const std::string text = result.dump(flags.indent);
    if (flags.output.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream out(flags.output);
      if (!out) throw ArgumentError("cannot write '" + flags.output + "'");
      out << text << "\n";
    }
    return passed ? kExitOk : kExitCheckFailed;
  } catch (...) {
    std::string message;
    const int code = exit_code_for_current_exception(message);
    std::cerr << "tensorfn: " << message << "\n";
    return code;
  }
}
