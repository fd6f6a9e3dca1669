#include "tensorfn_cli/job.hpp"

#include <cmath>
#include <exception>
#include <sstream>

namespace tensorfn::cli {

namespace {

const Json* find(const Json& doc, const char* key) {
  auto it = doc.find(key);
  return it == doc.end() ? nullptr : &*it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ArgumentError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ArgumentError(what + " must be finite");
  return v;
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ArgumentError(what + " must be an integer");
  return j.get<int>();
}

SymTensor checked_sym(const Matrix3& m, double tol, const std::string& what) {
  try {
    return SymTensor::from_matrix(m, tol);
  } catch (const ArgumentError& e) {
    throw ArgumentError(what + ": " + e.what());
  }
}

Json spectrum_json(const Spectrum& s) {
  Json j;
  j["d"] = s.d();
  j["alphas"] = s.alphas();
  Json p = Json::array();
  for (const auto& q : s.projectors()) p.push_back(matrix_to_json(q.matrix()));
  j["projectors"] = p;
  return j;
}

Json coefficients_json(const CoeffTable& t) {
  Json arr = Json::array();
  for (const auto& e : t.entries()) arr.push_back({{"index", e.index}, {"value", e.value}});
  return arr;
}

SolveKind parse_solve_kind(const std::string& s) {
  if (s == "power") return SolveKind::power;
  if (s == "commutator") return SolveKind::commutator;
  if (s == "log") return SolveKind::log;
  throw ArgumentError("unknown solve kind '" + s + "' (power|commutator|log)");
}

std::string to_string(SolveKind k) {
  switch (k) {
    case SolveKind::power:
      return "power";
    case SolveKind::commutator:
      return "commutator";
    case SolveKind::log:
      return "log";
  }
  return "?";
}

TableOptions table_options(const JobSpec& job) {
  TableOptions t;
  t.method = job.method;
  t.cross_check = false;
  return t;
}

Json run_eval(const JobSpec& job) {
  const auto f = ScalarFn::parse(job.fn);
  const auto a = checked_sym(job.a, job.symmetry_tol, "A");
  const auto s = decompose(a, job.cluster_tol);
  return {{"f_A", matrix_to_json(apply_fn(s, f).matrix())}, {"spectrum", spectrum_json(s)}};
}

Json run_grad(const JobSpec& job) {
  const auto f = ScalarFn::parse(job.fn);
  const auto a = checked_sym(job.a, job.symmetry_tol, "A");
  const auto s = decompose(a, job.cluster_tol);
  const auto dv = derivative(f, s, job.order, table_options(job));
  Json r;
  r["order"] = job.order;
  r["method"] = to_string(job.method);
  r["spectrum"] = spectrum_json(s);
  r["coefficients"] = coefficients_json(dv.coeffs());
  if (!job.directions.empty()) {
    if (static_cast<int>(job.directions.size()) != job.order) {
      throw ArgumentError("grad with directions needs exactly `order` of them");
    }
    std::vector<SymTensor> xs;
    for (const auto& x : job.directions) xs.push_back(checked_sym(x, job.symmetry_tol, "direction"));
    r["contraction"] = matrix_to_json(contract_dirs(dv, xs));
  }
  if (job.dense) {
    if (job.order > kMaxDenseOrder) {
      throw ArgumentError("dense export is limited to order <= " + std::to_string(kMaxDenseOrder));
    }
    r["dense"] = dv.dense();
  }
  return r;
}

Json run_taylor(const JobSpec& job) {
  const auto f = ScalarFn::parse(job.fn);
  const auto a = checked_sym(job.a, job.symmetry_tol, "A");
  if (job.directions.size() != 1) throw ArgumentError("taylor needs exactly one direction X");
  const auto x = checked_sym(job.directions[0], job.symmetry_tol, "X");
  const auto s = decompose(a, job.cluster_tol);
  const auto t = taylor_eval(f, s, x, job.order, table_options(job));
  const auto exact = apply_fn(a + x, f, job.cluster_tol);
  return {{"order", job.order},
          {"taylor", matrix_to_json(t.matrix())},
          {"exact", matrix_to_json(exact.matrix())},
          {"remainder", (exact - t).norm()}};
}

Json run_solve(const JobSpec& job) {
  const auto a = checked_sym(job.a, job.symmetry_tol, "A");
  Json r;
  r["kind"] = to_string(job.solve_kind);
  const double cnorm = job.rhs.norm();
  switch (job.solve_kind) {
    case SolveKind::power: {
      const Matrix3 x = sylvester_power(job.power, a, job.rhs);
      const double res = (sylvester_power_lhs(job.power, a.matrix(), x) - job.rhs).norm();
      r["m"] = job.power;
      r["X"] = matrix_to_json(x);
      r["residual"] = res;
      r["relative_residual"] = cnorm > 0 ? res / cnorm : res;
      break;
    }
    case SolveKind::commutator: {
      const auto sol = sylvester_commutator(a, job.rhs);
      const Matrix3 am = a.matrix();
      r["X"] = matrix_to_json(sol.x);
      r["null_residual"] = sol.null_residual;
      r["residual"] = (am * sol.x - sol.x * am - job.rhs).norm();
      break;
    }
    case SolveKind::log: {
      const Matrix3 x = log_inverse_integral(a, job.quad_points).apply(job.rhs);
      const auto g = gradient(ScalarFn::logarithm(), a, DerivativeOptions{job.cluster_tol, {}});
      const double res = (g.apply(x) - job.rhs).norm();
      r["quad_points"] = job.quad_points;
      r["X"] = matrix_to_json(x);
      r["residual"] = res;
      r["relative_residual"] = cnorm > 0 ? res / cnorm : res;
      break;
    }
  }
  return r;
}

struct Probe {
  std::string name;
  double value;
  double tolerance;
};

Matrix3 probe_direction(int k) {
  // Fixed, well-spread symmetric probes; deterministic output.
  Matrix3 x;
  const double c = 0.3 + 0.1 * k;
  x << 1.0, c, -0.2, c, -0.5, 0.7 - c, -0.2, 0.7 - c, 0.25 + c;
  return x / x.norm();
}

Json run_check(const JobSpec& job, bool* all_passed) {
  const auto f = ScalarFn::parse(job.fn);
  const auto a = checked_sym(job.a, job.symmetry_tol, "A");
  const auto s = decompose(a, job.cluster_tol);
  const Matrix3 id = Matrix3::Identity();
  std::vector<Probe> probes;

  double orth = 0.0;
  Matrix3 unity = Matrix3::Zero();
  for (int i = 0; i < s.d(); ++i) {
    unity += s.projector(i).matrix();
    for (int j = 0; j < s.d(); ++j) {
      const Matrix3 pij = s.projector(i).matrix() * s.projector(j).matrix();
      const Matrix3 want = i == j ? s.projector(i).matrix() : Matrix3::Zero();
      orth = std::max(orth, (pij - want).norm());
    }
  }
  probes.push_back({"projector_orthogonality", orth, 1e-10});
  probes.push_back({"partition_of_unity", (unity - id).norm(), 1e-12});
  const double anorm = std::max(a.norm(), 1e-300);
  probes.push_back({"reconstruction", (s.reconstruct() - a).norm() / anorm, 1e-10});

  const int top = std::min(job.order, kMaxDenseOrder);
  double agree = 0.0;
  for (int n = 1; n <= top; ++n) {
    const auto dd = build_table(f, s, n, {CoeffMethod::divided_difference, false});
    const auto rs = build_table(f, s, n, {CoeffMethod::residue, false});
    const auto ip = build_table(f, s, n, {CoeffMethod::interpolation, false});
    double scale = 0.0;
    for (const auto& e : dd.entries()) scale = std::max(scale, std::abs(e.value));
    for (const auto& e : dd.entries()) {
      const std::span<const int> idx(e.index);
      const double denom = std::max(std::abs(e.value), 1e-12 * scale);
      if (denom == 0.0) continue;
      agree = std::max(agree, std::abs(e.value - rs.at(idx)) / denom);
      agree = std::max(agree, std::abs(e.value - ip.at(idx)) / denom);
    }
  }
  probes.push_back({"coefficient_agreement", agree, 1e-8});

  const auto grad = derivative(f, s, 1, {}).as_fourth();
  const Matrix3 fa = apply_fn(s, f).matrix();
  const auto lhs = compose4(j_tensor(a.matrix()), grad);
  const auto rhs = j_tensor(fa);
  const double gscale = std::max(1.0, fa.norm());
  probes.push_back({"gradient_commutation", max_abs_difference(lhs, rhs) / gscale, 1e-10});

  double fd = 0.0;
  for (int k = 0; k < 3; ++k) {
    const SymTensor x = SymTensor::from_matrix(probe_direction(k));
    const Matrix3 est = oracle::finite_diff_derivative(f, a, {x});
    const Matrix3 exact = grad.apply(x);
    fd = std::max(fd, (est - exact).norm() / std::max(exact.norm(), 1e-300));
  }
  probes.push_back({"finite_difference_gradient", fd, 1e-5});

  if (s.positive()) {
    std::optional<StrainMeasure> sm;
    try {
      sm = StrainMeasure::from(f);
    } catch (const std::exception&) {
    }
    if (sm) {
      const auto g = grad_spectral(*sm, s);
      const auto gi = inverse_grad(*sm, s);
      const auto ident = FourthTensor::identity();
      probes.push_back({"inverse_gradient", max_abs_difference(compose4(g, gi), ident), 1e-10});
      const auto jk = compose4(j_tensor(a.matrix()), j_pseudo_inverse(s)) + compose4(k_tensor(s), k_pseudo_inverse(s));
      probes.push_back({"jk_partition", max_abs_difference(jk, ident), 1e-10});
    }
  }

  bool ok = true;
  Json arr = Json::array();
  for (const auto& p : probes) {
    const bool pass = p.value <= p.tolerance;
    ok = ok && pass;
    arr.push_back({{"name", p.name}, {"value", p.value}, {"tolerance", p.tolerance}, {"pass", pass}});
  }
  if (all_passed) *all_passed = ok;
  return {{"properties", arr}, {"all_passed", ok}};
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "eval") return Command::eval;
  if (name == "grad") return Command::grad;
  if (name == "taylor") return Command::taylor;
  if (name == "solve") return Command::solve;
  if (name == "check") return Command::check;
  throw ArgumentError("unknown command '" + name + "' (eval|grad|taylor|solve|check)");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::eval:
      return "eval";
    case Command::grad:
      return "grad";
    case Command::taylor:
      return "taylor";
    case Command::solve:
      return "solve";
    case Command::check:
      return "check";
  }
  return "?";
}

Json matrix_to_json(const Matrix3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

Matrix3 matrix_from_json(const Json& j, const std::string& what) {
  Matrix3 m;
  if (!j.is_array()) throw ArgumentError(what + " must be an array");
  if (j.size() == 3 && j[0].is_array()) {
    for (int i = 0; i < 3; ++i) {
      if (!j[i].is_array() || j[i].size() != 3) throw ArgumentError(what + " must be 3x3");
      for (int k = 0; k < 3; ++k) m(i, k) = number(j[i][k], what);
    }
    return m;
  }
  if (j.size() == 9) {
    for (int q = 0; q < 9; ++q) m(q / 3, q % 3) = number(j[q], what);
    return m;
  }
  if (j.size() == 6) {
    const double v[6] = {number(j[0], what), number(j[1], what), number(j[2], what),
                         number(j[3], what), number(j[4], what), number(j[5], what)};
    m << v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5];
    return m;
  }
  throw ArgumentError(what + " must be 3x3 nested, 9 row-major values, or 6 upper-triangle values");
}

JobSpec parse_job(const Json& doc) {
  if (!doc.is_object()) throw ArgumentError("job document must be an object");
  JobSpec job;
  if (auto c = find(doc, "command")) job.command = parse_command(c->get<std::string>());
  if (auto f = find(doc, "fn")) job.fn = f->get<std::string>();
  if (auto a = find(doc, "A")) job.a = matrix_from_json(*a, "A");
  if (auto o = find(doc, "order")) job.order = integer(*o, "order");
  if (auto d = find(doc, "directions")) {
    if (!d->is_array()) throw ArgumentError("directions must be an array of matrices");
    for (const auto& x : *d) job.directions.push_back(matrix_from_json(x, "direction"));
  }
  if (auto t = find(doc, "tolerances")) {
    if (auto c = find(*t, "cluster")) job.cluster_tol = number(*c, "tolerances.cluster");
    if (auto s = find(*t, "symmetry")) job.symmetry_tol = number(*s, "tolerances.symmetry");
  }
  if (auto m = find(doc, "method")) job.method = parse_coeff_method(m->get<std::string>());
  if (auto d = find(doc, "dense")) job.dense = d->get<bool>();
  if (auto q = find(doc, "quad_points")) job.quad_points = integer(*q, "quad_points");
  if (auto s = find(doc, "solve")) {
    if (auto k = find(*s, "kind")) job.solve_kind = parse_solve_kind(k->get<std::string>());
    if (auto m = find(*s, "m")) job.power = integer(*m, "solve.m");
    if (auto r = find(*s, "rhs")) job.rhs = matrix_from_json(*r, "solve.rhs");
  }
  return job;
}

Json job_to_json(const JobSpec& job) {
  Json j;
  j["command"] = to_string(job.command);
  if (!job.fn.empty()) j["fn"] = job.fn;
  j["A"] = matrix_to_json(job.a);
  j["order"] = job.order;
  if (!job.directions.empty()) {
    Json d = Json::array();
    for (const auto& x : job.directions) d.push_back(matrix_to_json(x));
    j["directions"] = d;
  }
  j["tolerances"] = {{"cluster", job.cluster_tol}, {"symmetry", job.symmetry_tol}};
  j["method"] = to_string(job.method);
  j["dense"] = job.dense;
  j["quad_points"] = job.quad_points;
  if (job.command == Command::solve) {
    j["solve"] = {{"kind", to_string(job.solve_kind)}, {"m", job.power}, {"rhs", matrix_to_json(job.rhs)}};
  }
  return j;
}

void validate(const JobSpec& job) {
  (void)checked_sym(job.a, job.symmetry_tol, "A");
  if (!(job.cluster_tol >= 0.0)) throw ArgumentError("cluster tolerance must be non-negative");
  if (!(job.symmetry_tol >= 0.0)) throw ArgumentError("symmetry tolerance must be non-negative");
  if (job.order < 1 || job.order > kMaxOrder) {
    throw ArgumentError("order must be in 1.." + std::to_string(kMaxOrder));
  }
  if (job.quad_points < 1 || job.quad_points > 1000) throw ArgumentError("quad_points must be in 1..1000");
  if (job.command != Command::solve && job.fn.empty()) throw ArgumentError("a function spec (fn) is required");
  if (job.dense && job.order > kMaxDenseOrder) {
    throw ArgumentError("dense export is limited to order <= " + std::to_string(kMaxDenseOrder));
  }
  if (job.command == Command::solve && job.solve_kind == SolveKind::power && job.power < 1) {
    throw ArgumentError("solve.m must be a positive integer");
  }
}

Json run(const JobSpec& job, bool* all_passed) {
  validate(job);
  if (all_passed) *all_passed = true;
  Json out;
  out["command"] = to_string(job.command);
  out["job"] = job_to_json(job);
  switch (job.command) {
    case Command::eval:
      out["result"] = run_eval(job);
      break;
    case Command::grad:
      out["result"] = run_grad(job);
      break;
    case Command::taylor:
      out["result"] = run_taylor(job);
      break;
    case Command::solve:
      out["result"] = run_solve(job);
      break;
    case Command::check:
      out["result"] = run_check(job, all_passed);
      break;
  }
  return out;
}

int exit_code_for_current_exception(std::string& message) {
  try {
    throw;
  } catch (const Json::exception& e) {
    message = std::string("malformed job document: ") + e.what();
    return kExitParse;
  } catch (const ArgumentError& e) {
    message = std::string("invalid input: ") + e.what();
    return kExitParse;
  } catch (const DomainError& e) {
    message = std::string("domain error: ") + e.what();
    return kExitDomain;
  } catch (const NumericalError& e) {
    message = std::string("numerical failure: ") + e.what();
    return kExitNumerical;
  } catch (const std::exception& e) {
    message = std::string("numerical failure: ") + e.what();
    return kExitNumerical;
  }
}

}  // namespace tensorfn::cli
