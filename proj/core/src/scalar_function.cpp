#include "tensorfn/scalar_function.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace tensorfn {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view context) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ArgumentError("bad number '" + std::string(text) + "' in function spec '" +
                        std::string(context) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "a,b" at the top-level comma (outside parentheses).
std::vector<std::string_view> split_top(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

}  // namespace

ScalarFn ScalarFn::monomial(int m) {
  auto n = std::make_shared<Node>();
  n->family = Family::monomial;
  n->m = m;
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::power(double p) {
  if (!std::isfinite(p)) throw ArgumentError("power exponent must be finite");
  auto n = std::make_shared<Node>();
  n->family = Family::power;
  n->p = p;
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::exponential() {
  auto n = std::make_shared<Node>();
  n->family = Family::exp;
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::logarithm() {
  auto n = std::make_shared<Node>();
  n->family = Family::log;
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ArgumentError("polynomial coefficients must be finite");
  }
  auto n = std::make_shared<Node>();
  n->family = Family::polynomial;
  n->coeffs = std::move(coefficients);
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::seth_hill(double m) {
  if (!std::isfinite(m)) throw ArgumentError("Seth-Hill exponent must be finite");
  auto n = std::make_shared<Node>();
  n->family = Family::seth_hill;
  n->p = m;
  return ScalarFn(std::move(n));
}

ScalarFn ScalarFn::callback(std::string name, int max_order, Callback fn,
                            std::function<bool(double)> domain) {
  if (!fn) throw ArgumentError("callback function is empty");
  if (max_order < 0) throw ArgumentError("callback max_order must be non-negative");
  auto n = std::make_shared<Node>();
  n->family = Family::callback;
  n->name = std::move(name);
  n->max_order = max_order;
  n->cb = std::move(fn);
  n->domain = std::move(domain);
  return ScalarFn(std::move(n));
}

ScalarFn product(const ScalarFn& f, const ScalarFn& g) {
  auto n = std::make_shared<ScalarFn::Node>();
  n->family = ScalarFn::Family::product;
  n->lhs = f.node_;
  n->rhs = g.node_;
  return ScalarFn(std::move(n));
}

ScalarFn reciprocal(const ScalarFn& f) {
  auto n = std::make_shared<ScalarFn::Node>();
  n->family = ScalarFn::Family::reciprocal;
  n->lhs = f.node_;
  return ScalarFn(std::move(n));
}

ScalarFn compose(const ScalarFn& f, const ScalarFn& g) {
  auto n = std::make_shared<ScalarFn::Node>();
  n->family = ScalarFn::Family::composition;
  n->lhs = f.node_;
  n->rhs = g.node_;
  return ScalarFn(std::move(n));
}

ScalarFn::Family ScalarFn::family() const { return node_->family; }

int ScalarFn::max_order() const { return max_order_of(*node_); }

int ScalarFn::max_order_of(const Node& n) {
  switch (n.family) {
    case Family::callback:
      return n.max_order;
    case Family::product:
    case Family::composition:
      return std::min(max_order_of(*n.lhs), max_order_of(*n.rhs));
    case Family::reciprocal:
      return max_order_of(*n.lhs);
    default:
      return kUnlimited;
  }
}

int ScalarFn::polynomial_degree() const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::monomial:
      return n.m >= 0 ? n.m : -1;
    case Family::polynomial: {
      int d = static_cast<int>(n.coeffs.size()) - 1;
      while (d > 0 && n.coeffs[d] == 0.0) --d;
      return d;
    }
    case Family::power:
      return (detail::is_integer(n.p) && n.p >= 0.0) ? static_cast<int>(n.p) : -1;
    case Family::seth_hill:
      return (detail::is_integer(n.p) && n.p > 0.0) ? static_cast<int>(n.p) : -1;
    default:
      return -1;
  }
}

std::string ScalarFn::spec() const { return spec_of(*node_); }

std::string ScalarFn::spec_of(const Node& n) {
  switch (n.family) {
    case Family::monomial:
      return "monomial:" + std::to_string(n.m);
    case Family::power:
      return "power:" + format_number(n.p);
    case Family::exp:
      return "exp";
    case Family::log:
      return "log";
    case Family::polynomial: {
      std::string s = "poly:";
      for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
        if (i) s += ',';
        s += format_number(n.coeffs[i]);
      }
      return s;
    }
    case Family::seth_hill:
      return "seth_hill:" + format_number(n.p);
    case Family::callback:
      return "callback:" + n.name;
    case Family::product:
      return "product(" + spec_of(*n.lhs) + "," + spec_of(*n.rhs) + ")";
    case Family::reciprocal:
      return "reciprocal(" + spec_of(*n.lhs) + ")";
    case Family::composition:
      return "compose(" + spec_of(*n.lhs) + "," + spec_of(*n.rhs) + ")";
  }
  return "?";
}

ScalarFn ScalarFn::parse(std::string_view text) {
  const std::string_view spec = trim(text);
  if (spec.empty()) throw ArgumentError("empty function spec");

  const auto paren = spec.find('(');
  if (paren != std::string_view::npos) {
    if (spec.back() != ')') throw ArgumentError("unbalanced parentheses in '" + std::string(spec) + "'");
    const auto op = trim(spec.substr(0, paren));
    const auto args = split_top(spec.substr(paren + 1, spec.size() - paren - 2));
    if (op == "reciprocal" && args.size() == 1) return reciprocal(parse(args[0]));
    if (op == "product" && args.size() == 2) return product(parse(args[0]), parse(args[1]));
    if (op == "compose" && args.size() == 2) return compose(parse(args[0]), parse(args[1]));
    throw ArgumentError("unknown function combinator '" + std::string(spec) + "'");
  }

  const auto colon = spec.find(':');
  const auto name = trim(spec.substr(0, colon));
  const std::string_view params =
      colon == std::string_view::npos ? std::string_view{} : trim(spec.substr(colon + 1));
  const bool has_params = colon != std::string_view::npos;

  auto no_params = [&](ScalarFn f) {
    if (has_params) throw ArgumentError("'" + std::string(name) + "' takes no parameter");
    return f;
  };
  auto one_param = [&]() {
    if (!has_params || params.empty()) {
      throw ArgumentError("'" + std::string(name) + "' requires a parameter, e.g. '" +
                          std::string(name) + ":2'");
    }
    return parse_number(params, spec);
  };

  if (name == "exp") return no_params(exponential());
  if (name == "log") return no_params(logarithm());
  if (name == "sqrt") return no_params(power(0.5));
  if (name == "identity") return no_params(identity());
  if (name == "power") return power(one_param());
  if (name == "seth_hill") return seth_hill(one_param());
  if (name == "monomial") {
    const double m = one_param();
    if (!detail::is_integer(m) || std::abs(m) > 1e6) {
      throw ArgumentError("monomial exponent must be an integer");
    }
    return monomial(static_cast<int>(m));
  }
  if (name == "poly") {
    if (!has_params || params.empty()) throw ArgumentError("'poly' requires coefficients");
    std::vector<double> c;
    for (auto part : split_top(params)) c.push_back(parse_number(part, spec));
    return polynomial(std::move(c));
  }
  throw ArgumentError("unknown function family '" + std::string(name) + "'");
}

void ScalarFn::domain_failure(const Node& n, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "argument " << x << " outside the domain of " << spec_of(n);
  throw DomainError(os.str());
}

void ScalarFn::order_failure(const Node& n, int l) {
  throw ArgumentError("derivative of order " + std::to_string(l) + " requested from " +
                      spec_of(n) + ", which declares at most " +
                      std::to_string(max_order_of(n)));
}

StrainMeasure StrainMeasure::seth_hill(double m) { return StrainMeasure(ScalarFn::seth_hill(m)); }

StrainMeasure StrainMeasure::from(ScalarFn f) {
  const double f1 = f.value(1.0);
  const double df1 = f.derivative(1, 1.0);
  if (std::abs(f1) > 1e-12 || std::abs(df1 - 1.0) > 1e-12) {
    throw DomainError(f.spec() + " is not a strain measure: requires f(1) = 0 and f'(1) = 1");
  }
  for (int i = 1; i <= 200; ++i) {
    const double x = 0.05 * i;
    if (!(f.derivative(1, x) > 0.0)) {
      throw DomainError(f.spec() + " is not a strain measure: f' must be positive");
    }
  }
  return StrainMeasure(std::move(f));
}

}  // namespace tensorfn
