#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"

namespace tensorfn {

/// A scalar function f(x) together with exact derivatives of every order it supports.
///
/// Analytic families (monomial, real power, exp, log, polynomial, Seth-Hill) have
/// closed-form derivatives of all orders. User callbacks declare the highest order
/// they can provide; requests beyond it throw. Products, reciprocals and
/// compositions are evaluated through truncated Taylor series (jets), so they stay
/// exact as well.
///
/// The handle is cheap to copy and immutable.
class ScalarFn {
 public:
  enum class Family {
    monomial,
    power,
    exp,
    log,
    polynomial,
    seth_hill,
    callback,
    product,
    reciprocal,
    composition,
  };

  /// (order, x) -> f^(order)(x)
  using Callback = std::function<double(int, double)>;

  static constexpr int kUnlimited = std::numeric_limits<int>::max();

  static ScalarFn monomial(int m);
  static ScalarFn power(double p);
  static ScalarFn exponential();
  static ScalarFn logarithm();
  /// Coefficients in ascending powers: c0 + c1 x + c2 x^2 + ...
  static ScalarFn polynomial(std::vector<double> coefficients);
  /// (x^m - 1)/m, and log x for m = 0.
  static ScalarFn seth_hill(double m);
  static ScalarFn identity() { return monomial(1); }
  static ScalarFn constant(double c) { return polynomial({c}); }
  /// `domain` may be empty (entire real line).
  static ScalarFn callback(std::string name, int max_order, Callback fn,
                           std::function<bool(double)> domain = {});

  friend ScalarFn product(const ScalarFn& f, const ScalarFn& g);
  friend ScalarFn reciprocal(const ScalarFn& f);
  /// f o g, i.e. x -> f(g(x)).
  friend ScalarFn compose(const ScalarFn& f, const ScalarFn& g);

  /// Parses the textual grammar used by the CLI:
  ///   spec   := name [ ":" params ] | op "(" spec [ "," spec ] ")"
  ///   name   := monomial | power | exp | log | poly | seth_hill | sqrt | identity
  ///   op     := product | reciprocal | compose
  /// e.g. "seth_hill:-2", "monomial:3", "poly:1,0,-2", "compose(exp,log)".
  static ScalarFn parse(std::string_view spec);

  /// Canonical spec string; parse(f.spec()) reproduces f for every non-callback family.
  std::string spec() const;

  Family family() const;
  /// Highest derivative order available, kUnlimited for analytic families.
  int max_order() const;

  template <typename Real>
  bool in_domain(const Real& x) const;

  /// f^(l)(x). Throws DomainError outside the domain and ArgumentError when l exceeds
  /// max_order().
  template <typename Real>
  Real derivative(int l, const Real& x) const;

  template <typename Real>
  Real value(const Real& x) const {
    return derivative(0, x);
  }

  /// f^(k)(x)/k!, computed without forming k! where the family allows it.
  template <typename Real>
  Real taylor_coefficient(int k, const Real& x) const;

  /// Taylor coefficients f^(k)(x)/k! for k = 0..order.
  template <typename Real>
  std::vector<Real> jet(const Real& x, int order) const;

  /// Degree when f is a polynomial (monomial m >= 0, poly, Seth-Hill with positive integer
  /// m, non-negative integer power), otherwise -1.
  int polynomial_degree() const;

  /// Radius of convergence of the Taylor series about x. Infinity for entire
  /// functions, zero when unknown (callbacks and composites).
  template <typename Real>
  Real convergence_radius(const Real& x) const;

 private:
  struct Node {
    Family family{};
    int m = 0;
    double p = 0.0;
    std::vector<double> coeffs;
    std::string name;
    int max_order = kUnlimited;
    Callback cb;
    std::function<bool(double)> domain;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit ScalarFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  template <typename Real>
  static bool domain_of(const Node& n, const Real& x);
  template <typename Real>
  static Real derivative_of(const Node& n, int l, const Real& x);
  template <typename Real>
  static Real taylor_of(const Node& n, int k, const Real& x);
  template <typename Real>
  static std::vector<Real> jet_of(const Node& n, const Real& x, int order);
  static int max_order_of(const Node& n);
  static std::string spec_of(const Node& n);
  [[noreturn]] static void domain_failure(const Node& n, double x);
  [[noreturn]] static void order_failure(const Node& n, int l);

  std::shared_ptr<const Node> node_;
};

/// A scalar function with f(1) = 0, f'(1) = 1 and f' > 0 on (0, inf).
class StrainMeasure {
 public:
  /// Seth-Hill family; m = 0 gives the logarithmic measure.
  static StrainMeasure seth_hill(double m);
  /// Validates f(1) = 0 and f'(1) = 1 to 1e-12 and f' > 0 on a sample grid of (0, 10].
  static StrainMeasure from(ScalarFn f);

  const ScalarFn& fn() const { return fn_; }

 private:
  explicit StrainMeasure(ScalarFn f) : fn_(std::move(f)) {}
  ScalarFn fn_;
};

// ---------------------------------------------------------------------------

namespace detail {

template <typename Real>
Real ipow(const Real& x, long e) {
  if (e == 0) return Real(1);
  if (e < 0) return Real(1) / ipow(x, -e);
  Real result(1);
  Real base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Generalised binomial coefficient a(a-1)...(a-k+1)/k!.
template <typename Real>
Real binomial(const Real& a, int k) {
  Real b(1);
  for (int i = 0; i < k; ++i) b = b * (a - Real(i)) / Real(i + 1);
  return b;
}

/// a(a-1)...(a-k+1)
template <typename Real>
Real falling(const Real& a, int k) {
  Real b(1);
  for (int i = 0; i < k; ++i) b *= a - Real(i);
  return b;
}

template <typename Real>
Real factorial(int k) {
  Real f(1);
  for (int i = 2; i <= k; ++i) f *= Real(i);
  return f;
}

inline bool is_integer(double v) { return std::floor(v) == v; }

template <typename Real>
std::vector<Real> jet_product(const std::vector<Real>& a, const std::vector<Real>& b) {
  std::vector<Real> c(a.size(), Real(0));
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t i = 0; i <= k; ++i) c[k] += a[i] * b[k - i];
  }
  return c;
}

}  // namespace detail

template <typename Real>
bool ScalarFn::domain_of(const Node& n, const Real& x) {
  switch (n.family) {
    case Family::monomial:
      return n.m >= 0 || x > Real(0);
    case Family::power:
    case Family::log:
    case Family::seth_hill:
      return x > Real(0);
    case Family::exp:
    case Family::polynomial:
      return true;
    case Family::callback:
      return !n.domain || n.domain(static_cast<double>(x));
    case Family::product:
      return domain_of(*n.lhs, x) && domain_of(*n.rhs, x);
    case Family::reciprocal:
      return domain_of(*n.lhs, x) && derivative_of(*n.lhs, 0, x) != Real(0);
    case Family::composition:
      return domain_of(*n.rhs, x) && domain_of(*n.lhs, derivative_of(*n.rhs, 0, x));
  }
  return false;
}

template <typename Real>
Real ScalarFn::derivative_of(const Node& n, int l, const Real& x) {
  if (l < 0) throw ArgumentError("negative derivative order");
  if (l > max_order_of(n)) order_failure(n, l);
  if (!domain_of(n, x)) domain_failure(n, static_cast<double>(x));
  switch (n.family) {
    case Family::monomial:
      if (n.m >= 0 && l > n.m) return Real(0);
      return detail::falling(Real(n.m), l) * detail::ipow(x, long(n.m) - l);
    case Family::power:
      return detail::falling(Real(n.p), l) * pow(x, Real(n.p) - Real(l));
    case Family::exp:
      return exp(x);
    case Family::log:
      if (l == 0) return log(x);
      return ((l % 2 == 1) ? Real(1) : Real(-1)) * detail::factorial<Real>(l - 1) /
             detail::ipow(x, l);
    case Family::polynomial: {
      Real acc(0);
      for (int j = static_cast<int>(n.coeffs.size()) - 1; j >= l; --j) {
        acc = acc * x + Real(n.coeffs[j]) * detail::falling(Real(j), l);
      }
      return acc;
    }
    case Family::seth_hill: {
      const Real m(n.p);
      if (n.p == 0.0) {
        if (l == 0) return log(x);
        return ((l % 2 == 1) ? Real(1) : Real(-1)) * detail::factorial<Real>(l - 1) /
               detail::ipow(x, l);
      }
      if (l == 0) return expm1(m * log(x)) / m;
      // d^l/dx^l x^m/m = (m-1)(m-2)...(m-l+1) x^(m-l); exact at x = 1 for l = 1.
      Real c(1);
      for (int i = 1; i < l; ++i) c *= m - Real(i);
      if (detail::is_integer(n.p)) return c * detail::ipow(x, long(n.p) - l);
      return c * pow(x, m - Real(l));
    }
    case Family::callback:
      return static_cast<Real>(n.cb(l, static_cast<double>(x)));
    case Family::product:
    case Family::reciprocal:
    case Family::composition: {
      auto j = jet_of(n, x, l);
      return j[l] * detail::factorial<Real>(l);
    }
  }
  return Real(0);
}

template <typename Real>
Real ScalarFn::taylor_of(const Node& n, int k, const Real& x) {
  if (k < 0) throw ArgumentError("negative derivative order");
  switch (n.family) {
    case Family::monomial:
      if (k > max_order_of(n)) order_failure(n, k);
      if (!domain_of(n, x)) domain_failure(n, static_cast<double>(x));
      if (n.m >= 0 && k > n.m) return Real(0);
      return detail::binomial(Real(n.m), k) * detail::ipow(x, long(n.m) - k);
    case Family::power:
      if (!domain_of(n, x)) domain_failure(n, static_cast<double>(x));
      return detail::binomial(Real(n.p), k) * pow(x, Real(n.p) - Real(k));
    case Family::exp: {
      Real c = exp(x);
      for (int i = 2; i <= k; ++i) c /= Real(i);
      return c;
    }
    case Family::log:
      if (!domain_of(n, x)) domain_failure(n, static_cast<double>(x));
      if (k == 0) return log(x);
      return ((k % 2 == 1) ? Real(1) : Real(-1)) / (Real(k) * detail::ipow(x, k));
    case Family::polynomial: {
      Real acc(0);
      for (int j = static_cast<int>(n.coeffs.size()) - 1; j >= k; --j) {
        acc = acc * x + Real(n.coeffs[j]) * detail::binomial(Real(j), k);
      }
      return acc;
    }
    case Family::seth_hill: {
      if (!domain_of(n, x)) domain_failure(n, static_cast<double>(x));
      if (k == 0 || n.p == 0.0) return derivative_of(n, k, x) / detail::factorial<Real>(k);
      const Real m(n.p);
      const Real c = detail::binomial(m - Real(1), k - 1) / Real(k);
      if (detail::is_integer(n.p)) return c * detail::ipow(x, long(n.p) - k);
      return c * pow(x, m - Real(k));
    }
    case Family::callback:
      return derivative_of(n, k, x) / detail::factorial<Real>(k);
    case Family::product:
    case Family::reciprocal:
    case Family::composition:
      return jet_of(n, x, k)[k];
  }
  return Real(0);
}

template <typename Real>
std::vector<Real> ScalarFn::jet_of(const Node& n, const Real& x, int order) {
  if (order > max_order_of(n)) order_failure(n, order);
  switch (n.family) {
    case Family::product: {
      auto a = jet_of(*n.lhs, x, order);
      auto b = jet_of(*n.rhs, x, order);
      return detail::jet_product(a, b);
    }
    case Family::reciprocal: {
      auto a = jet_of(*n.lhs, x, order);
      if (a[0] == Real(0)) domain_failure(n, static_cast<double>(x));
      std::vector<Real> r(order + 1, Real(0));
      r[0] = Real(1) / a[0];
      for (int k = 1; k <= order; ++k) {
        Real s(0);
        for (int i = 1; i <= k; ++i) s += a[i] * r[k - i];
        r[k] = -s / a[0];
      }
      return r;
    }
    case Family::composition: {
      auto inner = jet_of(*n.rhs, x, order);
      auto outer = jet_of(*n.lhs, inner[0], order);
      std::vector<Real> delta = inner;
      delta[0] = Real(0);
      // Horner in the series delta = g(x + t) - g(x).
      std::vector<Real> r(order + 1, Real(0));
      r[0] = outer[order];
      for (int j = order - 1; j >= 0; --j) {
        r = detail::jet_product(r, delta);
        r[0] += outer[j];
      }
      return r;
    }
    default: {
      std::vector<Real> r(order + 1);
      for (int k = 0; k <= order; ++k) r[k] = taylor_of(n, k, x);
      return r;
    }
  }
}

template <typename Real>
bool ScalarFn::in_domain(const Real& x) const {
  return domain_of(*node_, x);
}

template <typename Real>
Real ScalarFn::derivative(int l, const Real& x) const {
  return derivative_of(*node_, l, x);
}

template <typename Real>
Real ScalarFn::taylor_coefficient(int k, const Real& x) const {
  if (k > max_order_of(*node_)) order_failure(*node_, k);
  return taylor_of(*node_, k, x);
}

template <typename Real>
std::vector<Real> ScalarFn::jet(const Real& x, int order) const {
  return jet_of(*node_, x, order);
}

template <typename Real>
Real ScalarFn::convergence_radius(const Real& x) const {
  const Node& n = *node_;
  const Real inf = std::numeric_limits<Real>::infinity();
  switch (n.family) {
    case Family::monomial:
      return n.m >= 0 ? inf : abs(x);
    case Family::power:
      return (detail::is_integer(n.p) && n.p >= 0.0) ? inf : abs(x);
    case Family::exp:
    case Family::polynomial:
      return inf;
    case Family::log:
      return abs(x);
    case Family::seth_hill:
      return (detail::is_integer(n.p) && n.p > 0.0) ? inf : abs(x);
    default:
      return Real(0);
  }
}

}  // namespace tensorfn
