#pragma once

#include <span>
#include <vector>

#include "tensorfn/coefficients.hpp"
#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"

namespace tensorfn {

// Explicit coefficient formulas for the multiplicity patterns needed up to the fourth
// derivative. Independent of the production engine; used for verification.
namespace closed_form {

/// Pattern (0, 0, n+1): f^(n)(ak) / n!.
template <typename Real>
Real single_node(const ScalarFn& f, int n, const Real& ak) {
  return f.taylor_coefficient(n, ak);
}

/// Pattern (0, 1, n): aj once, ak n times.
template <typename Real>
Real one_plus_n(const ScalarFn& f, int n, const Real& aj, const Real& ak) {
  const Real h = aj - ak;
  Real taylor(0);
  for (int l = n - 1; l >= 0; --l) taylor = taylor * h + f.taylor_coefficient(l, ak);
  return (f.value(aj) - taylor) / detail::ipow(h, n);
}

/// Pattern (0, 2, n-1): aj twice, ak n-1 times.
template <typename Real>
Real two_plus_rest(const ScalarFn& f, int n, const Real& aj, const Real& ak) {
  const Real h = aj - ak;
  Real sum(0);
  Real hl(1);
  for (int l = 0; l <= n - 2; ++l) {
    sum += Real(n - 1 - l) * hl * f.taylor_coefficient(l, ak);
    hl *= h;
  }
  sum += h * f.derivative(1, aj) - Real(n - 1) * f.value(aj);
  return sum / detail::ipow(h, n);
}

/// Pattern (1, 1, n-1): ai and aj once, ak n-1 times.
template <typename Real>
Real one_one_rest(const ScalarFn& f, int n, const Real& ai, const Real& aj, const Real& ak) {
  const Real xi = ai - ak;
  const Real xj = aj - ak;
  Real s = f.value(ai) / detail::ipow(xi, n - 1) - f.value(aj) / detail::ipow(xj, n - 1);
  for (int l = 0; l <= n - 2; ++l) {
    s -= f.taylor_coefficient(l, ak) * (Real(1) / detail::ipow(xi, n - 1 - l) - Real(1) / detail::ipow(xj, n - 1 - l));
  }
  return s / (ai - aj);
}

/// Pattern (1, 2, n-2): ai once, aj twice, ak n-2 times.
template <typename Real>
Real one_two_rest(const ScalarFn& f, int n, const Real& ai, const Real& aj, const Real& ak) {
  const Real xi = ai - ak;
  const Real xj = aj - ak;
  const Real r = (aj - ai) / xj;
  Real s = f.value(ai) / detail::ipow(xi, n - 2) -
           f.value(aj) / detail::ipow(xj, n - 2) * (Real(1) + Real(n - 2) * r) +
           (aj - ai) / detail::ipow(xj, n - 2) * f.derivative(1, aj);
  for (int l = 0; l <= n - 3; ++l) {
    s -= f.taylor_coefficient(l, ak) *
         (Real(1) / detail::ipow(xi, n - 2 - l) -
          Real(1) / detail::ipow(xj, n - 2 - l) * (Real(1) + Real(n - l - 2) * r));
  }
  return s / ((ai - aj) * (ai - aj));
}

/// First-derivative table entry: f'(ai) on the diagonal, else the difference quotient.
template <typename Real>
Real gradient_entry(const ScalarFn& f, const Real& ai, const Real& aj, bool same) {
  if (same) return f.derivative(1, ai);
  return (f.value(ai) - f.value(aj)) / (ai - aj);
}

/// Second-derivative table, all labels equal.
template <typename Real>
Real second_iii(const ScalarFn& f, const Real& ai) {
  return f.derivative(2, ai) / Real(2);
}

/// Second-derivative table, labels (i, i, j).
template <typename Real>
Real second_iij(const ScalarFn& f, const Real& ai, const Real& aj) {
  const Real h = aj - ai;
  return (f.value(aj) - f.value(ai) - h * f.derivative(1, ai)) / (h * h);
}

/// Second-derivative table, three distinct labels, in the quotient form of the
/// classical isotropic-function literature.
template <typename Real>
Real second_ijk(const ScalarFn& f, const Real& ai, const Real& aj, const Real& ak) {
  const Real fi = f.value(ai);
  const Real fj = f.value(aj);
  const Real fk = f.value(ak);
  const Real num = (fj - fi) * (ai + aj - Real(2) * ak) - (fi + fj - Real(2) * fk) * (aj - ai);
  return num / (Real(2) * (ai - aj) * (aj - ak) * (ak - ai));
}

/// Limit form of the (i, i, k) second-derivative entry.
template <typename Real>
Real second_iik_limit(const ScalarFn& f, const Real& ai, const Real& ak) {
  const Real h = ai - ak;
  return f.derivative(1, ai) / h - (f.value(ai) - f.value(ak)) / (h * h);
}

/// Limit form of the (i, j, k, k) third-derivative entry.
template <typename Real>
Real third_ijkk_limit(const ScalarFn& f, const Real& ai, const Real& aj, const Real& ak) {
  const Real fk = f.value(ak);
  const Real xi = ai - ak;
  const Real xj = aj - ak;
  return ((f.value(ai) - fk) / (xi * xi) - (f.value(aj) - fk) / (xj * xj)) / (ai - aj) +
         f.derivative(1, ak) / (xi * xj);
}

/// sum_i f(x_i) / prod_{j != i} (x_i - x_j) over pairwise distinct nodes.
template <typename Real>
Real partial_fraction_sum(const ScalarFn& f, std::span<const Real> x) {
  Real s(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    Real p(1);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      if (x[i] == x[j]) throw ArgumentError("partial fraction sum needs distinct nodes");
      p *= x[i] - x[j];
    }
    s += f.value(x[i]) / p;
  }
  return s;
}

/// Leading coefficient of the degree-n interpolant through f(x1), f(x2) and
/// f^(l)(x3), l <= n-2: a pair of linear equations after shifting x3 to the origin.
template <typename Real>
Real interpolant_two_values(const ScalarFn& f, int n, const Real& x1, const Real& x2, const Real& x3) {
  const Real y1 = x1 - x3;
  const Real y2 = x2 - x3;
  const Real d1 = detail::ipow(y1, n - 1);
  const Real d2 = detail::ipow(y2, n - 1);
  Real s = f.value(x1) / d1 - f.value(x2) / d2;
  for (int l = 0; l <= n - 2; ++l) {
    s -= f.taylor_coefficient(l, x3) * (detail::ipow(y1, l) / d1 - detail::ipow(y2, l) / d2);
  }
  return s / (y1 - y2);
}

/// Leading coefficient of the degree-n interpolant through f(x1), f(x2), f'(x2) and
/// f^(l)(x3), l <= n-3: three simultaneous equations after shifting x3 to the origin.
template <typename Real>
Real interpolant_value_and_slope(const ScalarFn& f, int n, const Real& x1, const Real& x2,
                                 const Real& x3) {
  const Real y1 = x1 - x3;
  const Real y2 = x2 - x3;
  const Real d1 = detail::ipow(y1, n - 2);
  const Real d2 = detail::ipow(y2, n - 2);
  const Real q = y1 / y2 - Real(1);
  Real s = f.value(x1) / d1 - f.value(x2) / d2 * (Real(1) - Real(n - 2) * q) +
           f.derivative(1, x2) / d2 * (y2 - y1);
  for (int l = 0; l <= n - 3; ++l) {
    s -= f.taylor_coefficient(l, x3) *
         (detail::ipow(y1, l) / d1 - detail::ipow(y2, l) / d2 * (Real(1) - Real(n - 2 - l) * q));
  }
  return s / ((y1 - y2) * (y1 - y2));
}

}  // namespace closed_form

/// True when the class has one of the tabulated patterns (0,0,n+1), (0,1,n),
/// (0,2,n-1), (1,1,n-1), (1,2,n-2).
inline bool has_closed_form(const IndexClass& cls) {
  const auto p = cls.pattern();
  return p[0] <= 1 && p[1] <= 2;
}

/// Evaluates the tabulated explicit formula for the class. Throws ArgumentError for
/// any other pattern; use the divided-difference path there.
template <typename Real>
Real coeff_closed_form(const ScalarFn& f, const IndexClass& cls, std::span<const Real> alphas) {
  (void)class_nodes(cls, alphas);
  detail::require_distinct_labels(cls, alphas);
  const int n = cls.order();
  const auto p = cls.pattern();

  // Labels ordered by ascending multiplicity (ties by label), zero-count labels first.
  std::array<int, 3> lab{0, 1, 2};
  std::stable_sort(lab.begin(), lab.end(), [&](int a, int b) { return cls.nu[a] < cls.nu[b]; });
  auto alpha = [&](int slot) { return alphas[lab[slot]]; };

  if (p[0] == 0 && p[1] == 0) return closed_form::single_node(f, n, alpha(2));
  if (p[0] == 0 && p[1] == 1) return closed_form::one_plus_n(f, n, alpha(1), alpha(2));
  if (p[0] == 0 && p[1] == 2) return closed_form::two_plus_rest(f, n, alpha(1), alpha(2));
  if (p[0] == 1 && p[1] == 1) return closed_form::one_one_rest(f, n, alpha(0), alpha(1), alpha(2));
  if (p[0] == 1 && p[1] == 2) return closed_form::one_two_rest(f, n, alpha(0), alpha(1), alpha(2));
  throw ArgumentError("no closed form for multiplicity pattern (" + std::to_string(p[0]) + "," +
                      std::to_string(p[1]) + "," + std::to_string(p[2]) + ")");
}

}  // namespace tensorfn
