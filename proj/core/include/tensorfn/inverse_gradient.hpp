#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "tensorfn/coefficients.hpp"
#include "tensorfn/errors.hpp"
#include "tensorfn/multilinear.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/spectrum.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn {

/// The D = d(d+1)/2 fourth-order tensors built from the eigenprojectors:
/// A_i [x] A_i for i < d, then A_i [x] A_j + A_j [x] A_i for the pairs i < j.
template <typename Real>
class BasicFourthSpectralBasis {
 public:
  struct Element {
    int i;
    int j;
    BasicFourthTensor<Real> tensor;
  };

  explicit BasicFourthSpectralBasis(const BasicSpectrum<Real>& s) {
    const int d = s.d();
    for (int i = 0; i < d; ++i) {
      const Mat3<Real> p = s.projector(i).matrix();
      elements_.push_back({i, i, BasicFourthTensor<Real>::box(p, p)});
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const Mat3<Real> pi = s.projector(i).matrix();
        const Mat3<Real> pj = s.projector(j).matrix();
        auto t = BasicFourthTensor<Real>::box(pi, pj);
        t.add(Real(1), pj, pi);
        elements_.push_back({i, j, std::move(t)});
      }
    }
  }

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }
  const BasicFourthTensor<Real>& operator[](int k) const { return elements_[k].tensor; }

  /// sum_I c_I basis_I.
  BasicFourthTensor<Real> combine(const std::vector<Real>& c) const {
    if (static_cast<int>(c.size()) != size()) throw ArgumentError("basis coefficient count mismatch");
    BasicFourthTensor<Real> out;
    for (int k = 0; k < size(); ++k) out += c[k] * elements_[k].tensor;
    return out;
  }

 private:
  std::vector<Element> elements_;
};

using FourthSpectralBasis = BasicFourthSpectralBasis<double>;

/// Gradient coefficients in the basis order: f'(alpha_i), then pair difference quotients.
template <typename Real>
std::vector<Real> gradient_basis_coefficients(const ScalarFn& f, const BasicSpectrum<Real>& s) {
  std::vector<Real> c;
  for (int i = 0; i < s.d(); ++i) c.push_back(f.derivative(1, s.alpha(i)));
  for (int i = 0; i < s.d(); ++i) {
    for (int j = i + 1; j < s.d(); ++j) {
      const std::array<Real, 2> nodes{s.alpha(i), s.alpha(j)};
      c.push_back(divided_difference(f, std::span<const Real>(nodes)));
    }
  }
  return c;
}

namespace detail {

template <typename Real>
std::vector<Real> checked_strain_coefficients(const StrainMeasure& f, const BasicSpectrum<Real>& s) {
  require_positive(s, "a strain measure gradient");
  auto c = gradient_basis_coefficients(f.fn(), s);
  Real largest(0);
  for (const auto& v : c) largest = std::max(largest, abs(v));
  for (const auto& v : c) {
    if (!(v > Real(16) * epsilon<Real>() * largest)) {
      throw DomainError(f.fn().spec() + " is not strictly increasing on the spectrum (gradient coefficient " +
                        std::to_string(static_cast<double>(v)) + ")");
    }
  }
  return c;
}

}  // namespace detail

/// grad f(A) = sum f_I basis_I for a strain measure on a positive spectrum.
template <typename Real>
BasicFourthTensor<Real> grad_spectral(const StrainMeasure& f, const BasicSpectrum<Real>& s) {
  return BasicFourthSpectralBasis<Real>(s).combine(detail::checked_strain_coefficients(f, s));
}

/// grad^-1 f(A) = sum f_I^-1 basis_I.
template <typename Real>
BasicFourthTensor<Real> inverse_grad(const StrainMeasure& f, const BasicSpectrum<Real>& s) {
  auto c = detail::checked_strain_coefficients(f, s);
  for (auto& v : c) v = Real(1) / v;
  return BasicFourthSpectralBasis<Real>(s).combine(c);
}

namespace detail {

template <typename Real>
Mat3<Real> positive_matrix(const BasicSymTensor<Real>& a) {
  require_positive(decompose(a), "this operation");
  return a.matrix();
}

template <typename Real>
std::vector<Mat3<Real>> matrix_powers(const Mat3<Real>& base, int count) {
  std::vector<Mat3<Real>> p(count + 1);
  p[0] = Mat3<Real>::Identity();
  for (int k = 1; k <= count; ++k) p[k] = (p[k - 1] * base).eval();
  return p;
}

}  // namespace detail

/// Gradient of the integer-order Seth-Hill measure as a box sum of matrix powers:
/// (1/m) sum_{k=1..m} A^(m-k) [x] A^(k-1) for m > 0 and
/// (1/|m|) sum_{k=m+1..0} A^(m-k) [x] A^(k-1) for m < 0.
template <typename Real>
BasicFourthTensor<Real> seth_hill_sum_form(int m, const BasicSymTensor<Real>& a) {
  if (m == 0) throw ArgumentError("no box-sum form for m = 0; use log_inverse_integral");
  const Mat3<Real> am = detail::positive_matrix(a);
  const int p = m > 0 ? m : -m;
  const auto pw = detail::matrix_powers<Real>(m > 0 ? am : Mat3<Real>(am.inverse()), p);
  BasicFourthTensor<Real> out;
  const Real w = Real(1) / Real(p);
  if (m > 0) {
    for (int k = 1; k <= m; ++k) out.add(w, pw[m - k], pw[k - 1]);
  } else {
    for (int k = m + 1; k <= 0; ++k) out.add(w, pw[k - m], pw[1 - k]);
  }
  return out;
}

/// Inverse gradient of the Seth-Hill measure of order 1/m as a box sum of spectral
/// fractional powers: (1/m) sum_{k=1..m} A^(1-k/m) [x] A^((k-1)/m) for m > 0 and
/// (1/p) sum_{k=1..p} A^(k/p) [x] A^((p+1-k)/p) for m = -p < 0.
template <typename Real>
BasicFourthTensor<Real> seth_hill_fractional_inverse(int m, const BasicSymTensor<Real>& a) {
  if (m == 0) throw ArgumentError("fractional order 1/m needs m != 0");
  const auto s = decompose(a);
  require_positive(s, "a fractional Seth-Hill inverse gradient");
  const int p = m > 0 ? m : -m;
  auto pw = [&](int num) { return spectral_power(s, Real(num) / Real(p)).matrix(); };
  BasicFourthTensor<Real> out;
  const Real w = Real(1) / Real(p);
  for (int k = 1; k <= p; ++k) {
    if (m > 0) {
      out.add(w, pw(p - k), pw(k - 1));
    } else {
      out.add(w, pw(k), pw(p + 1 - k));
    }
  }
  return out;
}

/// Gauss-Legendre nodes and weights on [0, 1].
template <typename Real>
void gauss_legendre_unit(int points, std::vector<Real>& nodes, std::vector<Real>& weights) {
  if (points < 1) throw ArgumentError("quadrature needs at least one point");
  nodes.assign(points, Real(0));
  weights.assign(points, Real(0));
  const Real pi = std::numbers::pi_v<double>;
  for (int i = 0; i < (points + 1) / 2; ++i) {
    Real x = cos(pi * (Real(i) + Real(0.75)) / (Real(points) + Real(0.5)));
    Real dp(0);
    for (int it = 0; it < 100; ++it) {
      Real p0(1);
      Real p1 = x;
      for (int k = 2; k <= points; ++k) {
        const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(points) * (x * p1 - p0) / (x * x - Real(1));
      const Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= epsilon<Real>()) break;
    }
    const Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    nodes[i] = (Real(1) - x) / Real(2);
    nodes[points - 1 - i] = (Real(1) + x) / Real(2);
    weights[i] = weights[points - 1 - i] = w / Real(2);
  }
}

inline constexpr int kDefaultQuadPoints = 32;

/// grad^-1 ln(A) = int_0^1 A^x [x] A^(1-x) dx by Gauss-Legendre quadrature.
template <typename Real>
BasicFourthTensor<Real> log_inverse_integral(const BasicSymTensor<Real>& a, int quad_points = kDefaultQuadPoints) {
  const auto s = decompose(a);
  require_positive(s, "the logarithm inverse gradient");
  std::vector<Real> x, w;
  gauss_legendre_unit(quad_points, x, w);
  BasicFourthTensor<Real> out;
  for (int q = 0; q < quad_points; ++q) {
    out.add(w[q], spectral_power(s, x[q]).matrix(), spectral_power(s, Real(1) - x[q]).matrix());
  }
  return out;
}

/// Spectral form of the same tensor: sum (alpha_i - alpha_j)/(ln alpha_i - ln alpha_j) A_i [x] A_j.
template <typename Real>
BasicFourthTensor<Real> log_inverse_spectral(const BasicSpectrum<Real>& s) {
  require_positive(s, "the logarithm inverse gradient");
  const ScalarFn ln = ScalarFn::logarithm();
  BasicFourthTensor<Real> out;
  for (int i = 0; i < s.d(); ++i) {
    for (int j = 0; j < s.d(); ++j) {
      const std::array<Real, 2> nodes{s.alpha(i), s.alpha(j)};
      const Real r = Real(1) / divided_difference(ln, std::span<const Real>(nodes));
      out.add(r, s.projector(i).matrix(), s.projector(j).matrix());
    }
  }
  return out;
}

/// J(A) = A [x] I - I [x] A.
template <typename Real>
BasicFourthTensor<Real> j_tensor(const Mat3<Real>& a) {
  const Mat3<Real> id = Mat3<Real>::Identity();
  auto t = BasicFourthTensor<Real>::box(a, id);
  t.add(Real(-1), id, a);
  return t;
}

/// Moore-Penrose inverse of J: sum_{i != j} (alpha_i - alpha_j)^-1 A_i [x] A_j.
template <typename Real>
BasicFourthTensor<Real> j_pseudo_inverse(const BasicSpectrum<Real>& s) {
  BasicFourthTensor<Real> t;
  for (int i = 0; i < s.d(); ++i) {
    for (int j = 0; j < s.d(); ++j) {
      if (i == j) continue;
      t.add(Real(1) / (s.alpha(i) - s.alpha(j)), s.projector(i).matrix(), s.projector(j).matrix());
    }
  }
  return t;
}

/// sum_i v_i A_i [x] A_i over the projectors of s; v = alphas gives K(A).
template <typename Real>
BasicFourthTensor<Real> k_tensor(const BasicSpectrum<Real>& s, const std::vector<Real>& v) {
  if (static_cast<int>(v.size()) != s.d()) throw ArgumentError("K needs one value per eigenvalue");
  BasicFourthTensor<Real> t;
  for (int i = 0; i < s.d(); ++i) t.add(v[i], s.projector(i).matrix(), s.projector(i).matrix());
  return t;
}

template <typename Real>
BasicFourthTensor<Real> k_tensor(const BasicSpectrum<Real>& s) {
  return k_tensor(s, s.alphas());
}

template <typename Real>
BasicFourthTensor<Real> k_pseudo_inverse(const BasicSpectrum<Real>& s) {
  std::vector<Real> v;
  for (const auto& a : s.alphas()) v.push_back(Real(1) / a);
  return k_tensor(s, v);
}

template <typename Real>
struct BasicJKDecomposition {
  BasicFourthTensor<Real> gradient;  ///< K(f'(A)) + J*(A) J(f(A))
  BasicFourthTensor<Real> inverse;   ///< K*(f'(A)) + J(A) J*(f(A))
};

/// Gradient and inverse gradient of a strain measure assembled from J, J* and K.
/// K(f'(A)) and J*(f(A)) are taken over the eigenprojectors of A, which f preserves.
template <typename Real>
BasicJKDecomposition<Real> jk_decomposition(const StrainMeasure& f, const BasicSymTensor<Real>& a) {
  const auto s = decompose(a);
  require_positive(s, "the J/K decomposition");
  std::vector<Real> fv, dv;
  for (const auto& x : s.alphas()) {
    fv.push_back(f.fn().value(x));
    dv.push_back(f.fn().derivative(1, x));
  }
  std::vector<Real> dinv;
  for (const auto& v : dv) dinv.push_back(Real(1) / v);
  const BasicSpectrum<Real> fs(fv, s.projectors());
  const Mat3<Real> fa = s.assemble(fv).matrix();
  BasicJKDecomposition<Real> out;
  out.gradient = k_tensor(s, dv) + compose4(j_pseudo_inverse(s), j_tensor(fa));
  out.inverse = k_tensor(s, dinv) + compose4(j_tensor(a.matrix()), j_pseudo_inverse(fs));
  return out;
}

template <typename Real>
struct BasicCommutatorSolution {
  Mat3<Real> x;
  /// Frobenius norm of the part of Y in the null space of J (sum_i A_i Y A_i); the
  /// residual AX - XA - Y equals minus that part.
  Real null_residual;
};

/// Minimum-norm solution of AX - XA = Y, X = J*(A) Y.
template <typename Real>
BasicCommutatorSolution<Real> sylvester_commutator(const BasicSymTensor<Real>& a, const Mat3<Real>& y) {
  if (!is_finite(y)) throw ArgumentError("right-hand side has non-finite entries");
  const auto s = decompose(a);
  require_positive(s, "the commutator equation");
  Mat3<Real> null = Mat3<Real>::Zero();
  for (const auto& p : s.projectors()) null += p.matrix() * y * p.matrix();
  const Real null_norm = frobenius(null);
  if (s.d() == 1 && frobenius(y) > Real(0)) {
    throw DomainError("A is a multiple of the identity, so AX - XA = 0; only Y = 0 is solvable");
  }
  return {j_pseudo_inverse(s).apply(y), null_norm};
}

/// Left side sum_{k=1..m} A^(m-k) X A^(k-1) by direct matrix products.
template <typename Real>
Mat3<Real> sylvester_power_lhs(int m, const Mat3<Real>& a, const Mat3<Real>& x) {
  if (m < 1) throw ArgumentError("power equation needs m >= 1");
  const auto pw = detail::matrix_powers(a, m - 1);
  Mat3<Real> out = Mat3<Real>::Zero();
  for (int k = 1; k <= m; ++k) out += pw[m - k] * x * pw[k - 1];
  return out;
}

/// Solves sum_{k=1..m} A^(m-k) X A^(k-1) = C: X = sum (alpha_i - alpha_j)/(alpha_i^m - alpha_j^m) A_i C A_j,
/// the diagonal ratio being 1/(m alpha_i^(m-1)).
template <typename Real>
Mat3<Real> sylvester_power(int m, const BasicSymTensor<Real>& a, const Mat3<Real>& c) {
  if (m < 1) throw ArgumentError("power equation needs m >= 1");
  if (!is_finite(c)) throw ArgumentError("right-hand side has non-finite entries");
  const auto s = decompose(a);
  require_positive(s, "the power equation");
  const ScalarFn xm = ScalarFn::monomial(m);
  Mat3<Real> out = Mat3<Real>::Zero();
  for (int i = 0; i < s.d(); ++i) {
    for (int j = 0; j < s.d(); ++j) {
      const std::array<Real, 2> nodes{s.alpha(i), s.alpha(j)};
      const Real r = Real(1) / divided_difference(xm, std::span<const Real>(nodes));
      out += r * (s.projector(i).matrix() * c * s.projector(j).matrix());
    }
  }
  return out;
}

}  // namespace tensorfn
