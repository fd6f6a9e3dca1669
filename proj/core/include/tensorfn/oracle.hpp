#pragma once

// Brute-force reference computations. They use different algorithms from the
// production paths on purpose and make no attempt to be fast.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/spectrum.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn::oracle {

inline constexpr int kMaxExpansionDegree = 12;

/// The O(X^k) parts of (A + X)^m, k = 0..m, collected over all placements of k
/// X-factors among the m slots.
template <typename Real>
struct BasicPerturbationSeries {
  int degree = 0;
  std::vector<Mat3<Real>> terms;    ///< terms[k] = O(X^k) part
  std::vector<long> term_counts;    ///< words contributing to terms[k], C(m, k)

  Mat3<Real> sum() const {
    Mat3<Real> s = Mat3<Real>::Zero();
    for (const auto& t : terms) s += t;
    return s;
  }
};

using PerturbationSeries = BasicPerturbationSeries<double>;

template <typename Real>
BasicPerturbationSeries<Real> expand_monomial(const Mat3<Real>& a, const Mat3<Real>& x, int m) {
  if (m < 0) throw ArgumentError("expansion degree must be non-negative");
  if (m > kMaxExpansionDegree) {
    throw ArgumentError("expansion degree " + std::to_string(m) + " exceeds the limit of " +
                        std::to_string(kMaxExpansionDegree));
  }
  BasicPerturbationSeries<Real> out;
  out.degree = m;
  out.terms.assign(m + 1, Mat3<Real>::Zero());
  out.term_counts.assign(m + 1, 0);
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    Mat3<Real> word = Mat3<Real>::Identity();
    int k = 0;
    for (int slot = 0; slot < m; ++slot) {
      if (mask & (1u << slot)) {
        word = (word * x).eval();
        ++k;
      } else {
        word = (word * a).eval();
      }
    }
    out.terms[k] += word;
    ++out.term_counts[k];
  }
  return out;
}

template <typename Real>
BasicPerturbationSeries<Real> expand_monomial(const BasicSymTensor<Real>& a, const BasicSymTensor<Real>& x, int m) {
  return expand_monomial(a.matrix(), x.matrix(), m);
}

/// Default step eps^(1/(n+2)) * max(|A|, 1).
template <typename Real>
Real default_fd_step(const BasicSymTensor<Real>& a, int n) {
  const Real scale = std::max(Real(1), a.norm());
  return pow(epsilon<Real>(), Real(1) / Real(n + 2)) * scale;
}

/// grad^(n) f(A) : X1 ... Xn from the mixed central difference over the 2^n sign
/// patterns, (2h)^-n sum_s (prod s_i) f(A + h sum s_i X_i). Error O(h^2).
/// A non-positive h selects default_fd_step.
template <typename Real>
Mat3<Real> finite_diff_derivative(const ScalarFn& f, const BasicSymTensor<Real>& a,
                                  const std::vector<BasicSymTensor<Real>>& xs, Real h = Real(0)) {
  const int n = static_cast<int>(xs.size());
  if (n < 1 || n > 3) throw ArgumentError("finite differences support orders 1..3");
  if (h <= Real(0)) h = default_fd_step(a, n);
  if (!(h > epsilon<Real>() * std::max(Real(1), a.norm()))) throw ArgumentError("finite-difference step underflow");
  Mat3<Real> acc = Mat3<Real>::Zero();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    BasicSymTensor<Real> p = a;
    Real sign(1);
    for (int i = 0; i < n; ++i) {
      const bool minus = mask & (1u << i);
      p += (minus ? -h : h) * xs[i];
      if (minus) sign = -sign;
    }
    acc += sign * apply_fn(decompose(p, 0.0), f).matrix();
  }
  return acc / detail::ipow(Real(2) * h, n);
}

/// l-th derivative of f at x by the (l+1)-point central difference with step h. O(h^2).
template <typename Real>
Real finite_diff_scalar(const ScalarFn& f, int l, const Real& x, const Real& h) {
  Real s(0);
  for (int k = 0; k <= l; ++k) {
    const Real c = detail::binomial(Real(l), k);
    const Real v = f.value(x + (Real(l) / Real(2) - Real(k)) * h);
    s += (k % 2 == 0 ? c : -c) * v;
  }
  return s / detail::ipow(h, l);
}

/// Interpolation data at one node: derivs[r] = f^(r)(x) for r < derivs.size().
template <typename Real>
struct HermiteNode {
  Real x;
  std::vector<Real> derivs;
};

/// Coefficients p_0..p_n of the degree-n polynomial matching all node data, from a
/// dense confluent Vandermonde solve. Throws NumericalError if the system is singular.
template <typename Real>
std::vector<Real> hermite_interp_solve(const std::vector<HermiteNode<Real>>& nodes, int n) {
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  int conditions = 0;
  for (const auto& nd : nodes) conditions += static_cast<int>(nd.derivs.size());
  if (n < 0 || conditions != n + 1) {
    throw ArgumentError("Hermite problem of degree " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                        " conditions, got " + std::to_string(conditions));
  }
  Mat m = Mat::Zero(n + 1, n + 1);
  Vec rhs(n + 1);
  int row = 0;
  for (const auto& nd : nodes) {
    for (int r = 0; r < static_cast<int>(nd.derivs.size()); ++r) {
      for (int k = r; k <= n; ++k) m(row, k) = detail::falling(Real(k), r) * detail::ipow(nd.x, k - r);
      rhs(row) = nd.derivs[r];
      ++row;
    }
  }
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(Real(64) * epsilon<Real>());
  if (lu.rank() < n + 1) throw NumericalError("singular Hermite interpolation system");
  const Vec p = lu.solve(rhs);
  return std::vector<Real>(p.data(), p.data() + p.size());
}

/// Interpolation data for f at nodes alpha_l with multiplicities nu_l.
template <typename Real>
std::vector<HermiteNode<Real>> hermite_data(const ScalarFn& f, std::span<const Real> alphas, std::span<const int> nu) {
  std::vector<HermiteNode<Real>> out;
  for (std::size_t l = 0; l < alphas.size() && l < nu.size(); ++l) {
    if (nu[l] == 0) continue;
    HermiteNode<Real> nd{alphas[l], {}};
    for (int r = 0; r < nu[l]; ++r) nd.derivs.push_back(f.derivative(r, alphas[l]));
    out.push_back(std::move(nd));
  }
  return out;
}

/// Sum of x_1^i_1 ... x_k^i_k over all i_1 + ... + i_k = degree, by enumeration.
template <typename Real>
Real monomial_word_sum(std::span<const Real> x, int degree) {
  if (degree < 0) return Real(0);
  if (x.empty()) return degree == 0 ? Real(1) : Real(0);
  if (x.size() == 1) return detail::ipow(x[0], degree);
  Real s(0);
  Real p(1);
  for (int i = 0; i <= degree; ++i) {
    s += p * monomial_word_sum(x.subspan(1), degree - i);
    p *= x[0];
  }
  return s;
}

}  // namespace tensorfn::oracle
