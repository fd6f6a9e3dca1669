#pragma once

#include <span>
#include <vector>

#include "tensorfn/coefficients.hpp"
#include "tensorfn/errors.hpp"
#include "tensorfn/multilinear.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/spectrum.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn {

/// (1/n!) grad^(n) f(A) = sum over (i1..i(n+1)) of f_{i1..i(n+1)} A_i1 [x] ... [x] A_i(n+1),
/// held as the spectrum plus the coefficient table. Never expanded densely.
template <typename Real>
class BasicSpectralDerivative {
 public:
  BasicSpectralDerivative(BasicSpectrum<Real> spectrum, BasicCoeffTable<Real> coeffs)
      : spectrum_(std::move(spectrum)), coeffs_(std::move(coeffs)) {
    if (coeffs_.d() != spectrum_.d()) throw ArgumentError("coefficient table does not match spectrum");
  }

  int order() const { return coeffs_.order(); }
  const BasicSpectrum<Real>& spectrum() const { return spectrum_; }
  const BasicCoeffTable<Real>& coeffs() const { return coeffs_; }

  /// (1/n!) grad^(n) f : X1 ... Xn = sum c A_i1 X1 A_i2 X2 ... Xn A_i(n+1).
  /// The result is not symmetric in general when the directions differ.
  Mat3<Real> contract(std::span<const Mat3<Real>> xs) const {
    if (static_cast<int>(xs.size()) != order()) {
      throw ArgumentError("derivative of order " + std::to_string(order()) + " contracts with " +
                          std::to_string(order()) + " directions, got " + std::to_string(xs.size()));
    }
    std::vector<Mat3<Real>> proj(spectrum_.d());
    for (int i = 0; i < spectrum_.d(); ++i) proj[i] = spectrum_.projector(i).matrix();
    Mat3<Real> out = Mat3<Real>::Zero();
    std::array<int, 3> counts{0, 0, 0};
    for (int i = 0; i < spectrum_.d(); ++i) {
      ++counts[i];
      accumulate(xs, proj, 0, proj[i], counts, out);
      --counts[i];
    }
    return out;
  }

  Mat3<Real> contract(const std::vector<BasicSymTensor<Real>>& xs) const {
    std::vector<Mat3<Real>> dense;
    for (const auto& x : xs) dense.push_back(x.matrix());
    return contract(std::span<const Mat3<Real>>(dense));
  }

  /// Same contraction with one direction repeated n times.
  Mat3<Real> contract_power(const Mat3<Real>& x) const {
    const std::vector<Mat3<Real>> xs(order(), x);
    return contract(std::span<const Mat3<Real>>(xs));
  }

  /// Every (weight, box product) term over the d^(n+1) index tuples.
  std::vector<std::pair<Real, BasicBoxProduct<Real>>> box_terms() const {
    std::vector<std::pair<Real, BasicBoxProduct<Real>>> out;
    const int d = spectrum_.d();
    const int k = order() + 1;
    std::vector<int> idx(k, 0);
    while (true) {
      std::vector<Mat3<Real>> factors;
      for (int i : idx) factors.push_back(spectrum_.projector(i).matrix());
      out.emplace_back(coeffs_.at(std::span<const int>(idx)), BasicBoxProduct<Real>(std::move(factors)));
      int p = k - 1;
      while (p >= 0 && ++idx[p] == d) idx[p--] = 0;
      if (p < 0) break;
    }
    return out;
  }

  /// n = 1 only: the gradient as a fourth-order tensor.
  BasicFourthTensor<Real> as_fourth() const {
    if (order() != 1) throw ArgumentError("only the first derivative is a fourth-order tensor");
    BasicFourthTensor<Real> t;
    for (int i = 0; i < spectrum_.d(); ++i) {
      for (int j = 0; j < spectrum_.d(); ++j) {
        t.add(coeffs_.at({i, j}), spectrum_.projector(i).matrix(), spectrum_.projector(j).matrix());
      }
    }
    return t;
  }

  /// Dense components of (1/n!) grad^(n) f, 3^(2(n+1)) entries in the documented layout.
  std::vector<Real> dense() const {
    std::vector<Real> out;
    for (const auto& [w, box] : box_terms()) {
      const auto part = dense_components(box);
      if (out.empty()) out.assign(part.size(), Real(0));
      for (std::size_t q = 0; q < part.size(); ++q) out[q] += w * part[q];
    }
    return out;
  }

 private:
  // prefix = A_i1 X1 A_i2 ... A_i(m+1) after consuming m directions.
  void accumulate(std::span<const Mat3<Real>> xs, const std::vector<Mat3<Real>>& proj,
                  std::size_t m, const Mat3<Real>& prefix,
                  std::array<int, 3>& counts, Mat3<Real>& out) const {
    if (m == xs.size()) {
      out += coeffs_.at_counts(counts) * prefix;
      return;
    }
    const Mat3<Real> px = prefix * xs[m];
    for (int i = 0; i < spectrum_.d(); ++i) {
      ++counts[i];
      accumulate(xs, proj, m + 1, (px * proj[i]).eval(), counts, out);
      --counts[i];
    }
  }

  BasicSpectrum<Real> spectrum_;
  BasicCoeffTable<Real> coeffs_;
};

using SpectralDerivative = BasicSpectralDerivative<double>;

struct DerivativeOptions {
  double cluster_tol = kDefaultClusterTol;
  TableOptions table{};
};

template <typename Real>
BasicSpectralDerivative<Real> derivative(const ScalarFn& f, const BasicSpectrum<Real>& s, int n,
                                         TableOptions options = {}) {
  if (n < 1) throw ArgumentError("derivative order must be at least 1");
  for (int i = 0; i < s.d(); ++i) (void)f.value(s.alpha(i));  // domain check
  return BasicSpectralDerivative<Real>(s, build_table(f, s, n, options));
}

template <typename Real>
BasicSpectralDerivative<Real> derivative(const ScalarFn& f, const BasicSymTensor<Real>& a, int n,
                                         DerivativeOptions options = {}) {
  return derivative(f, decompose(a, options.cluster_tol), n, options.table);
}

/// (1/n!) grad^(n) f(A) : X1 ... Xn.
template <typename Real>
Mat3<Real> contract_dirs(const BasicSpectralDerivative<Real>& dv,
                         const std::vector<BasicSymTensor<Real>>& xs) {
  return dv.contract(xs);
}

/// f(A) + sum_{k=1..n} (1/k!) grad^(k) f(A) : X ... X.
template <typename Real>
BasicSymTensor<Real> taylor_eval(const ScalarFn& f, const BasicSpectrum<Real>& s,
                                 const BasicSymTensor<Real>& x, int n, TableOptions options = {}) {
  if (n < 0) throw ArgumentError("Taylor order must be non-negative");
  Mat3<Real> sum = apply_fn(s, f).matrix();
  const Mat3<Real> xm = x.matrix();
  for (int k = 1; k <= n; ++k) sum += derivative(f, s, k, options).contract_power(xm);
  return BasicSymTensor<Real>::symmetric_part(sum);
}

template <typename Real>
BasicSymTensor<Real> taylor_eval(const ScalarFn& f, const BasicSymTensor<Real>& a,
                                 const BasicSymTensor<Real>& x, int n, DerivativeOptions options = {}) {
  return taylor_eval(f, decompose(a, options.cluster_tol), x, n, options.table);
}

/// grad f(A) as a fourth-order tensor.
template <typename Real>
BasicFourthTensor<Real> gradient(const ScalarFn& f, const BasicSymTensor<Real>& a,
                                 DerivativeOptions options = {}) {
  return derivative(f, a, 1, options).as_fourth();
}

/// grad(f g)(A) = (I [x] g(A)) grad f(A) + (f(A) [x] I) grad g(A).
template <typename Real>
BasicFourthTensor<Real> grad_product_rule(const ScalarFn& f, const ScalarFn& g,
                                          const BasicSymTensor<Real>& a, DerivativeOptions options = {}) {
  const auto s = decompose(a, options.cluster_tol);
  const Mat3<Real> id = Mat3<Real>::Identity();
  const auto gf = derivative(f, s, 1, options.table).as_fourth();
  const auto gg = derivative(g, s, 1, options.table).as_fourth();
  return compose4(BasicFourthTensor<Real>::box(id, apply_fn(s, g).matrix()), gf) +
         compose4(BasicFourthTensor<Real>::box(apply_fn(s, f).matrix(), id), gg);
}

/// grad(1/f)(A) = -(f^-1(A) [x] f^-1(A)) grad f(A).
template <typename Real>
BasicFourthTensor<Real> grad_reciprocal(const ScalarFn& f, const BasicSymTensor<Real>& a,
                                        DerivativeOptions options = {}) {
  const auto s = decompose(a, options.cluster_tol);
  std::vector<Real> inv(s.d());
  for (int i = 0; i < s.d(); ++i) {
    const Real v = f.value(s.alpha(i));
    if (v == Real(0)) throw DomainError(f.spec() + " vanishes at an eigenvalue; 1/f is undefined");
    inv[i] = Real(1) / v;
  }
  const Mat3<Real> finv = s.assemble(inv).matrix();
  return Real(-1) * compose4(BasicFourthTensor<Real>::box(finv, finv), derivative(f, s, 1, options.table).as_fourth());
}

/// grad(f o g)(A) = grad f(g(A)) grad g(A).
template <typename Real>
BasicFourthTensor<Real> grad_chain_rule(const ScalarFn& f, const ScalarFn& g,
                                        const BasicSymTensor<Real>& a, DerivativeOptions options = {}) {
  const auto s = decompose(a, options.cluster_tol);
  const auto ga = apply_fn(s, g);
  const auto outer = derivative(f, decompose(ga, options.cluster_tol), 1, options.table).as_fourth();
  return compose4(outer, derivative(g, s, 1, options.table).as_fourth());
}

}  // namespace tensorfn
