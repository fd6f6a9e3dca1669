#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn {

// Box (square Kronecker) products. A single product of k second-order factors
// F0 [x] F1 [x] ... [x] F(k-1) is a tensor of order 2k that contracts with k-1
// second-order arguments as
//
//   (F0 [x] F1 [x] ... [x] F(k-1)) : X1 X2 ... X(k-1) = F0 X1 F1^t X2 F2^t ... X(k-1) F(k-1)^t.
//
// Dense components use the convention (A [x] B)_{ijkl} = A_ik B_jl, i.e.
// Y_ij = T_ijkl X_kl. For higher orders the index tuple is (i1 j1 i2 j2 ... ik jk)
// where (i1, j1) indexes the result and (i(m+1), j(m+1)) the m-th argument, so that
//
//   T_{a b c1 d1 ... c(k-1) d(k-1)} = F0_{a c1} F1_{c2 d1} F2_{c3 d2} ... F(k-1)_{b d(k-1)}.
//
// Arrays are stored row-major over that tuple (last index fastest).

template <typename Real>
class BasicBoxProduct {
 public:
  explicit BasicBoxProduct(std::vector<Mat3<Real>> factors) : factors_(std::move(factors)) {
    if (factors_.size() < 2) throw ArgumentError("a box product needs at least two factors");
  }

  std::size_t factor_count() const { return factors_.size(); }
  /// Tensor order 2k.
  std::size_t order() const { return 2 * factors_.size(); }
  const std::vector<Mat3<Real>>& factors() const { return factors_; }

 private:
  std::vector<Mat3<Real>> factors_;
};

using BoxProduct = BasicBoxProduct<double>;

/// Contract a box product with k-1 second-order tensors.
template <typename Real>
Mat3<Real> contract(const BasicBoxProduct<Real>& b, std::span<const Mat3<Real>> xs) {
  const auto& f = b.factors();
  if (xs.size() + 1 != f.size()) {
    throw ArgumentError("box product of " + std::to_string(f.size()) + " factors contracts with " +
                        std::to_string(f.size() - 1) + " tensors, got " +
                        std::to_string(xs.size()));
  }
  Mat3<Real> acc = f[0];
  for (std::size_t m = 0; m < xs.size(); ++m) acc = (acc * xs[m] * f[m + 1].transpose()).eval();
  return acc;
}

template <typename Real>
Mat3<Real> contract(const BasicBoxProduct<Real>& b, const std::vector<BasicSymTensor<Real>>& xs) {
  std::vector<Mat3<Real>> dense;
  dense.reserve(xs.size());
  for (const auto& x : xs) dense.push_back(x.matrix());
  return contract(b, std::span<const Mat3<Real>>(dense));
}

/// Fourth-order tensor held as a weighted sum of box products, sum w B [x] C.
/// The action on any second-order X is sum w B X C^t.
template <typename Real>
class BasicFourthTensor {
 public:
  struct Term {
    Real weight;
    Mat3<Real> left;
    Mat3<Real> right;
  };

  BasicFourthTensor() = default;

  static BasicFourthTensor box(const Mat3<Real>& left, const Mat3<Real>& right, Real weight = Real(1)) {
    BasicFourthTensor t;
    t.terms_.push_back({weight, left, right});
    return t;
  }
  static BasicFourthTensor box(const BasicSymTensor<Real>& left, const BasicSymTensor<Real>& right,
                               Real weight = Real(1)) {
    return box(left.matrix(), right.matrix(), weight);
  }
  /// I [x] I.
  static BasicFourthTensor identity() {
    return box(Mat3<Real>::Identity().eval(), Mat3<Real>::Identity().eval());
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(Real weight, const Mat3<Real>& left, const Mat3<Real>& right) {
    terms_.push_back({weight, left, right});
  }

  Mat3<Real> apply(const Mat3<Real>& x) const {
    Mat3<Real> y = Mat3<Real>::Zero();
    for (const auto& t : terms_) y += t.weight * (t.left * x * t.right.transpose());
    return y;
  }
  Mat3<Real> apply(const BasicSymTensor<Real>& x) const { return apply(x.matrix()); }

  /// 9x9 matrix acting on row-major vec(X): entry ((i,j),(k,l)) = T_ijkl.
  Eigen::Matrix<Real, 9, 9> matrix() const {
    Eigen::Matrix<Real, 9, 9> m = Eigen::Matrix<Real, 9, 9>::Zero();
    for (const auto& t : terms_) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) m(3 * i + j, 3 * k + l) += t.weight * t.left(i, k) * t.right(j, l);
    }
    return m;
  }

  BasicFourthTensor& operator+=(const BasicFourthTensor& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  BasicFourthTensor& operator*=(Real s) {
    for (auto& t : terms_) t.weight *= s;
    return *this;
  }
  friend BasicFourthTensor operator+(BasicFourthTensor a, const BasicFourthTensor& b) { return a += b; }
  friend BasicFourthTensor operator-(BasicFourthTensor a, BasicFourthTensor b) {
    b *= Real(-1);
    return a += b;
  }
  friend BasicFourthTensor operator*(Real s, BasicFourthTensor a) { return a *= s; }
  friend BasicFourthTensor operator*(BasicFourthTensor a, Real s) { return a *= s; }

 private:
  std::vector<Term> terms_;
};

using FourthTensor = BasicFourthTensor<double>;

/// p o q, the map X -> p(q(X)), via (A [x] B)(X [x] Y) = (AX) [x] (BY).
template <typename Real>
BasicFourthTensor<Real> compose4(const BasicFourthTensor<Real>& p, const BasicFourthTensor<Real>& q) {
  BasicFourthTensor<Real> out;
  for (const auto& a : p.terms()) {
    for (const auto& b : q.terms()) {
      out.add(a.weight * b.weight, (a.left * b.left).eval(), (a.right * b.right).eval());
    }
  }
  return out;
}

template <typename Real>
BasicFourthTensor<Real> operator*(const BasicFourthTensor<Real>& p, const BasicFourthTensor<Real>& q) {
  return compose4(p, q);
}

/// Largest absolute component of p - q as maps on Lin (9x9 matrix form).
template <typename Real>
Real max_abs_difference(const BasicFourthTensor<Real>& p, const BasicFourthTensor<Real>& q) {
  return (p.matrix() - q.matrix()).cwiseAbs().maxCoeff();
}

/// Row-major dense component array of size 3^(2k); see the layout note above.
template <typename Real>
std::vector<Real> dense_components(const BasicBoxProduct<Real>& b) {
  const auto& f = b.factors();
  const std::size_t k = f.size();
  const std::size_t order = 2 * k;
  std::size_t size = 1;
  for (std::size_t i = 0; i < order; ++i) size *= 3;
  std::vector<Real> out(size);
  std::vector<int> idx(order, 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rem = flat;
    for (std::size_t p = order; p-- > 0;) {
      idx[p] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    // idx = (a, b, c1, d1, c2, d2, ...)
    const int a = idx[0];
    const int bb = idx[1];
    Real v = f[0](a, idx[2]);
    for (std::size_t m = 1; m + 1 < k; ++m) v *= f[m](idx[2 * (m + 1)], idx[2 * m + 1]);
    v *= f[k - 1](bb, idx[2 * (k - 1) + 1]);
    out[flat] = v;
  }
  return out;
}

template <typename Real>
std::vector<Real> dense_components(const BasicFourthTensor<Real>& t) {
  std::vector<Real> out(81, Real(0));
  for (const auto& term : t.terms()) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            out[27 * i + 9 * j + 3 * k + l] += term.weight * term.left(i, k) * term.right(j, l);
  }
  return out;
}

}  // namespace tensorfn
