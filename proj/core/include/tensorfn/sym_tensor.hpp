#pragma once

#include <array>
#include <utility>
#include <ostream>
#include <string>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"

namespace tensorfn {

/// Symmetric second-order tensor on 3-space. Only the six independent entries are
/// stored (upper triangle, row-major: 00 01 02 11 12 22) so symmetry is exact.
template <typename Real>
class BasicSymTensor {
 public:
  BasicSymTensor() { c_.fill(Real(0)); }

  /// Throws ArgumentError on a non-finite entry.
  BasicSymTensor(Real a00, Real a01, Real a02, Real a11, Real a12, Real a22)
      : c_{a00, a01, a02, a11, a12, a22} {
    require_finite();
  }

  static BasicSymTensor zero() { return {}; }
  static BasicSymTensor identity() { return diag(Real(1), Real(1), Real(1)); }
  static BasicSymTensor diag(Real a, Real b, Real c) {
    return {a, Real(0), Real(0), b, Real(0), c};
  }

  /// Accepts a dense matrix whose asymmetry |m - m^t| is within `tol` times its
  /// norm (absolute when the norm is below one); stores the symmetric part.
  static BasicSymTensor from_matrix(const Mat3<Real>& m, Real tol = Real(1e-12)) {
    if (!is_finite(m)) throw ArgumentError("tensor has non-finite entries");
    Real scale = m.norm();
    if (scale < Real(1)) scale = Real(1);
    if ((m - m.transpose()).norm() > tol * scale) {
      throw ArgumentError("tensor is not symmetric");
    }
    const Mat3<Real> s = (m + m.transpose()) / Real(2);
    return {s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2)};
  }

  /// Symmetric part of an arbitrary matrix. No symmetry check.
  static BasicSymTensor symmetric_part(const Mat3<Real>& m) {
    const Mat3<Real> s = (m + m.transpose()) / Real(2);
    return {s(0, 0), s(0, 1), s(0, 2), s(1, 1), s(1, 2), s(2, 2)};
  }

  Real operator()(int i, int j) const { return c_[slot(i, j)]; }

  Mat3<Real> matrix() const {
    Mat3<Real> m;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
    }
    return m;
  }

  const std::array<Real, 6>& components() const { return c_; }

  Real trace() const { return c_[0] + c_[3] + c_[5]; }

  Real norm() const {
    Real s = c_[0] * c_[0] + c_[3] * c_[3] + c_[5] * c_[5] +
             Real(2) * (c_[1] * c_[1] + c_[2] * c_[2] + c_[4] * c_[4]);
    return sqrt(s);
  }

  template <typename Other>
  BasicSymTensor<Other> cast() const {
    return {static_cast<Other>(c_[0]), static_cast<Other>(c_[1]), static_cast<Other>(c_[2]),
            static_cast<Other>(c_[3]), static_cast<Other>(c_[4]), static_cast<Other>(c_[5])};
  }

  BasicSymTensor& operator+=(const BasicSymTensor& o) {
    for (int k = 0; k < 6; ++k) c_[k] += o.c_[k];
    return *this;
  }
  BasicSymTensor& operator-=(const BasicSymTensor& o) {
    for (int k = 0; k < 6; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  BasicSymTensor& operator*=(Real s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend BasicSymTensor operator+(BasicSymTensor a, const BasicSymTensor& b) { return a += b; }
  friend BasicSymTensor operator-(BasicSymTensor a, const BasicSymTensor& b) { return a -= b; }
  friend BasicSymTensor operator*(BasicSymTensor a, Real s) { return a *= s; }
  friend BasicSymTensor operator*(Real s, BasicSymTensor a) { return a *= s; }
  friend BasicSymTensor operator-(BasicSymTensor a) { return a *= Real(-1); }
  friend bool operator==(const BasicSymTensor&, const BasicSymTensor&) = default;

  friend std::ostream& operator<<(std::ostream& os, const BasicSymTensor& t) {
    return os << t.matrix();
  }

 private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int kRow[3] = {0, 3, 5};
    return kRow[i] + (j - i);
  }

  void require_finite() const {
    for (const auto& v : c_) {
      if (!is_finite(v)) throw ArgumentError("tensor has non-finite entries");
    }
  }

  std::array<Real, 6> c_;
};

using SymTensor = BasicSymTensor<double>;

}  // namespace tensorfn
