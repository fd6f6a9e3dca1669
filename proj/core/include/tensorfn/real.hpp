#pragma once

// Scalar-type plumbing shared by every module. All numerical code is templated
// on a floating-point type `Real`; double is the production instantiation and
// quad (see quad.hpp) is used where the float64 noise floor gets in the way.

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace tensorfn {

using std::abs;
using std::cos;
using std::exp;
using std::expm1;
using std::log;
using std::pow;
using std::sqrt;

template <typename Real>
using Mat3 = Eigen::Matrix<Real, 3, 3>;

using Matrix3 = Mat3<double>;

template <typename Real>
constexpr Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

/// False for NaN and +-Inf. Works for any type with IEEE-like semantics.
template <typename Real>
bool is_finite(const Real& x) {
  return x - x == Real(0);
}

template <typename Real>
bool is_finite(const Mat3<Real>& m) {
  for (int i = 0; i < 9; ++i) {
    if (!is_finite(m(i))) return false;
  }
  return true;
}

template <typename Real>
Real frobenius(const Mat3<Real>& m) {
  return m.norm();
}

}  // namespace tensorfn
