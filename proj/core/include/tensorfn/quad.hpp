#pragma once

// 113-bit binary floating point for the handful of checks whose signal sits below
// double rounding (fifth-order Taylor remainders, gaps of 1e-3 at order four).

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace tensorfn {

using quad = boost::multiprecision::float128;

}  // namespace tensorfn
