#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "tensorfn/scalar_function.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn::testing {

/// Seeded generator for property tests. Every suite owns one with a fixed seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Matrix3 rotation() {
    Eigen::Quaterniond q(normal(), normal(), normal(), normal());
    q.normalize();
    return q.toRotationMatrix();
  }

  SymTensor with_eigenvalues(const std::array<double, 3>& e) {
    const Matrix3 q = rotation();
    const Matrix3 m = q * Eigen::Vector3d(e[0], e[1], e[2]).asDiagonal() * q.transpose();
    return SymTensor::symmetric_part(m);
  }

  SymTensor sym(double scale = 1.0) {
    return SymTensor(scale * normal(), scale * normal(), scale * normal(), scale * normal(), scale * normal(),
                     scale * normal());
  }

  SymTensor unit_sym() {
    SymTensor x = sym();
    return x * (1.0 / x.norm());
  }

  /// Positive definite with eigenvalues log-uniform in [lo, lo * cond].
  SymTensor psym(double cond = 50.0, double lo = 0.5) {
    std::array<double, 3> e{};
    for (auto& v : e) v = lo * std::exp(uniform(0.0, std::log(cond)));
    return with_eigenvalues(e);
  }

  /// Three eigenvalues in [lo, hi] with pairwise gaps >= gap, ascending.
  std::array<double, 3> separated(double lo, double hi, double gap) {
    while (true) {
      std::array<double, 3> e{uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
      std::sort(e.begin(), e.end());
      if (e[1] - e[0] >= gap && e[2] - e[1] >= gap) return e;
    }
  }

  SymTensor separated_psym(double lo = 0.5, double hi = 4.0, double gap = 0.3) {
    return with_eigenvalues(separated(lo, hi, gap));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Smooth functions with derivatives that do not vanish on (0, inf).
inline std::vector<ScalarFn> smooth_families() {
  return {ScalarFn::exponential(), ScalarFn::logarithm(),        ScalarFn::power(0.5),
          ScalarFn::power(-1.5),   ScalarFn::seth_hill(-2),      ScalarFn::seth_hill(3.5),
          ScalarFn::monomial(7),   ScalarFn::polynomial({1, -2, 0.5, 3, 0.25, -0.1, 0.05})};
}

}  // namespace tensorfn::testing
