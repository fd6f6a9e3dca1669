#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "tensorfn/errors.hpp"
#include "tensorfn/real.hpp"
#include "tensorfn/scalar_function.hpp"
#include "tensorfn/sym_tensor.hpp"

namespace tensorfn {

inline constexpr double kDefaultClusterTol = 1e-7;

/// Distinct eigenvalues (ascending) and the matching orthogonal eigenprojectors.
template <typename Real>
class BasicSpectrum {
 public:
  BasicSpectrum(std::vector<Real> alphas, std::vector<BasicSymTensor<Real>> projectors)
      : alphas_(std::move(alphas)), projectors_(std::move(projectors)) {
    if (alphas_.empty() || alphas_.size() > 3 || alphas_.size() != projectors_.size()) {
      throw ArgumentError("spectrum needs 1..3 eigenvalues, one projector each");
    }
  }

  /// Eigen-index: number of distinct eigenvalues.
  int d() const { return static_cast<int>(alphas_.size()); }
  const std::vector<Real>& alphas() const { return alphas_; }
  Real alpha(int i) const { return alphas_[i]; }
  const std::vector<BasicSymTensor<Real>>& projectors() const { return projectors_; }
  const BasicSymTensor<Real>& projector(int i) const { return projectors_[i]; }
  bool positive() const { return alphas_.front() > Real(0); }

  /// sum_i g_i A_i for per-eigenvalue values g_i.
  BasicSymTensor<Real> assemble(const std::vector<Real>& values) const {
    BasicSymTensor<Real> out;
    for (int i = 0; i < d(); ++i) out += values[i] * projectors_[i];
    return out;
  }

  BasicSymTensor<Real> reconstruct() const { return assemble(alphas_); }

 private:
  std::vector<Real> alphas_;
  std::vector<BasicSymTensor<Real>> projectors_;
};

using Spectrum = BasicSpectrum<double>;

namespace detail {

/// Cyclic Jacobi for a symmetric 3x3 matrix. Returns eigenvalues (unsorted) and the
/// orthogonal matrix whose columns are the eigenvectors.
template <typename Real>
void jacobi_eigen(Mat3<Real> a, std::array<Real, 3>& values, Mat3<Real>& vectors) {
  vectors.setIdentity();
  const Real scale = a.norm();
  const Real tiny = epsilon<Real>() * epsilon<Real>() * scale * scale;
  constexpr int kMaxSweeps = 64;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const Real off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off <= tiny) {
      converged = true;
      break;
    }
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const Real apq = a(p, q);
        if (apq == Real(0)) continue;
        const Real theta = (a(q, q) - a(p, p)) / (Real(2) * apq);
        const Real t = (theta >= Real(0) ? Real(1) : Real(-1)) /
                       (abs(theta) + sqrt(theta * theta + Real(1)));
        const Real c = Real(1) / sqrt(t * t + Real(1));
        const Real s = t * c;
        Mat3<Real> rot = Mat3<Real>::Identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        a = (rot.transpose() * a * rot).eval();
        a(p, q) = a(q, p) = Real(0);
        vectors = (vectors * rot).eval();
      }
    }
  }
  if (!converged) {
    throw NumericalError("Jacobi eigen-solver did not converge (ill-conditioned input)");
  }
  for (int i = 0; i < 3; ++i) values[i] = a(i, i);
}

}  // namespace detail

/// Spectral decomposition with eigenvalue clustering.
///
/// Raw eigenvalues whose consecutive gap is at most cluster_tol * max(spectral radius, 1)
/// are merged: the cluster eigenvalue is their mean and its projector the sum of the
/// rank-one eigenprojectors.
template <typename Real>
BasicSpectrum<Real> decompose(const BasicSymTensor<Real>& a, double cluster_tol = kDefaultClusterTol) {
  if (!(cluster_tol >= 0.0)) throw ArgumentError("cluster tolerance must be non-negative");
  const Mat3<Real> m = a.matrix();
  if (!is_finite(m)) throw ArgumentError("tensor has non-finite entries");

  std::array<Real, 3> values;
  Mat3<Real> vectors;
  detail::jacobi_eigen(m, values, vectors);

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return values[i] < values[j]; });

  Real radius = std::max(abs(values[order[0]]), abs(values[order[2]]));
  if (radius < Real(1)) radius = Real(1);
  const Real gap_tol = Real(cluster_tol) * radius;

  std::vector<Real> alphas;
  std::vector<BasicSymTensor<Real>> projectors;
  int k = 0;
  while (k < 3) {
    int end = k + 1;
    while (end < 3 && values[order[end]] - values[order[end - 1]] <= gap_tol) ++end;
    Real sum(0);
    Mat3<Real> p = Mat3<Real>::Zero();
    for (int r = k; r < end; ++r) {
      const auto v = vectors.col(order[r]);
      sum += values[order[r]];
      p += v * v.transpose();
    }
    alphas.push_back(sum / Real(end - k));
    projectors.push_back(BasicSymTensor<Real>::symmetric_part(p));
    k = end;
  }
  return BasicSpectrum<Real>(std::move(alphas), std::move(projectors));
}

/// f(A) = sum_i f(alpha_i) A_i. Throws DomainError when some alpha_i is outside the
/// domain of f.
template <typename Real>
BasicSymTensor<Real> apply_fn(const BasicSpectrum<Real>& s, const ScalarFn& f) {
  std::vector<Real> values(s.d());
  for (int i = 0; i < s.d(); ++i) values[i] = f.value(s.alpha(i));
  return s.assemble(values);
}

template <typename Real>
BasicSymTensor<Real> apply_fn(const BasicSymTensor<Real>& a, const ScalarFn& f,
                              double cluster_tol = kDefaultClusterTol) {
  return apply_fn(decompose(a, cluster_tol), f);
}

/// A^p computed spectrally; requires a positive spectrum unless p is a non-negative integer.
template <typename Real>
BasicSymTensor<Real> spectral_power(const BasicSpectrum<Real>& s, const Real& p) {
  const bool integral = static_cast<double>(p) == std::floor(static_cast<double>(p));
  if (!s.positive() && !(integral && p >= Real(0))) {
    throw DomainError("fractional or negative power of a tensor that is not positive definite");
  }
  std::vector<Real> values(s.d());
  for (int i = 0; i < s.d(); ++i) values[i] = pow(s.alpha(i), p);
  return s.assemble(values);
}

/// Common input check for the positive-definite-only operations.
template <typename Real>
void require_positive(const BasicSpectrum<Real>& s, const char* what) {
  if (!s.positive()) {
    throw DomainError(std::string(what) + " requires a positive definite tensor");
  }
}

}  // namespace tensorfn
