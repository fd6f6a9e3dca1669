#include <gtest/gtest.h>

#include <limits>

#include "support/random.hpp"
#include "tensorfn/spectrum.hpp"

using namespace tensorfn;
using tensorfn::testing::Gen;

namespace {

void expect_spectrum_invariants(const Spectrum& s, const SymTensor& a) {
  Matrix3 unity = Matrix3::Zero();
  for (int i = 0; i < s.d(); ++i) {
    unity += s.projector(i).matrix();
    for (int j = 0; j < s.d(); ++j) {
      const Matrix3 pij = s.projector(i).matrix() * s.projector(j).matrix();
      const Matrix3 want = i == j ? s.projector(i).matrix() : Matrix3::Zero();
      EXPECT_LE((pij - want).norm(), 1e-10);
    }
    if (i > 0) EXPECT_GT(s.alpha(i), s.alpha(i - 1));
  }
  EXPECT_LE((unity - Matrix3::Identity()).norm(), 1e-12);
  EXPECT_LE((s.reconstruct() - a).norm(), 1e-10 * std::max(a.norm(), 1.0));
}

}  // namespace

TEST(SymTensor, StoresSixEntriesSymmetrically) {
  SymTensor a(1, 2, 3, 4, 5, 6);
  EXPECT_EQ(a(0, 1), a(1, 0));
  EXPECT_EQ(a(1, 2), 5.0);
  EXPECT_EQ(a(2, 1), 5.0);
  EXPECT_DOUBLE_EQ(a.trace(), 11.0);
  EXPECT_NEAR(a.norm(), a.matrix().norm(), 1e-14);
}

TEST(SymTensor, RejectsNonFiniteAndAsymmetric) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SymTensor(1, nan, 0, 1, 0, 1), ArgumentError);
  EXPECT_THROW(SymTensor(1, 0, 0, std::numeric_limits<double>::infinity(), 0, 1), ArgumentError);
  Matrix3 m = Matrix3::Identity();
  m(0, 1) = 1e-3;
  EXPECT_THROW(SymTensor::from_matrix(m), ArgumentError);
  m(0, 1) = 1e-15;
  EXPECT_NO_THROW(SymTensor::from_matrix(m));
}

TEST(Decompose, DiagonalWithRepeatedEigenvalue) {
  const auto s = decompose(SymTensor::diag(4, 1, 1));
  ASSERT_EQ(s.d(), 2);
  EXPECT_DOUBLE_EQ(s.alpha(0), 1.0);
  EXPECT_DOUBLE_EQ(s.alpha(1), 4.0);
  Matrix3 e1 = Matrix3::Zero();
  e1(0, 0) = 1;
  EXPECT_LE((s.projector(1).matrix() - e1).norm(), 1e-15);
  EXPECT_LE((s.projector(0).matrix() - (Matrix3::Identity() - e1)).norm(), 1e-15);
}

TEST(Decompose, IdentityHasEigenIndexOne) {
  const auto s = decompose(SymTensor::identity());
  ASSERT_EQ(s.d(), 1);
  EXPECT_DOUBLE_EQ(s.alpha(0), 1.0);
  EXPECT_LE((s.projector(0).matrix() - Matrix3::Identity()).norm(), 1e-15);
}

TEST(Decompose, RandomInvariants) {
  Gen g(11);
  for (int t = 0; t < 200; ++t) {
    const SymTensor a = g.sym(t % 2 ? 1.0 : 100.0);
    expect_spectrum_invariants(decompose(a), a);
  }
}

TEST(Decompose, RandomReconstructionRelative) {
  Gen g(12);
  for (int t = 0; t < 200; ++t) {
    const SymTensor a = g.with_eigenvalues(g.separated(-3.0, 5.0, 0.2));
    const auto s = decompose(a);
    ASSERT_EQ(s.d(), 3);
    EXPECT_LE((s.reconstruct() - a).norm(), 1e-12 * a.norm());
  }
}

TEST(Decompose, ClustersNearlyEqualEigenvalues) {
  Gen g(13);
  for (int t = 0; t < 50; ++t) {
    const double base = g.uniform(0.5, 3.0);
    const SymTensor a = g.with_eigenvalues({base, base * (1 + 1e-10), base + 1.0});
    const auto s = decompose(a);
    ASSERT_EQ(s.d(), 2);
    expect_spectrum_invariants(s, a);
    // Idempotent: decomposing the reassembled tensor reproduces the clusters.
    const auto again = decompose(s.reconstruct());
    ASSERT_EQ(again.d(), s.d());
    for (int i = 0; i < s.d(); ++i) EXPECT_NEAR(again.alpha(i), s.alpha(i), 1e-12 * std::abs(s.alpha(i)));
  }
}

TEST(Decompose, ClusterToleranceControlsMerging) {
  const SymTensor a = SymTensor::diag(1.0, 1.0 + 1e-5, 2.0);
  EXPECT_EQ(decompose(a, 1e-7).d(), 3);
  EXPECT_EQ(decompose(a, 1e-4).d(), 2);
  EXPECT_THROW(decompose(a, -1.0), ArgumentError);
}

TEST(ApplyFn, SquareRootOfDiagonal) {
  const auto r = apply_fn(SymTensor::diag(4, 9, 25), ScalarFn::parse("sqrt"));
  EXPECT_LE((r.matrix() - SymTensor::diag(2, 3, 5).matrix()).norm(), 1e-14);
}

TEST(ApplyFn, IdentityReturnsArgument) {
  Gen g(14);
  const SymTensor a = g.sym();
  EXPECT_LE((apply_fn(a, ScalarFn::identity()) - a).norm(), 1e-13 * a.norm());
}

TEST(ApplyFn, MonomialsMatchMatrixProducts) {
  Gen g(15);
  for (int t = 0; t < 50; ++t) {
    const SymTensor a = g.with_eigenvalues(g.separated(-2.0, 2.0, 0.3));
    const Matrix3 am = a.matrix();
    Matrix3 p = Matrix3::Identity();
    for (int m = 1; m <= 8; ++m) {
      p = (p * am).eval();
      const Matrix3 r = apply_fn(a, ScalarFn::monomial(m)).matrix();
      EXPECT_LE((r - p).norm(), 1e-9 * p.norm()) << "m=" << m;
    }
  }
}

TEST(ApplyFn, DomainViolation) {
  EXPECT_THROW(apply_fn(SymTensor::diag(-1, 1, 2), ScalarFn::logarithm()), DomainError);
  EXPECT_THROW(apply_fn(SymTensor::diag(0, 1, 2), ScalarFn::power(0.5)), DomainError);
}

TEST(SpectralPower, FractionalNeedsPositive) {
  const auto s = decompose(SymTensor::diag(4, 9, 16));
  EXPECT_LE((spectral_power(s, 0.5).matrix() - SymTensor::diag(2, 3, 4).matrix()).norm(), 1e-14);
  EXPECT_THROW(spectral_power(decompose(SymTensor::diag(-1, 1, 2)), 0.5), DomainError);
  EXPECT_NO_THROW(spectral_power(decompose(SymTensor::diag(-1, 1, 2)), 2.0));
}
