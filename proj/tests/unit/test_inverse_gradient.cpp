#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "support/random.hpp"
#include "tensorfn/derivatives.hpp"
#include "tensorfn/inverse_gradient.hpp"

using namespace tensorfn;
using tensorfn::testing::Gen;

namespace {

Matrix3 random_matrix(Gen& g) {
  Matrix3 m;
  for (int i = 0; i < 9; ++i) m(i) = g.normal();
  return m;
}

// Largest relative action difference over random probes (symmetric by default).
double map_residual(const FourthTensor& p, const FourthTensor& q, Gen& g, bool general = false) {
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const Matrix3 x = general ? random_matrix(g) : g.sym().matrix();
    const Matrix3 want = q.apply(x);
    worst = std::max(worst, (p.apply(x) - want).norm() / std::max(1.0, want.norm()));
  }
  return worst;
}

FourthTensor sym_identity() {
  // The identity on Sym acts like I [x] I on symmetric probes.
  return FourthTensor::identity();
}

}  // namespace

TEST(SpectralBasis, OrthogonalIdempotentPartition) {
  Gen g(51);
  for (int t = 0; t < 20; ++t) {
    const auto s = decompose(g.separated_psym());
    const FourthSpectralBasis basis(s);
    ASSERT_EQ(basis.size(), 6);
    FourthTensor sum;
    for (int i = 0; i < basis.size(); ++i) {
      sum += basis[i];
      for (int j = 0; j < basis.size(); ++j) {
        const FourthTensor want = i == j ? basis[i] : FourthTensor();
        EXPECT_LE(map_residual(compose4(basis[i], basis[j]), want, g, true), 1e-10);
      }
    }
    EXPECT_LE(map_residual(sum, FourthTensor::identity(), g, true), 1e-12);
  }
}

TEST(SpectralBasis, SizeFollowsEigenIndex) {
  EXPECT_EQ(FourthSpectralBasis(decompose(SymTensor::identity())).size(), 1);
  EXPECT_EQ(FourthSpectralBasis(decompose(SymTensor::diag(1, 1, 2))).size(), 3);
}

TEST(GradSpectral, Examples) {
  Gen g(52);
  for (int t = 0; t < 10; ++t) {
    const SymTensor a = g.psym();
    const auto s = decompose(a);
    EXPECT_LE(map_residual(grad_spectral(StrainMeasure::seth_hill(1), s), sym_identity(), g), 1e-13);
    FourthTensor half = FourthTensor::box(a.matrix(), Matrix3::Identity(), 0.5);
    half.add(0.5, Matrix3::Identity(), a.matrix());
    EXPECT_LE(map_residual(grad_spectral(StrainMeasure::seth_hill(2), s), half, g), 1e-12);
    EXPECT_LE(map_residual(grad_spectral(StrainMeasure::seth_hill(0), s), gradient(ScalarFn::logarithm(), a), g),
              1e-12);
  }
}

TEST(GradSpectral, LogCoefficients) {
  const double e = std::numbers::e;
  const auto c = gradient_basis_coefficients(ScalarFn::logarithm(), decompose(SymTensor::diag(1, e, e)));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0], 1.0, 1e-15);
  EXPECT_NEAR(c[1], 1.0 / e, 1e-15);
  EXPECT_NEAR(c[2], 1.0 / (e - 1), 1e-15);
}

TEST(GradSpectral, NeedsPositiveSpectrum) {
  EXPECT_THROW(grad_spectral(StrainMeasure::seth_hill(2), decompose(SymTensor::diag(-1, 1, 2))), DomainError);
}

TEST(GradSpectral, PositiveCoefficients) {
  Gen g(53);
  for (int m = -3; m <= 3; ++m) {
    const auto f = StrainMeasure::seth_hill(m);
    for (int t = 0; t < 100; ++t) {
      for (double v : gradient_basis_coefficients(f.fn(), decompose(g.psym()))) EXPECT_GT(v, 0.0) << m;
    }
  }
}

TEST(InverseGrad, Examples) {
  Gen g(54);
  for (int t = 0; t < 10; ++t) {
    const SymTensor a = g.psym();
    const auto s = decompose(a);
    EXPECT_LE(map_residual(inverse_grad(StrainMeasure::seth_hill(-1), s), FourthTensor::box(a.matrix(), a.matrix()), g),
              1e-12);
    EXPECT_LE(map_residual(inverse_grad(StrainMeasure::seth_hill(1), s), sym_identity(), g), 1e-13);
  }
}

TEST(InverseGrad, ComposesToIdentity) {
  Gen g(55);
  std::vector<StrainMeasure> fs;
  for (int m = -3; m <= 3; ++m) fs.push_back(StrainMeasure::seth_hill(m));
  for (const auto& f : fs) {
    for (int t = 0; t < 20; ++t) {
      const auto s = decompose(g.psym());
      EXPECT_LE(map_residual(compose4(grad_spectral(f, s), inverse_grad(f, s)), sym_identity(), g), 1e-10)
          << f.fn().spec();
    }
  }
}

// grad f_inv(A) = grad^-1 f(f_inv(A)) for f = seth_hill(2), f_inv(x) = sqrt(2x + 1).
TEST(InverseGrad, InverseFunctionIdentity) {
  Gen g(56);
  const auto f = StrainMeasure::seth_hill(2);
  const auto finv = compose(ScalarFn::power(0.5), ScalarFn::polynomial({1, 2}));
  for (int t = 0; t < 20; ++t) {
    const SymTensor a = g.psym(20.0, 0.1);
    const auto lhs = gradient(finv, a);
    const auto rhs = inverse_grad(f, decompose(apply_fn(a, finv)));
    EXPECT_LE(map_residual(lhs, rhs, g), 1e-9);
  }
}

// grad f^(-m)(A) = (A^-m [x] A^-m) grad f^(m)(A)
TEST(InverseGrad, OppositeSignRelation) {
  Gen g(57);
  for (int m = 1; m <= 3; ++m) {
    for (int t = 0; t < 20; ++t) {
      const SymTensor a = g.psym();
      const auto s = decompose(a);
      const Matrix3 am = spectral_power(s, -double(m)).matrix();
      const auto rhs = compose4(FourthTensor::box(am, am), grad_spectral(StrainMeasure::seth_hill(m), s));
      EXPECT_LE(map_residual(grad_spectral(StrainMeasure::seth_hill(-m), s), rhs, g), 1e-10) << m;
    }
  }
}

TEST(SumForm, MatchesSpectralGradient) {
  Gen g(58);
  for (int m : {-3, -2, -1, 1, 2, 3}) {
    for (int t = 0; t < 20; ++t) {
      const SymTensor a = g.psym();
      EXPECT_LE(map_residual(seth_hill_sum_form(m, a), grad_spectral(StrainMeasure::seth_hill(m), decompose(a)), g),
                1e-11)
          << m;
    }
  }
  EXPECT_THROW(seth_hill_sum_form(0, SymTensor::identity()), ArgumentError);
}

TEST(SumForm, SquareIsSymmetrisedProduct) {
  const SymTensor a = SymTensor::diag(1, 2, 5);
  FourthTensor half = FourthTensor::box(a.matrix(), Matrix3::Identity(), 0.5);
  half.add(0.5, Matrix3::Identity(), a.matrix());
  Gen g(59);
  EXPECT_LE(map_residual(seth_hill_sum_form(2, a), half, g, true), 1e-15);
}

TEST(Fractional, SquareRootCompanion) {
  Gen g(60);
  for (int t = 0; t < 10; ++t) {
    const SymTensor a = g.psym();
    const auto s = decompose(a);
    const Matrix3 r = spectral_power(s, 0.5).matrix();
    FourthTensor want = FourthTensor::box(r, Matrix3::Identity(), 0.5);
    want.add(0.5, Matrix3::Identity(), r);
    EXPECT_LE(map_residual(seth_hill_fractional_inverse(2, a), want, g), 1e-12);
    EXPECT_LE(map_residual(compose4(seth_hill_fractional_inverse(2, a), gradient(ScalarFn::seth_hill(0.5), a)),
                           sym_identity(), g),
              1e-10);
  }
}

TEST(Fractional, MatchesInverseGradient) {
  Gen g(61);
  for (int m : {-3, -2, 2, 3}) {
    for (int t = 0; t < 20; ++t) {
      const SymTensor a = g.psym();
      const auto f = StrainMeasure::seth_hill(1.0 / m);
      EXPECT_LE(map_residual(seth_hill_fractional_inverse(m, a), inverse_grad(f, decompose(a)), g), 1e-10) << m;
    }
  }
}

TEST(LogIntegral, IdentityTensor) {
  Gen g(62);
  EXPECT_LE(map_residual(log_inverse_integral(SymTensor::identity()), sym_identity(), g, true), 1e-14);
}

TEST(LogIntegral, PairCoefficient) {
  const double e = std::numbers::e;
  const auto s = decompose(SymTensor::diag(1, e, e));
  const auto t = log_inverse_integral(SymTensor::diag(1, e, e));
  const Matrix3 p0 = s.projector(0).matrix(), p1 = s.projector(1).matrix();
  Matrix3 x = Matrix3::Zero();
  x(0, 1) = 1;  // lives in the (0, 1) block
  const Matrix3 y = t.apply(x);
  EXPECT_NEAR(y(0, 1), e - 1, 1e-13);
  EXPECT_LE((p0 * y * p1 - y).norm(), 1e-13);
}

TEST(LogIntegral, QuadratureMatchesSpectralForm) {
  Gen g(63);
  for (int t = 0; t < 50; ++t) {
    const SymTensor a = g.psym(100.0, 0.1);
    const auto s = decompose(a);
    EXPECT_LE(map_residual(log_inverse_integral(a, 32), log_inverse_spectral(s), g), 1e-10);
    EXPECT_LE(map_residual(log_inverse_spectral(s), inverse_grad(StrainMeasure::seth_hill(0), s), g), 1e-12);
  }
}

TEST(LogIntegral, GaussLegendreIntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre_unit(8, x, w);
  for (int k = 0; k <= 15; ++k) {
    double s = 0;
    for (int q = 0; q < 8; ++q) s += w[q] * std::pow(x[q], k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15) << k;
  }
}

TEST(JTensor, NullVectorsAndPseudoInverse) {
  Gen g(64);
  for (int t = 0; t < 20; ++t) {
    const SymTensor a = g.psym();
    const auto s = decompose(a);
    const auto j = j_tensor(a.matrix());
    const auto js = j_pseudo_inverse(s);
    for (const auto& p : s.projectors()) EXPECT_LE(j.apply(p.matrix()).norm(), 1e-12 * a.norm());
    EXPECT_LE(map_residual(compose4(compose4(j, js), j), j, g, true), 1e-10);
    EXPECT_LE(map_residual(compose4(compose4(js, j), js), js, g, true), 1e-10);
    FourthTensor complement = FourthTensor::identity();
    for (const auto& p : s.projectors()) complement.add(-1.0, p.matrix(), p.matrix());
    EXPECT_LE(map_residual(compose4(js, j), complement, g, true), 1e-10);
    EXPECT_LE(map_residual(compose4(j, js), complement, g, true), 1e-10);
  }
}

TEST(JTensor, JJStarPlusKKStar) {
  Gen g(65);
  for (int t = 0; t < 20; ++t) {
    const auto s = decompose(g.psym());
    const auto j = j_tensor(s.reconstruct().matrix());
    const auto sum = compose4(j, j_pseudo_inverse(s)) + compose4(k_tensor(s), k_pseudo_inverse(s));
    EXPECT_LE(map_residual(sum, FourthTensor::identity(), g, true), 1e-10);
  }
}

TEST(JKDecomposition, IdentityMeasure) {
  Gen g(66);
  const SymTensor a = g.psym();
  const auto jk = jk_decomposition(StrainMeasure::seth_hill(1), a);
  EXPECT_LE(map_residual(jk.gradient, sym_identity(), g, true), 1e-12);
  EXPECT_LE(map_residual(jk.inverse, sym_identity(), g, true), 1e-12);
}

TEST(JKDecomposition, MatchesSpectralGradient) {
  Gen g(67);
  for (double m : {-2.0, 0.0, 0.5, 3.0}) {
    const auto f = StrainMeasure::seth_hill(m);
    for (int t = 0; t < 10; ++t) {
      const SymTensor a = g.psym();
      const auto s = decompose(a);
      const auto jk = jk_decomposition(f, a);
      EXPECT_LE(map_residual(jk.gradient, grad_spectral(f, s), g), 1e-10) << m;
      EXPECT_LE(map_residual(jk.inverse, inverse_grad(f, s), g), 1e-10) << m;
    }
  }
}

TEST(Commutator, ZeroRightHandSide) {
  const auto r = sylvester_commutator(SymTensor::diag(1, 2, 3), Matrix3::Zero().eval());
  EXPECT_EQ(r.x.norm(), 0.0);
  EXPECT_EQ(r.null_residual, 0.0);
}

TEST(Commutator, SkewRightHandSide) {
  Matrix3 y = Matrix3::Zero();
  y(0, 1) = 1;
  y(1, 0) = -1;
  const auto r = sylvester_commutator(SymTensor::diag(1, 2, 3), y);
  EXPECT_NEAR(r.x(0, 1), -1.0, 1e-15);
  EXPECT_NEAR(r.x(1, 0), -1.0, 1e-15);
  EXPECT_NEAR(r.null_residual, 0.0, 1e-15);
}

TEST(Commutator, SolvesForSymmetricAndSkew) {
  Gen g(68);
  for (int t = 0; t < 20; ++t) {
    const SymTensor a = g.separated_psym();
    const Matrix3 am = a.matrix();
    const Matrix3 z = random_matrix(g);
    // skew data, and a commutator with a symmetric tensor
    for (const Matrix3& y : {Matrix3(z - z.transpose()), Matrix3(am * z.transpose() * z - z.transpose() * z * am)}) {
      const auto r = sylvester_commutator(a, y);
      EXPECT_LE((am * r.x - r.x * am - y).norm(), 1e-11 * y.norm());
      EXPECT_LE(r.null_residual, 1e-11 * y.norm());
    }
    // A general right-hand side leaves a null-space part behind.
    const auto r = sylvester_commutator(a, z);
    EXPECT_NEAR((am * r.x - r.x * am - z).norm(), r.null_residual, 1e-11 * z.norm());
  }
}

TEST(Commutator, ScalarTensorHasNoSolution) {
  Matrix3 y = Matrix3::Zero();
  y(0, 1) = 1;
  EXPECT_THROW(sylvester_commutator(SymTensor::identity(), y), DomainError);
}

TEST(PowerEquation, Example) {
  const SymTensor a = SymTensor::diag(1, 2, 3);
  Matrix3 c = Matrix3::Zero();
  c << 2, 3, 0, 3, 8, 0, 0, 0, 0;
  const Matrix3 x = sylvester_power(2, a, c);
  Matrix3 want = Matrix3::Zero();
  want << 1, 1, 0, 1, 2, 0, 0, 0, 0;
  EXPECT_LE((x - want).norm(), 1e-14);
}

TEST(PowerEquation, FirstPowerIsIdentity) {
  Gen g(69);
  const Matrix3 c = random_matrix(g);
  EXPECT_LE((sylvester_power(1, g.psym(), c) - c).norm(), 1e-14 * c.norm());
}

TEST(PowerEquation, BackSubstitution) {
  Gen g(70);
  for (int m : {1, 2, 3, 5}) {
    for (int t = 0; t < 20; ++t) {
      const SymTensor a = g.psym(10.0);
      const Matrix3 c = random_matrix(g);
      const Matrix3 x = sylvester_power(m, a, c);
      EXPECT_LE((sylvester_power_lhs(m, a.matrix(), x) - c).norm(), 1e-11 * c.norm()) << m;
    }
  }
  EXPECT_THROW(sylvester_power(0, SymTensor::identity(), Matrix3::Identity().eval()), ArgumentError);
}

// Wider spectra: the residual stays within a small multiple of eps * |lhs operator| * |X|.
TEST(PowerEquation, BackwardStableOnWideSpectra) {
  Gen g(71);
  for (int m : {2, 3, 5, 8}) {
    for (int t = 0; t < 50; ++t) {
      const SymTensor a = g.psym(50.0);
      const Matrix3 c = random_matrix(g);
      const Matrix3 x = sylvester_power(m, a, c);
      const auto alphas = decompose(a).alphas();
      const double top = *std::max_element(alphas.begin(), alphas.end());
      const double floor = std::numeric_limits<double>::epsilon() * m * std::pow(top, m - 1) * x.norm();
      EXPECT_LE((sylvester_power_lhs(m, a.matrix(), x) - c).norm(), 10 * floor) << m;
    }
  }
}
