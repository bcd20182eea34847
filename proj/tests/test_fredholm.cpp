#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "grunsky/fredholm.hpp"
#include "test_fixtures.hpp"

using namespace grunsky;

TEST(Schwarzian, IdentityAndAffineMapsVanish) {
  for (const LaurentFunction& f : {LaurentFunction::identity(8), LaurentFunction(2.0, {complex(1.0, -1.0)}, 8)}) {
    const SchwarzianData s = schwarzian(f, 8);
    EXPECT_EQ(s.bnorm, 0.0);
    for (std::size_t k = 0; k <= s.series.order(); ++k) EXPECT_EQ(s.series[k], complex{});
  }
}

TEST(Schwarzian, ExemplarSeriesAndClosedForm) {
  // f = z + b/z: S_f(z) = -6b / (z^2 - b)^2 = -6b z^{-4} - 12 b^2 z^{-6} - ...
  const double b = 0.1;
  const LaurentFunction f(1.0, {0.0, b}, 12);
  const SchwarzianData s = schwarzian(f, 6);
  EXPECT_EQ(s.series.order(), 14u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(s.series[k], complex{});
  EXPECT_NEAR(std::abs(s.series[4] + 6.0 * b), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.series[6] + 12.0 * b * b), 0.0, 1e-15);
  for (std::size_t k = 2; 2 * k + 2 <= 14; ++k)
    EXPECT_NEAR(std::abs(s.series[2 * k + 2] + 6.0 * static_cast<double>(k) * std::pow(b, static_cast<double>(k) - 1.0) * b), 0.0, 1e-14);
  const complex z = std::polar(2.5, 0.7);
  EXPECT_NEAR(std::abs(s.series(z) + 6.0 * b / ((z * z - b) * (z * z - b))), 0.0, 1e-11);
  // sup of (|z|^2 - 1)^2 6b / |z^2 - b|^2 is approached at infinity: 6b.
  EXPECT_NEAR(s.bnorm, 6.0 * b, 1e-6);
}

TEST(Schwarzian, GeneralSeriesMatchesPointwiseFormula) {
  std::mt19937_64 rng(51);
  const LaurentFunction f = fixtures::random_function(rng, 12, 0.5);
  const SchwarzianData s = schwarzian(f, 10);  // through z^{-22}
  for (double r : {3.0, 5.0}) {
    const complex z = std::polar(r, 1.3);
    const complex q = f.derivative(z, 2) / f.derivative(z, 1);
    const complex exact = f.derivative(z, 3) / f.derivative(z, 1) - 1.5 * q * q;
    EXPECT_NEAR(std::abs(s.series(z) - exact), 0.0, 1e-8 * std::abs(exact) + 1e3 * std::pow(1.0 / r, 23));
  }
}

TEST(Schwarzian, NehariCeilingOnUnivalentFixtures) {
  for (const auto& fx : fixtures::declared_fixtures(10)) {
    const SchwarzianData s = schwarzian(fx.f, 4);
    EXPECT_GE(s.bnorm, 0.0);
    EXPECT_LE(s.bnorm, 6.0) << fx.name;
  }
}

TEST(Schwarzian, FailsWhenDerivativeVanishes) {
  // f' = 1 - 2/z^2 vanishes on |z| = sqrt 2.
  EXPECT_THROW(schwarzian(LaurentFunction(1.0, {0.0, 2.0}, 6), 3), numerical_error);
}

TEST(HarmonicBeltrami, SupIsHalfTheBNorm) {
  for (double b : {0.02, 0.1, 0.3}) {
    const SchwarzianData s = schwarzian(LaurentFunction(1.0, {0.0, b}, 16), 8);
    const GridSampleMu g = harmonic_grid(s);
    double sup = 0.0;
    for (const complex& v : g.values) sup = std::max(sup, std::abs(v));
    EXPECT_LE(sup, 0.5 * s.bnorm + 1e-12) << b;
  }
  // b = 0.3: sup |nu| approaches 0.9 < 1; b = 0.4 leaves the unit ball.
  EXPECT_NO_THROW(harmonic_beltrami(schwarzian(LaurentFunction(1.0, {0.0, 0.3}, 8), 4)));
  EXPECT_THROW(harmonic_beltrami(schwarzian(LaurentFunction(1.0, {0.0, 0.4}, 8), 4)), validation_error);
}

TEST(FredholmEigenvalue, ExemplarReciprocity) {
  for (double b : {0.1, 0.3, 0.5}) {
    const FredholmReport r = fredholm_eigenvalue(LaurentFunction(1.0, {0.0, b}, 16), 8, b);
    EXPECT_NEAR(r.kappa, b, 1e-12);
    ASSERT_TRUE(r.rho.has_value());
    EXPECT_NEAR(*r.rho, 1.0 / b, 1e-10);
    EXPECT_TRUE(r.reciprocity_ok);
    EXPECT_TRUE(r.ahlfors_ok);
    EXPECT_LE(1.0 / *r.rho, b + 1e-12);
  }
}

TEST(FredholmEigenvalue, IdentityHasInfiniteRho) {
  const FredholmReport r = fredholm_eigenvalue(LaurentFunction::identity(8), 8);
  EXPECT_FALSE(r.rho.has_value());
  EXPECT_EQ(r.kappa, 0.0);
  EXPECT_EQ(r.firstorder, 0.0);
  EXPECT_TRUE(r.ahlfors_ok);
}

TEST(FredholmEigenvalue, AhlforsFlagDetectsTooSmallReflection) {
  const FredholmReport r = fredholm_eigenvalue(LaurentFunction(1.0, {0.0, 0.3}, 16), 8, 0.1);
  EXPECT_FALSE(r.ahlfors_ok);
  EXPECT_THROW(fredholm_eigenvalue(LaurentFunction(1.0, {0.0, 0.3}, 16), 8, 1.0), validation_error);
}

TEST(FredholmEigenvalue, FirstOrderAgreementOnExemplars) {
  for (double b : {0.02, 0.05, 0.1}) {
    const FredholmReport r = fredholm_eigenvalue(LaurentFunction(1.0, {0.0, b}, 16), 8);
    EXPECT_LE(std::abs(r.firstorder - b), 5 * b * b) << b;
    EXPECT_LE(std::abs(r.kappa - r.firstorder), 5 * b * b) << b;
    EXPECT_LE(std::abs(1.0 / *r.rho - r.firstorder), 5 * b * b) << b;
  }
}

TEST(FredholmEigenvalue, SingleConstantBoundsTheFirstOrderGap) {
  // |kappa - firstorder| <= C bnorm^2 with one C over fixtures of small B-norm.
  std::mt19937_64 rng(52);
  std::vector<LaurentFunction> family;
  for (double b : {0.01, 0.02, 0.03, 0.05}) family.emplace_back(1.0, std::vector<complex>{0.0, b}, 16);
  for (double budget : {0.01, 0.02, 0.04})
    for (int rep = 0; rep < 2; ++rep) family.push_back(fixtures::random_function(rng, 16, budget));
  double c = 0.0;
  std::size_t used = 0;
  for (const auto& f : family) {
    const FredholmReport r = fredholm_eigenvalue(f, 8);
    if (r.bnorm > 0.3 || r.bnorm == 0.0) continue;
    ++used;
    c = std::max(c, std::abs(r.kappa - r.firstorder) / (r.bnorm * r.bnorm));
  }
  EXPECT_GE(used, 6u);
  EXPECT_LT(c, 1.0);
  RecordProperty("first_order_constant", std::to_string(c));
}
