#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "grunsky/beltrami.hpp"
#include "grunsky/homotopy.hpp"
#include "grunsky/quasidomain.hpp"
#include "test_fixtures.hpp"

using namespace grunsky;

namespace {

std::vector<double> tenths() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.1 * i);
  return g;
}

} // namespace

TEST(HomotopyMap, ScalesCoefficients) {
  const LaurentFunction f(1.0, {complex(0.2, 0.1), 0.3, complex(0.0, 0.1)}, 4);
  const complex t(0.3, 0.4);
  const LaurentFunction g = homotopy_map(f, t);
  EXPECT_EQ(g.leading(), 1.0);
  EXPECT_NEAR(std::abs(g.b(0) - f.b(0) * t), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(g.b(1) - f.b(1) * t * t), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(g.b(2) - f.b(2) * t * t * t), 0.0, 1e-16);
  // t f(z/t) pointwise
  const complex z(2.0, 1.0);
  EXPECT_NEAR(std::abs(g(z) - t * f(z / t)), 0.0, 1e-14);
  EXPECT_TRUE(homotopy_map(f, 0.0).is_identity());
  EXPECT_THROW(homotopy_map(f, 1.5), validation_error);
}

TEST(Homogeneity, ResidualBelowToleranceOnFixtures) {
  for (const auto& fx : fixtures::declared_fixtures(12))
    for (const complex t : {complex(0.5), complex(0.9), std::polar(0.7, 1.2), complex(1.0)}) {
      const HomogeneityReport r = homogeneity_check(fx.f, t, 12);
      EXPECT_TRUE(r.ok) << fx.name;
      EXPECT_LT(r.max_residual, 1e-10);
    }
}

TEST(NormProfile, ExemplarRatioIdenticallyOne) {
  const double b = 0.5;
  const HomotopyProfile p = norm_profile(LaurentFunction(1.0, {0.0, b}, 12), tenths(), 12,
                                         [b](double r) { return b * r * r; });
  ASSERT_TRUE(p.ratio.has_value());
  for (std::size_t i = 0; i < p.t_grid.size(); ++i) {
    EXPECT_NEAR(p.kappa[i], b * p.t_grid[i] * p.t_grid[i], 1e-12);
    EXPECT_NEAR((*p.ratio)[i], 1.0, 1e-9);
  }
  EXPECT_TRUE(p.monotone);
  EXPECT_TRUE(p.level_property_ok);
  EXPECT_LT(p.reconstruction_residual, 5e-3);
}

TEST(NormProfile, FirstOrderFixtureRatioStaysBelowOne) {
  const double k = 0.02;
  const BeltramiSpec mu = BeltramiSpec::teichmuller(k, RationalFunction::monomial(1));
  const LaurentFunction f = variational_map(mu, 24);
  const HomotopyProfile p = norm_profile(f, tenths(), 12, [k](double r) { return k * r * r * r; });
  const double target = 2.0 * std::sqrt(2.0) / 3.0;
  for (double q : *p.ratio) {
    EXPECT_NEAR(q, target, 5 * k);
    EXPECT_LT(q, 1.0);
  }
  EXPECT_TRUE(p.monotone);
  EXPECT_TRUE(p.level_property_ok);
}

TEST(NormProfile, DetectsBrokenLevelProperty) {
  // A model that matches kappa only on the outer half pushes the ratio below 1 inside.
  const double b = 0.5;
  const HomotopyProfile p = norm_profile(LaurentFunction(1.0, {0.0, b}, 8), tenths(), 8,
                                         [b](double r) { return r >= 0.5 ? b * r * r : b * r; });
  EXPECT_FALSE(p.level_property_ok);
}

TEST(NormProfile, MonotoneOnDeclaredFixtures) {
  for (const auto& fx : fixtures::declared_fixtures(10)) {
    const HomotopyProfile p = norm_profile(fx.f, tenths(), 10);
    EXPECT_TRUE(p.monotone) << fx.name;
    EXPECT_FALSE(p.ratio.has_value());
    for (double v : p.kappa) EXPECT_LE(v, fx.k + 1e-12);
  }
}

TEST(NormProfile, RejectsBadGrids) {
  const LaurentFunction f(1.0, {0.0, 0.3}, 4);
  EXPECT_THROW(norm_profile(f, {}, 4), validation_error);
  EXPECT_THROW(norm_profile(f, {0.5, 0.4}, 4), validation_error);
  EXPECT_THROW(norm_profile(f, {0.5, 1.0}, 4), validation_error);
  EXPECT_THROW(norm_profile(f, {0.5}, 4, [](double) { return 1.0; }), validation_error);
}

TEST(DomainHomotopy, EndpointsAndDiskReduction) {
  const LaurentFunction f(1.0, {0.0, 0.3, 0.1}, 12);
  const DomainSpec d = DomainSpec::ellipse(1.25, 0.75);
  const LaurentFunction g1 = homotopy_map(f, 1.0, d, 12);
  for (std::size_t k = 0; k <= 12; ++k) EXPECT_NEAR(std::abs(g1.b(k) - f.b(k)), 0.0, 1e-12) << k;
  const LaurentFunction disk = homotopy_map(f, 0.6, DomainSpec::unit_disk(), 12);
  const LaurentFunction plain = homotopy_map(f, 0.6);
  for (std::size_t k = 0; k <= 12; ++k) EXPECT_EQ(disk.b(k), plain.b(k));
}
