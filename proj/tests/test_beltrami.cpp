#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "grunsky/beltrami.hpp"
#include "grunsky/quadrature.hpp"

using namespace grunsky;

namespace {

// alpha for psi = z^p: mu* = e^{-ip theta}, so only c_p = 2/(p+2) survives and the
// Hankel form is an antidiagonal with entries sqrt(mn) 2/(p+2), m + n = p + 2.
double alpha_monomial_closed(std::size_t p) {
  double best = 0.0;
  for (std::size_t m = 1; m <= p + 1; ++m) best = std::max(best, std::sqrt(static_cast<double>(m * (p + 2 - m))));
  return best * 2.0 / static_cast<double>(p + 2);
}

BeltramiSpec teich_monomial(std::size_t p, double k = 0.5) { return BeltramiSpec::teichmuller(k, RationalFunction::monomial(p)); }

} // namespace

TEST(RationalFunction, EvaluationAndCriticalPoints) {
  const RationalFunction r({complex(0.3), 1.0}, {complex(1.0)});  // z + 0.3
  EXPECT_EQ(r(complex(1.0, 1.0)), complex(1.3, 1.0));
  const auto cp = r.critical_points();
  ASSERT_EQ(cp.size(), 1u);
  EXPECT_NEAR(std::abs(cp[0] + 0.3), 0.0, 1e-14);
  const RationalFunction m = RationalFunction::monomial(3);
  EXPECT_NEAR(std::abs(m(complex(0.5, 0.5)) - std::pow(complex(0.5, 0.5), 3)), 0.0, 1e-15);
  // z^2 + c/z = (z^3 + c)/z: zeros at the cube roots of -c, pole at 0.
  const RationalFunction q = RationalFunction::monomial(2).plus_pole_at_origin(0.05);
  const complex z(0.2, -0.7);
  EXPECT_NEAR(std::abs(q(z) - (z * z + 0.05 / z)), 0.0, 1e-14);
  const auto qp = q.critical_points();
  std::size_t roots = 0;
  for (const complex& w : qp)
    if (std::abs(w) > 1e-12) {
      ++roots;
      EXPECT_NEAR(std::abs(w * w * w + 0.05), 0.0, 1e-12);
    }
  EXPECT_EQ(roots, 3u);
  EXPECT_THROW(RationalFunction({complex(1.0)}, {complex{}}), validation_error);
}

TEST(BeltramiSpec, ValidatesAndEvaluates) {
  EXPECT_THROW(BeltramiSpec::constant(1.0), validation_error);
  EXPECT_THROW(BeltramiSpec::constant(complex(0.8, 0.8)), validation_error);
  EXPECT_THROW(BeltramiSpec::teichmuller(0.0, RationalFunction::monomial(1)), validation_error);
  EXPECT_THROW(BeltramiSpec::teichmuller(1.0, RationalFunction::monomial(1)), validation_error);
  const BeltramiSpec mu = BeltramiSpec::teichmuller(0.4, RationalFunction::monomial(1));
  const complex z = std::polar(0.5, 0.9);
  EXPECT_NEAR(std::abs(mu(z) - 0.4 * std::polar(1.0, -0.9)), 0.0, 1e-15);
  EXPECT_NEAR(mu.sup_norm(), 0.4, 1e-15);
  EXPECT_TRUE(mu.is_teichmuller_type());
  EXPECT_TRUE(BeltramiSpec::constant(0.2).is_teichmuller_type());
  EXPECT_EQ(mu.type_name(), "teichmuller");
}

TEST(DiskMoments, ConstantCoefficient) {
  const MomentVector c = disk_moments(BeltramiSpec::constant(complex(0.0, 0.3)), 8);
  // mu* = i: c_0 = i, higher moments vanish.
  EXPECT_NEAR(std::abs(c[0] - complex(0.0, 1.0)), 0.0, 1e-10);
  for (int p = 1; p <= 8; ++p) EXPECT_NEAR(std::abs(c[p]), 0.0, 1e-10);
  EXPECT_THROW(disk_moments(BeltramiSpec::constant(0.0), 4), validation_error);
}

TEST(DiskMoments, TeichmullerMonomials) {
  for (std::size_t p = 0; p <= 6; ++p) {
    const MomentVector c = disk_moments(teich_monomial(p), 14);
    for (int q = 0; q <= 14; ++q) {
      const double expect = q == static_cast<int>(p) ? 2.0 / static_cast<double>(p + 2) : 0.0;
      EXPECT_NEAR(std::abs(c[q] - expect), 0.0, 1e-9) << "p = " << p << ", q = " << q;
    }
  }
}

TEST(DiskMoments, OffCentreZeroAgainstFineTensorRule) {
  // psi = z + 0.3 has its zero inside the disk; cross-check the adaptive rule
  // against a product rule on an annulus split at |z| = 0.3 (slow, smooth pieces).
  const BeltramiSpec mu = BeltramiSpec::teichmuller(0.5, RationalFunction({complex(0.3), 1.0}, {complex(1.0)}));
  const MomentVector c = disk_moments(mu, 4);
  // Translate: w = z + 0.3; mu*(z) = |w|/w. Brute force in Cartesian coordinates on a fine grid.
  const std::size_t n = 1600;
  std::vector<complex> brute(5, complex{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
      const double y = -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(n);
      const complex z(x, y);
      if (std::norm(z) >= 1.0) continue;
      const complex w = z + 0.3;
      const complex v = std::abs(w) / w;
      complex e = 1.0;
      for (std::size_t p = 0; p <= 4; ++p) {
        brute[p] += v * e;
        e *= z;
      }
    }
  const double cell = 4.0 / static_cast<double>(n * n) / std::numbers::pi;
  for (std::size_t p = 0; p <= 4; ++p) EXPECT_NEAR(std::abs(c[static_cast<int>(p)] - brute[p] * cell), 0.0, 2e-3) << p;
}

TEST(AlphaFunctional, MonomialDichotomy) {
  for (std::size_t p = 0; p <= 6; ++p) {
    const double a = alpha_functional(teich_monomial(p)).value;
    EXPECT_NEAR(a, alpha_monomial_closed(p), 1e-9) << p;
    if (p % 2 == 0)
      EXPECT_NEAR(a, 1.0, 1e-9) << p;
    else
      EXPECT_LT(a, 1.0 - 1e-3) << p;
  }
  EXPECT_NEAR(alpha_functional(teich_monomial(1)).value, 2.0 * std::sqrt(2.0) / 3.0, 1e-6);
}

TEST(AlphaFunctional, PhaseAndScaleInvariant) {
  const double a = alpha_functional(teich_monomial(1)).value;
  const BeltramiSpec rotated = BeltramiSpec::teichmuller(0.2, RationalFunction({complex{}, complex(0.0, 3.0)}, {complex(1.0)}));
  EXPECT_NEAR(alpha_functional(rotated).value, a, 1e-10);
  EXPECT_NEAR(alpha_functional(teich_monomial(1, 0.05)).value, a, 1e-10);
  EXPECT_NEAR(alpha_functional(BeltramiSpec::constant(std::polar(0.4, 2.0))).value, 1.0, 1e-10);
}

TEST(AlphaFunctional, GridSampleMatchesAnalyticCoefficient) {
  // e^{-i theta} is a trigonometric polynomial; the product rule integrates its moments exactly.
  const auto rule = quadrature::tensor_rule(24, 64);
  GridSampleMu g;
  g.radii = rule.rho;
  g.radial_weights = rule.rho_weights;
  g.n_theta = 64;
  for (std::size_t i = 0; i < 24; ++i)
    for (std::size_t j = 0; j < 64; ++j) g.values.push_back(0.5 * std::polar(1.0, -rule.theta(j)));
  const BeltramiSpec mu = BeltramiSpec::grid(g);
  EXPECT_NEAR(alpha_functional(mu, 8).value, 2.0 * std::sqrt(2.0) / 3.0, 1e-12);
  EXPECT_FALSE(mu.is_teichmuller_type());
  g.values[0] = 1.0;
  EXPECT_THROW(BeltramiSpec::grid(g), validation_error);
}

TEST(StrengthenedBound, ShapeInAlpha) {
  for (double k : {0.05, 0.3, 0.8}) {
    EXPECT_NEAR(strengthened_bound(k, 1.0), k, 1e-15);
    EXPECT_NEAR(strengthened_bound(k, 0.0), k * k, 1e-15);
    double prev = 0.0;
    for (double a = 0.0; a <= 1.0; a += 0.05) {
      const double v = strengthened_bound(k, a);
      EXPECT_GE(v, prev);
      EXPECT_LE(v, k + 1e-15);
      prev = v;
    }
  }
  EXPECT_THROW(strengthened_bound(1.0, 0.5), validation_error);
  EXPECT_THROW(strengthened_bound(0.5, 1.5), validation_error);
}

TEST(BoundCheck, ExemplarWithConstantExtensionIsTight) {
  // z + b/z extends by z + b conj(z), mu = b: alpha = 1 and both bounds equal b.
  for (double b : {0.1, 0.3, 0.5}) {
    const BoundReport r = bound_check(LaurentFunction(1.0, {0.0, b}, 12), BeltramiSpec::constant(b), 12, 1e-9);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.lower_applicable);
    EXPECT_NEAR(r.alpha, 1.0, 1e-9);
    EXPECT_NEAR(r.upper, b, 1e-9);
    EXPECT_NEAR(r.lower, b, 1e-9);
    EXPECT_NEAR(r.kappa, b, 1e-12);
  }
}

TEST(BoundCheck, ReportsViolationsWithoutThrowing) {
  // A mismatched extension: kappa(z + 0.5/z) = 0.5 exceeds k = 0.1.
  const BoundReport r = bound_check(LaurentFunction(1.0, {0.0, 0.5}, 8), BeltramiSpec::constant(0.1), 8, 1e-9);
  EXPECT_FALSE(r.upper_ok);
  EXPECT_FALSE(r.ok());
}

TEST(VariationalMap, ConstantCoefficientGivesExemplar) {
  const LaurentFunction f = variational_map(BeltramiSpec::constant(0.2), 6);
  EXPECT_NEAR(std::abs(f.b(0)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(f.b(1) - 0.2), 0.0, 1e-10);
  for (std::size_t n = 2; n <= 6; ++n) EXPECT_NEAR(std::abs(f.b(n)), 0.0, 1e-10);
}

TEST(VariationalMap, FirstOrderFixturesRespectBounds) {
  const std::vector<RationalFunction> psis = {RationalFunction::monomial(0), RationalFunction::monomial(1),
                                              RationalFunction::monomial(2),
                                              RationalFunction({complex(0.3), 1.0}, {complex(1.0)})};
  const std::size_t n = 12;
  for (const auto& psi : psis)
    for (double k : {0.02, 0.05}) {
      const BeltramiSpec mu = BeltramiSpec::teichmuller(k, psi);
      const LaurentFunction f = variational_map(mu, 2 * n);
      const double kappa = grunsky_norm(f, n);
      const double alpha = alpha_functional(mu, n).value;
      EXPECT_GE(kappa, alpha * k - 5 * k * k);
      EXPECT_LE(kappa, strengthened_bound(k, alpha) + 5 * k * k);
    }
}

TEST(MoserApproximant, BoundsStayBelowKAndAlphaSettles) {
  std::vector<double> alphas;
  for (int j = 0; j <= 4; ++j) {
    const double c = 0.05 * std::pow(2.0, -j);
    const auto [mu, r] = moser_approximant(RationalFunction::monomial(2), 0.3, c);
    EXPECT_TRUE(r.strict) << j;
    EXPECT_LT(r.bound, 0.3);
    EXPECT_LT(r.alpha, 1.0);
    EXPECT_NEAR(mu.sup_norm(), 0.3, 1e-15);
    alphas.push_back(r.alpha);
  }
  const double limit = alpha_functional(teich_monomial(2, 0.3)).value;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (j > 0) EXPECT_LE(std::abs(limit - alphas[j]), std::abs(limit - alphas[j - 1]) + 1e-3);
  }
  EXPECT_THROW(moser_approximant(RationalFunction::monomial(2), 0.3, 0.0), validation_error);
}
