#ifndef GRUNSKY_HOMOTOPY_HPP
#define GRUNSKY_HOMOTOPY_HPP

// The holomorphic homotopy f_t(z) = t f(z/t), homogeneity of its Grunsky
// coefficients, and radial Grunsky-norm profiles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "grunsky/domain.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

/// t f(z/t): b_n -> b_n t^{n+1}, b_0 -> b_0 t, leading unchanged.
inline LaurentFunction homotopy_map(const LaurentFunction& f, complex t) {
  detail::require(std::abs(t) <= 1.0, "homotopy_map: |t| must be at most 1");
  std::vector<complex> b(f.coefficients().begin(), f.coefficients().end());
  complex tp = t;
  for (auto& x : b) {
    x *= tp;
    tp *= t;
  }
  return LaurentFunction(f.leading(), std::move(b), f.order());
}

/// Homotopy on a quasidisk exterior: f_t = t F(chi(z)/t) conjugated back,
/// i.e. F_t o chi with F = f o chi_inv, as expansions to order N.
inline LaurentFunction homotopy_map(const LaurentFunction& f, complex t, const DomainSpec& d, std::size_t n) {
  detail::require(n >= 1, "homotopy_map: order must be at least 1");
  if (d.is_unit_disk()) return homotopy_map(f.with_order(std::max(n, f.order())), t).with_order(n);
  const LaurentFunction chi_inv = d.chi_inv(n);
  const LaurentFunction chi = invert_at_infinity(chi_inv, n);
  const LaurentFunction big_f = compose_at_infinity(f.with_order(std::max(n, f.order())), chi_inv, n);
  return compose_at_infinity(homotopy_map(big_f, t), chi, n);
}

struct HomogeneityReport {
  double max_residual = 0.0;  // max |alpha_mn(f_t) - t^{m+n} alpha_mn(f)|
  double tolerance = 1e-10;
  bool ok = true;
};

inline HomogeneityReport homogeneity_check(const LaurentFunction& f, complex t, std::size_t n,
                                           double tolerance = 1e-10) {
  detail::require(std::abs(t) <= 1.0, "homogeneity_check: |t| must be at most 1");
  const LaurentFunction g = f.with_order(std::max(n, f.order()));
  const KernelMatrix a = series_log_ratio(g, n);
  const KernelMatrix at = series_log_ratio(homotopy_map(g, t), n);
  HomogeneityReport r;
  r.tolerance = tolerance;
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t k = 1; k <= n; ++k)
      r.max_residual = std::max(r.max_residual, std::abs(at(m, k) - std::pow(t, static_cast<int>(m + k)) * a(m, k)));
  r.ok = r.max_residual < tolerance;
  return r;
}

struct HomotopyProfile {
  std::vector<double> t_grid;
  std::vector<double> kappa;
  std::optional<std::vector<double>> k_known;
  std::optional<std::vector<double>> ratio;
  bool monotone = true;            // kappa nondecreasing along the grid
  bool level_property_ok = true;   // ratio = 1 at rho implies ratio = 1 below rho
  std::vector<double> reconstructed;  // atanh kappa rebuilt from the differentiated profile
  double reconstruction_residual = 0.0;
  double tolerance = 1e-9;
};

namespace detail {

inline double clamped_atanh(double x) { return std::atanh(std::min(x, 1.0 - 1e-12)); }

// Three-point derivative on a possibly nonuniform grid.
inline std::vector<double> grid_derivative(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  auto three = [&](std::size_t i0, double at) {
    const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
    return y[i0] * (2 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)) + y[i0 + 1] * (2 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
           y[i0 + 2] * (2 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
  };
  d[0] = three(0, x[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three(i - 1, x[i]);
  d[n - 1] = three(n - 3, x[n - 1]);
  return d;
}

} // namespace detail

/// kappa_N(f_r) on the grid, the ratio to a known Teichmuller norm, and the
/// level-set and reconstruction checks.
inline HomotopyProfile norm_profile(const LaurentFunction& f, const std::vector<double>& grid, std::size_t n,
                                    const std::function<double(double)>& k_model = {}, double tolerance = 1e-9) {
  detail::require(!grid.empty(), "norm_profile: empty radius grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    detail::require(grid[i] > 0.0 && grid[i] < 1.0, "norm_profile: radii must lie in (0, 1)");
    if (i > 0) detail::require(grid[i] > grid[i - 1], "norm_profile: radii must be increasing");
  }
  const LaurentFunction g = f.with_order(std::max(n, f.order()));
  HomotopyProfile p;
  p.tolerance = tolerance;
  p.t_grid = grid;
  for (double r : grid) p.kappa.push_back(grunsky_norm(homotopy_map(g, r), n));
  for (std::size_t i = 1; i < p.kappa.size(); ++i)
    if (p.kappa[i] < p.kappa[i - 1] - 1e-14) p.monotone = false;

  if (k_model) {
    std::vector<double> kk, ratio;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double k = k_model(grid[i]);
      detail::require(std::isfinite(k) && k >= 0.0 && k < 1.0, "norm_profile: k_model must return values in [0, 1)");
      kk.push_back(k);
      ratio.push_back(k > 0.0 ? p.kappa[i] / k : (p.kappa[i] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()));
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::abs(ratio[i] - 1.0) <= tolerance)
        for (std::size_t j = 0; j < i; ++j)
          if (ratio[j] < 1.0 - 10.0 * tolerance) p.level_property_ok = false;
    p.k_known = std::move(kk);
    p.ratio = std::move(ratio);
  }

  // d atanh(kappa) = kappa' / (1 - kappa^2) dr, integrated by the trapezoid rule.
  const std::vector<double> dk = detail::grid_derivative(p.t_grid, p.kappa);
  p.reconstructed.assign(grid.size(), detail::clamped_atanh(p.kappa[0]));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    auto integrand = [&](std::size_t j) {
      const double k = std::min(p.kappa[j], 1.0 - 1e-12);
      return dk[j] / (1.0 - k * k);
    };
    p.reconstructed[i] = p.reconstructed[i - 1] + 0.5 * (grid[i] - grid[i - 1]) * (integrand(i) + integrand(i - 1));
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    p.reconstruction_residual =
        std::max(p.reconstruction_residual, std::abs(p.reconstructed[i] - detail::clamped_atanh(p.kappa[i])));
  return p;
}

} // namespace grunsky

#endif // GRUNSKY_HOMOTOPY_HPP
