#ifndef GRUNSKY_FREDHOLM_HPP
#define GRUNSKY_FREDHOLM_HPP

// Schwarzian derivatives and their hyperbolic sup norm, harmonic Beltrami
// coefficients, and Fredholm eigenvalue estimates from the Grunsky norm.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "grunsky/beltrami.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/quadrature.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

/// S_f = sum_k s_k z^{-k} (s_k = 0 for k < 4) and ||S_f||_B = sup (|z|^2 - 1)^2 |S_f(z)| on |z| > 1.
struct SchwarzianData {
  TaylorSeries series{0, expansion_point::infinity};
  double bnorm = 0.0;
};

struct BNormOptions {
  double r_min = 1.01;
  double r_max = 8.0;
  std::size_t radii = 32;     // geometric radii in [r_min, r_max], same count again beyond r_max
  std::size_t angles = 64;
  double tolerance = 1e-6;    // refinement stops when the sup changes by less
  int max_doublings = 6;
};

namespace detail {

inline double schwarzian_weighted(const LaurentFunction& f, complex z) {
  const complex d1 = f.derivative(z, 1);
  if (std::abs(d1) <= 1e-12 * f.leading())
    throw numerical_error("schwarzian: f' vanishes near |z| = " + std::to_string(std::abs(z)) +
                          " (not univalent on the sampled region)");
  const complex q = f.derivative(z, 2) / d1;
  const complex s = f.derivative(z, 3) / d1 - 1.5 * q * q;
  const double w = std::norm(z) - 1.0;
  return w * w * std::abs(s);
}

// Compass search for a local maximum in (log r, theta), r kept >= r_min.
inline double polish_maximum(const LaurentFunction& f, double log_r, double t, double step_r, double step_t,
                             double log_r_min) {
  double best = schwarzian_weighted(f, std::polar(std::exp(log_r), t));
  while (step_r > 1e-10 || step_t > 1e-10) {
    bool moved = false;
    const double cand[4][2] = {{step_r, 0.0}, {-step_r, 0.0}, {0.0, step_t}, {0.0, -step_t}};
    for (const auto& d : cand) {
      const double lr = std::max(log_r + d[0], log_r_min);
      const double v = schwarzian_weighted(f, std::polar(std::exp(lr), t + d[1]));
      if (v > best) {
        best = v;
        log_r = lr;
        t += d[1];
        moved = true;
        break;
      }
    }
    if (!moved) {
      step_r *= 0.5;
      step_t *= 0.5;
    }
  }
  return best;
}

// Sup over geometric radii r_min..r_max, then over |1/z| in (0, 1/r_max] and z = infinity;
// the best grid points are polished to the nearby local maximum.
inline double bnorm_on_grid(const LaurentFunction& f, double s4, const BNormOptions& o, std::size_t nr,
                            std::size_t na) {
  struct Sample {
    double value, log_r, t;
  };
  std::vector<Sample> samples;
  samples.reserve(2 * nr * na);
  const double ratio = std::log(o.r_max / o.r_min);
  for (std::size_t j = 0; j < na; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(na);
    for (std::size_t i = 0; i < nr; ++i) {
      const double lr = std::log(o.r_min) + ratio * static_cast<double>(i) / static_cast<double>(nr - 1);
      samples.push_back({schwarzian_weighted(f, std::polar(std::exp(lr), t)), lr, t});
    }
    for (std::size_t i = 1; i <= nr; ++i) {
      const double u = static_cast<double>(i) / (static_cast<double>(nr) * o.r_max);
      samples.push_back({schwarzian_weighted(f, std::polar(1.0 / u, t)), -std::log(u), t});
    }
  }
  const std::size_t keep = std::min<std::size_t>(8, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(keep), samples.end(),
                    [](const Sample& a, const Sample& b) { return a.value > b.value; });
  double sup = std::abs(s4);
  const double step_r = ratio / static_cast<double>(nr - 1);
  const double step_t = 2.0 * std::numbers::pi / static_cast<double>(na);
  for (std::size_t k = 0; k < keep; ++k)
    sup = std::max(sup, polish_maximum(f, samples[k].log_r, samples[k].t, step_r, step_t, std::log(o.r_min)));
  return sup;
}

} // namespace detail

/// Series through z^{-(2N+2)} (what the order-N moment form needs) and the B-norm.
inline SchwarzianData schwarzian(const LaurentFunction& f, std::size_t n, const BNormOptions& opt = {}) {
  detail::require(n >= 1, "schwarzian: order must be at least 1");
  detail::require(opt.radii >= 2 && opt.angles >= 4 && opt.r_min > 1.0 && opt.r_max > opt.r_min,
                  "schwarzian: invalid grid options");
  const std::size_t m = 2 * n + 2;
  // f'(z) = P(w), w = 1/z;  f''/f' = L(w) = -w^2 P'(w)/P(w);  S = -w^2 L'(w) - L^2/2.
  TaylorSeries p(m + 2, expansion_point::infinity);
  p[0] = f.leading();
  for (std::size_t k = 1; k + 1 <= m + 2; ++k) p[k + 1] = -static_cast<double>(k) * f.b(k);
  const TaylorSeries q = derivative(p) * inverse(p.truncated(m + 1));
  TaylorSeries l(m, expansion_point::infinity);
  for (std::size_t k = 2; k <= m; ++k) l[k] = -q[k - 2];
  const TaylorSeries l2 = l * l;
  SchwarzianData out;
  out.series = TaylorSeries(m, expansion_point::infinity);
  for (std::size_t k = 1; k <= m; ++k) out.series[k] = -static_cast<double>(k - 1) * l[k - 1] - 0.5 * l2[k];
  if (f.is_identity() || std::all_of(f.coefficients().begin() + 1, f.coefficients().end(),
                                     [](complex c) { return c == complex{}; })) {
    out.bnorm = 0.0;  // affine maps
    return out;
  }
  // f'(1/w) = c - sum k b_k w^{k+1}: a zero with |w| < 1 is a critical point in |z| > 1.
  std::vector<complex> fp(f.order() + 2, complex{});
  fp[0] = f.leading();
  for (std::size_t k = 1; k <= f.order(); ++k) fp[k + 1] = -static_cast<double>(k) * f.b(k);
  for (const complex& w : RationalFunction::roots(fp))
    if (std::abs(w) < 1.0)
      throw numerical_error("schwarzian: f' vanishes at z = " + std::to_string(std::real(1.0 / w)) + (std::imag(1.0 / w) < 0 ? "" : "+") +
                            std::to_string(std::imag(1.0 / w)) + "i in |z| > 1 (not univalent)");
  std::size_t nr = opt.radii, na = opt.angles;
  double prev = detail::bnorm_on_grid(f, std::abs(out.series[4]), opt, nr, na);
  for (int it = 0; it < opt.max_doublings; ++it) {
    nr *= 2;
    na *= 2;
    const double next = detail::bnorm_on_grid(f, std::abs(out.series[4]), opt, nr, na);
    const bool done = std::abs(next - prev) < opt.tolerance;
    prev = std::max(prev, next);
    if (done) {
      out.bnorm = prev;
      return out;
    }
  }
  throw numerical_error("schwarzian: B-norm grid refinement did not stabilize");
}

/// nu(z) = (1/2)(1 - |z|^2)^2 phi(1/conj z) conj(z)^{-4} sampled on a product rule
/// that integrates the order-N moment form exactly.
inline GridSampleMu harmonic_grid(const SchwarzianData& phi, std::size_t n_rho = 48, std::size_t n_theta = 128) {
  const std::size_t m = phi.series.order();
  n_rho = std::max(n_rho, m + 2);
  n_theta = std::max(n_theta, 2 * m + 2);
  const quadrature::TensorRule rule = quadrature::tensor_rule(n_rho, n_theta);
  GridSampleMu g;
  g.radii = rule.rho;
  g.radial_weights = rule.rho_weights;
  g.n_theta = n_theta;
  g.values.reserve(n_rho * n_theta);
  for (std::size_t i = 0; i < n_rho; ++i)
    for (std::size_t j = 0; j < n_theta; ++j)
      g.values.push_back(BeltramiSpec::harmonic_value(phi.series, std::polar(rule.rho[i], rule.theta(j))));
  return g;
}

/// Harmonic Beltrami coefficient as a grid sample on the unit disk; rejects
/// Schwarzians whose coefficient leaves the unit ball (B-norm >= 2).
inline BeltramiSpec harmonic_beltrami(const SchwarzianData& phi) { return BeltramiSpec::grid(harmonic_grid(phi)); }

struct FredholmReport {
  double kappa = 0.0;
  std::optional<double> rho;  // empty: infinity (kappa below 1e-12)
  double firstorder = 0.0;
  double bnorm = 0.0;
  std::optional<double> q_l;
  bool ahlfors_ok = true;     // 1/rho <= qL + tol (vacuous without qL)
  bool reciprocity_ok = true; // rho kappa = 1
  std::size_t order = 0;
};

inline constexpr double rho_infinity_threshold = 1e-12;

inline FredholmReport fredholm_eigenvalue(const LaurentFunction& f, std::size_t n,
                                          std::optional<double> q_l = std::nullopt, double tolerance = 1e-12) {
  detail::require(n >= 1, "fredholm_eigenvalue: order must be at least 1");
  if (q_l) detail::require(*q_l >= 0.0 && *q_l < 1.0, "fredholm_eigenvalue: qL must lie in [0, 1)");
  FredholmReport r;
  r.order = n;
  r.q_l = q_l;
  r.kappa = grunsky_norm(f.with_order(std::max(n, f.order())), n);
  if (r.kappa >= rho_infinity_threshold) {
    r.rho = 1.0 / r.kappa;
    r.reciprocity_ok = std::abs(*r.rho * r.kappa - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon();
  }
  const SchwarzianData s = schwarzian(f, n);
  r.bnorm = s.bnorm;
  const GridSampleMu nu = harmonic_grid(s);
  const MomentVector c{detail::grid_moments(nu, 1.0, 0, static_cast<int>(2 * n) - 2), 0, moment_basis::monomial};
  r.firstorder = form_norm(hankel_form(c, n)).value;
  const double inv_rho = r.rho ? 1.0 / *r.rho : 0.0;
  r.ahlfors_ok = !q_l || inv_rho <= *q_l + tolerance;
  return r;
}

} // namespace grunsky

#endif // GRUNSKY_FREDHOLM_HPP
