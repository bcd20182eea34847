#ifndef GRUNSKY_QUASIDOMAIN_HPP
#define GRUNSKY_QUASIDOMAIN_HPP

// Conformal maps of explicit quasidisks (ellipse, Cassini interior), Milin
// polynomial bases, generalized Grunsky coefficients and the extremal
// functional alpha on non-circular domains.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grunsky/beltrami.hpp"
#include "grunsky/domain.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/quadrature.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

// ---------------------------------------------------------------- maps

struct EllipseMaps {
  double a = 0.0, b = 0.0;
  LaurentFunction chi_series;   // expansion of chi about infinity
  LaurentFunction chi_inv;      // its series reversion
  double roundtrip_error = 0.0; // max |chi(chi_inv(u)) - u| on |u| = 2

  /// (z + sqrt(z^2 - 1)) / (a + b), branch positive for real z > 1.
  complex chi(complex z) const { return DomainSpec::ellipse(a, b).chi(z); }
};

namespace detail {

inline double roundtrip_on_circle(const DomainSpec& d, const LaurentFunction& chi_inv, double radius,
                                  std::size_t points = 64) {
  double err = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    const complex u = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points));
    err = std::max(err, std::abs(d.chi(chi_inv(u)) - u));
  }
  return err;
}

} // namespace detail

inline constexpr std::size_t default_map_order = 32;

/// Ellipse exterior map and its inverse obtained by reverting the Laurent
/// expansion chi(z) = (2z - sum_k C_k z^{1-2k} / 4^k ...)/(a+b) about infinity.
inline EllipseMaps ellipse_maps(double a, double b, std::size_t order = default_map_order) {
  const DomainSpec d = DomainSpec::ellipse(a, b);
  detail::require(order >= 2, "ellipse_maps: order must be at least 2");
  // z sqrt(1 - z^{-2}) = z * T(x) with x = 1/z, T = (1 - x^2)^{1/2}.
  TaylorSeries inner(order + 1, expansion_point::infinity);
  inner[0] = 1.0;
  inner[2] = -1.0;
  const TaylorSeries t = sqrt(inner);
  const double s = a + b;
  std::vector<complex> coeffs(order + 1, complex{});
  // chi(z) = (2z + sum_{k>=1} t_{k+1} z^{-k}) / s  (t_1 = 0, t_0 = 1)
  for (std::size_t k = 0; k <= order; ++k) coeffs[k] = t[k + 1] / s;
  EllipseMaps m;
  m.a = a;
  m.b = b;
  m.chi_series = LaurentFunction(2.0 / s, std::move(coeffs), order);
  m.chi_inv = invert_at_infinity(m.chi_series, order);
  m.roundtrip_error = detail::roundtrip_on_circle(d, m.chi_inv, 2.0);
  return m;
}

struct CassiniMaps {
  double c = 0.0;
  TaylorSeries g;                 // unit disk -> interior, about 0
  LaurentFunction chi_inv;        // |u| > 1 -> exterior, about infinity
  double boundary_residual = 0.0; // max | |g(e^{it})^2 - 1| - c | on the check grid
  double roundtrip_error = 0.0;   // max |chi(chi_inv(u)) - u| on |u| = 2

  /// Closed forms, principal branches; g'(0) > 0.
  static complex g_closed(double c, complex z) { return z * std::sqrt((c * c - 1.0) / (c - z * z)); }
  static complex g_prime_closed(double c, complex z) {
    const complex w = c - z * z;
    return std::sqrt(c * c - 1.0) * c / (w * std::sqrt(w));
  }
};

/// Degree at which the Taylor series of g reaches double precision on |z| = 1.
inline std::size_t cassini_series_degree(double c) {
  const double d = std::ceil(2.0 * 36.0 / std::log(c)) + 8.0;
  return static_cast<std::size_t>(std::min(d, 4000.0));
}

inline CassiniMaps cassini_maps(double c, std::size_t order = default_map_order, std::size_t check_points = 64) {
  const DomainSpec d = DomainSpec::cassini(c);
  CassiniMaps m;
  m.c = c;
  m.g = DomainSpec::cassini_g(c, cassini_series_degree(c));
  m.chi_inv = DomainSpec::cassini_chi_inv(c, order);
  for (std::size_t j = 0; j < check_points; ++j) {
    const complex z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(check_points));
    const complex gz = m.g(z);
    m.boundary_residual = std::max(m.boundary_residual, std::abs(std::abs(gz * gz - 1.0) - c));
  }
  m.roundtrip_error = detail::roundtrip_on_circle(d, m.chi_inv, 2.0);
  return m;
}

// ---------------------------------------------------------------- bases

/// Polynomial basis Q_1..Q_N of the Bergman space of D, deg Q_n = n - 1,
/// with <Q_m, Q_n>_D = pi delta_mn.  Q_n is the Gram-Schmidt orthonormalization
/// (in degree order) of sqrt(n) P'_n, where 1/(z - w) = sum_n P'_n(w) chi(z)^{-n}.
struct MilinBasis {
  std::vector<std::vector<complex>> polys;  // Q_n ascending coefficients, index n - 1
  std::vector<std::vector<complex>> raw;    // extracted P'_n, index n - 1
  std::size_t order = 0;
  DomainSpec domain;
  Eigen::MatrixXcd gram;      // (1/pi) <Q_m, Q_n>
  Eigen::MatrixXcd raw_gram;  // (1/pi) <sqrt(m) P'_m, sqrt(n) P'_n>
  double contour_radius = 0.0;
  double fit_residual = 0.0;

  complex operator()(std::size_t n, complex w) const {
    const auto& p = polys.at(n - 1);
    complex acc{};
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * w + p[i];
    return acc;
  }

  double orthonormality_error() const {
    return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }
  double raw_orthonormality_error() const {
    return (raw_gram - Eigen::MatrixXcd::Identity(raw_gram.rows(), raw_gram.cols())).cwiseAbs().maxCoeff();
  }
};

namespace detail {

// H(j, k) = iint_D w^j conj(w)^k dx dy for 0 <= j, k < n, by a product rule on
// the (rho, theta) parametrization refined until two levels agree.
inline Eigen::MatrixXcd monomial_gram(const DomainSpec& d, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  auto evaluate = [&](std::size_t n_rho, std::size_t n_theta) {
    const quadrature::TensorRule rule = quadrature::tensor_rule(n_rho, n_theta);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nn, nn);
    Eigen::VectorXcd pw(nn);
    for (std::size_t i = 0; i < rule.rho.size(); ++i)
      for (std::size_t j = 0; j < rule.n_theta; ++j) {
        const DomainSpec::Point p = d.parametrize(rule.rho[i], rule.theta(j));
        const double w = rule.rho_weights[i] * rule.theta_weight() * p.jacobian;
        complex x = 1.0;
        for (Eigen::Index k = 0; k < nn; ++k) {
          pw(k) = x;
          x *= p.z;
        }
        h.noalias() += w * pw * pw.adjoint();
      }
    return h;
  };
  std::size_t n_rho = n + 4, n_theta = 4 * n + 16;
  if (const auto* ci = std::get_if<ConformalImage>(&d.variant())) {
    n_rho = (n + 2) * (ci->g.order() + 1) / 2 + 4;
    n_theta = 2 * (n + 2) * (ci->g.order() + 1) + 16;
  }
  Eigen::MatrixXcd h = evaluate(n_rho, n_theta);
  for (int level = 0; level < 8; ++level) {
    n_rho = n_rho * 3 / 2 + 2;
    n_theta *= 2;
    Eigen::MatrixXcd next = evaluate(n_rho, n_theta);
    const double change = (next - h).cwiseAbs().maxCoeff();
    h = std::move(next);
    // Accumulated rounding grows like sqrt(points); an exact rule stalls at that floor.
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(n_rho * n_theta));
    if (change <= std::max(1e-14, floor) * std::max(1.0, h.cwiseAbs().maxCoeff())) return h;
  }
  throw numerical_error("monomial_gram: product rule did not stabilize on " + d.name());
}

inline complex inner_product(const std::vector<complex>& p, const std::vector<complex>& q,
                             const Eigen::MatrixXcd& h) {
  complex acc{};
  for (std::size_t j = 0; j < p.size(); ++j)
    for (std::size_t k = 0; k < q.size(); ++k) acc += p[j] * std::conj(q[k]) * h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  return acc;
}

// Orthonormalizes in order, <q_n, q_n> = pi, keeping the leading coefficient's phase.
inline std::vector<std::vector<complex>> orthonormalize(const std::vector<std::vector<complex>>& basis,
                                                        const Eigen::MatrixXcd& h) {
  std::vector<std::vector<complex>> out;
  for (const auto& p : basis) {
    std::vector<complex> q = p;
    for (int pass = 0; pass < 2; ++pass)  // reorthogonalization
      for (const auto& e : out) {
        const complex proj = inner_product(q, e, h) / std::numbers::pi;
        for (std::size_t i = 0; i < e.size(); ++i) q[i] -= proj * e[i];
      }
    const double nrm = std::sqrt(std::abs(inner_product(q, q, h)) / std::numbers::pi);
    require(nrm > 0.0 && std::isfinite(nrm), "orthonormalize: linearly dependent system");
    const complex lead = q.back();
    const complex phase = std::abs(p.back()) > 0.0 && std::abs(lead) > 0.0 ? (p.back() / std::abs(p.back())) / (lead / std::abs(lead)) : complex(1.0);
    for (auto& x : q) x *= phase / nrm;
    out.push_back(std::move(q));
  }
  return out;
}

inline Eigen::MatrixXcd normalized_gram(const std::vector<std::vector<complex>>& basis, const Eigen::MatrixXcd& h) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k)
      g(m, k) = inner_product(basis[static_cast<std::size_t>(m)], basis[static_cast<std::size_t>(k)], h) / std::numbers::pi;
  return g;
}

// chi_inv evaluated in closed form when available.
inline complex chi_inv_value(const DomainSpec& d, const LaurentFunction& series, complex u) {
  if (const auto* e = std::get_if<EllipseInterior>(&d.variant())) {
    const double s = e->a + e->b;
    return 0.5 * (s * u + 1.0 / (s * u));
  }
  if (const auto* c = std::get_if<CassiniInterior>(&d.variant()))
    return std::sqrt(c->c) * u * std::sqrt(1.0 + 1.0 / (c->c * u * u));
  if (d.is_unit_disk()) return u;
  return series(u);
}

} // namespace detail

/// Extracts P'_n(w) = (1/2 pi i) oint_{|u|=R} u^{n-1} / (chi_inv(u) - w) du by the
/// trapezoid rule, fits each to a degree n-1 polynomial by least squares on
/// 4N points of the circle |w| = inradius/2, then orthonormalizes.
inline MilinBasis milin_polynomials(const DomainSpec& d, std::size_t n) {
  detail::require(n >= 1, "milin_polynomials: order must be at least 1");
  const LaurentFunction chi_inv = d.chi_inv(std::max<std::size_t>(n + 2, d.is_unit_disk() ? 1 : n + 2));
  const std::size_t fit_points = 4 * n;
  const double rho = 0.5 * d.inradius();
  std::vector<complex> ws(fit_points);
  for (std::size_t k = 0; k < fit_points; ++k)
    ws[k] = std::polar(rho, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(fit_points));

  // Vandermonde in the scaled variable w / rho.
  Eigen::MatrixXcd vand(static_cast<Eigen::Index>(fit_points), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < fit_points; ++k) {
    complex x = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      vand(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = x;
      x *= ws[k] / rho;
    }
  }

  MilinBasis basis;
  basis.order = n;
  basis.domain = d;
  for (double radius = 2.0; radius <= 16.0; radius *= 2.0) {
    const std::size_t samples = std::max<std::size_t>(64, 8 * n) * static_cast<std::size_t>(radius);
    std::vector<complex> us(samples), zs(samples);
    for (std::size_t j = 0; j < samples; ++j) {
      us[j] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples));
      zs[j] = detail::chi_inv_value(d, chi_inv, us[j]);
    }
    bool ok = true;
    double worst = 0.0;
    std::vector<std::vector<complex>> raw;
    for (std::size_t m = 1; m <= n && ok; ++m) {
      Eigen::VectorXcd vals(static_cast<Eigen::Index>(fit_points));
      for (std::size_t k = 0; k < fit_points; ++k) {
        complex acc{};
        for (std::size_t j = 0; j < samples; ++j) acc += std::pow(us[j], static_cast<int>(m)) / (zs[j] - ws[k]);
        vals(static_cast<Eigen::Index>(k)) = acc / static_cast<double>(samples);
      }
      const Eigen::MatrixXcd sub = vand.leftCols(static_cast<Eigen::Index>(m));
      const Eigen::VectorXcd coef = sub.colPivHouseholderQr().solve(vals);
      const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
      const double residual = (sub * coef - vals).cwiseAbs().maxCoeff() / scale;
      worst = std::max(worst, residual);
      if (!(residual <= 1e-9)) ok = false;
      std::vector<complex> p(m);
      double rpow = 1.0;
      for (std::size_t j = 0; j < m; ++j) {
        p[j] = coef(static_cast<Eigen::Index>(j)) / rpow;
        rpow *= rho;
      }
      raw.push_back(std::move(p));
    }
    if (!ok) continue;
    basis.raw = std::move(raw);
    basis.contour_radius = radius;
    basis.fit_residual = worst;
    break;
  }
  if (basis.raw.empty())
    throw numerical_error("milin_polynomials: contour extraction failed up to radius 16 on " + d.name() +
                          " (chi_inv expansion does not resolve the kernel)");

  const Eigen::MatrixXcd h = detail::monomial_gram(d, n);
  std::vector<std::vector<complex>> scaled;
  for (std::size_t m = 1; m <= n; ++m) {
    auto p = basis.raw[m - 1];
    for (auto& x : p) x *= std::sqrt(static_cast<double>(m));
    scaled.push_back(std::move(p));
  }
  basis.raw_gram = detail::normalized_gram(scaled, h);
  basis.polys = d.is_unit_disk() ? scaled : detail::orthonormalize(scaled, h);
  basis.gram = detail::normalized_gram(basis.polys, h);
  return basis;
}

/// Chebyshev polynomials of the second kind U_0..U_{n-1}, ascending coefficients.
inline std::vector<std::vector<complex>> chebyshev_u(std::size_t n) {
  std::vector<std::vector<complex>> u;
  if (n >= 1) u.push_back({complex(1.0)});
  if (n >= 2) u.push_back({complex{}, complex(2.0)});
  for (std::size_t k = 2; k < n; ++k) {
    std::vector<complex> next(k + 1, complex{});
    for (std::size_t i = 0; i < u[k - 1].size(); ++i) next[i + 1] += 2.0 * u[k - 1][i];
    for (std::size_t i = 0; i < u[k - 2].size(); ++i) next[i] -= u[k - 2][i];
    u.push_back(std::move(next));
  }
  return u;
}

struct EllipseBasis {
  MilinBasis basis;               // Q_n proportional to U_{n-1}
  std::vector<double> forced;     // constants c_j with ||c_j U_j||_D = 1, j = 0..N-1
  std::vector<double> nominal;    // 2 sqrt((j+1)/pi) (r^{j+1} - r^{-j-1}), r = (a+b)^2
  std::vector<double> ratio;      // forced / nominal
};

inline EllipseBasis ellipse_basis(double a, double b, std::size_t n) {
  const DomainSpec d = DomainSpec::ellipse(a, b);
  detail::require(n >= 1, "ellipse_basis: order must be at least 1");
  const Eigen::MatrixXcd h = detail::monomial_gram(d, n);
  const auto u = chebyshev_u(n);
  const double r = (a + b) * (a + b);
  EllipseBasis e;
  e.basis.order = n;
  e.basis.domain = d;
  e.basis.raw = u;
  for (std::size_t j = 0; j < n; ++j) {
    const double norm2 = std::abs(detail::inner_product(u[j], u[j], h));
    detail::require(norm2 > 0.0, "ellipse_basis: vanishing norm");
    const double forced = 1.0 / std::sqrt(norm2);
    const double jp = static_cast<double>(j + 1);
    const double nominal = 2.0 * std::sqrt(jp / std::numbers::pi) * (std::pow(r, jp) - std::pow(r, -jp));
    e.forced.push_back(forced);
    e.nominal.push_back(nominal);
    e.ratio.push_back(forced / nominal);
    auto q = u[j];
    for (auto& x : q) x *= forced * std::sqrt(std::numbers::pi);
    e.basis.polys.push_back(std::move(q));
  }
  e.basis.raw_gram = detail::normalized_gram(e.basis.polys, h);
  e.basis.gram = e.basis.raw_gram;
  return e;
}

// ---------------------------------------------------------------- coefficients

/// beta_mn / sqrt(mn) on D*: alpha_mn(f o chi_inv) - alpha_mn(chi_inv), with
/// chi_inv expanded to order 2N.
inline KernelMatrix generalized_coefficients(const LaurentFunction& f, const DomainSpec& d, std::size_t n) {
  detail::require(n >= 1, "generalized_coefficients: order must be at least 1");
  const std::size_t m = 2 * n;
  const LaurentFunction chi_inv = d.chi_inv(m);
  if (chi_inv.order() < m) throw numerical_error("generalized_coefficients: chi_inv carries too few coefficients");
  const LaurentFunction big_f = compose_at_infinity(f.with_order(std::max(m, f.order())), chi_inv, m);
  const KernelMatrix a = series_log_ratio(big_f, n);
  const KernelMatrix c = series_log_ratio(chi_inv, n);
  return KernelMatrix(a.entries() - c.entries(), kernel_kind::generalized);
}

/// Generalized Grunsky norm at order N.
inline double generalized_grunsky_norm(const LaurentFunction& f, const DomainSpec& d, std::size_t n) {
  return form_norm(build_form(generalized_coefficients(f, d, n))).value;
}

// ---------------------------------------------------------------- alpha on D

enum class alpha_route { direct, pullback };

namespace detail {

inline void require_domain_coefficient(const BeltramiSpec& mu, const DomainSpec& d) {
  require(mu.is_teichmuller_type(), "alpha on a domain: only constant and Teichmuller coefficients extend off the disk");
  require(mu.support().name() == d.name(), "alpha on a domain: coefficient support does not match the domain");
}

// (1/pi) iint_D mu* z^p, p = 0..P, over the domain parametrization.
inline std::vector<complex> domain_moments(const BeltramiSpec& mu, const DomainSpec& d, std::size_t p_max,
                                           const QuadratureOptions& opt) {
  const double norm = mu.sup_norm();
  require(norm > 0.0, "domain moments: mu vanishes identically, mu* undefined");
  std::vector<double> rho_extra, theta_extra;
  if (const auto* t = std::get_if<TeichmullerMu>(&mu.variant()))
    for (const complex& z : t->psi.critical_points())
      if (auto pr = d.parameters_of(z); pr && pr->first > 1e-12 && pr->first < 1.0) {
        rho_extra.push_back(pr->first);
        theta_extra.push_back(pr->second);
      }
  const auto rho_b = quadrature::breakpoints(0.0, 1.0, 2, rho_extra);
  const auto theta_b = quadrature::breakpoints(0.0, 2.0 * std::numbers::pi, std::max<std::size_t>(8, 2 * p_max + 4), theta_extra);
  auto integrand = [&](double r, double t, std::span<complex> out) {
    const DomainSpec::Point p = d.parametrize(r, t);
    const complex w = mu(p.z) / norm * p.jacobian;
    complex e = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = w * e;
      e *= p.z;
    }
  };
  quadrature::CubatureOptions co;
  co.abs_tol = opt.tolerance * std::numbers::pi;
  co.max_cells = opt.max_cells;
  auto res = quadrature::adaptive_rectangles(integrand, p_max + 1, rho_b, theta_b, co);
  for (auto& x : res.value) x /= std::numbers::pi;
  return res.value;
}

// Upper triangle of (1/pi) iint_disk mu*(g) conj(g')/g' (Q_m(g) g')(Q_n(g) g').
inline Eigen::MatrixXcd pullback_form(const BeltramiSpec& mu, const DomainSpec& d, const MilinBasis& basis,
                                      const QuadratureOptions& opt) {
  const std::size_t n = basis.order;
  const double norm = mu.sup_norm();
  require(norm > 0.0, "pullback: mu vanishes identically, mu* undefined");
  std::function<std::pair<complex, complex>(complex)> gmap;
  if (const auto* c = std::get_if<CassiniInterior>(&d.variant())) {
    const double cc = c->c;
    gmap = [cc](complex z) { return std::make_pair(CassiniMaps::g_closed(cc, z), CassiniMaps::g_prime_closed(cc, z)); };
  } else if (const auto* ci = std::get_if<ConformalImage>(&d.variant())) {
    const TaylorSeries g = ci->g, gp = derivative(ci->g);
    gmap = [g, gp](complex z) { return std::make_pair(g(z), gp(z)); };
  } else if (d.is_unit_disk()) {
    gmap = [](complex z) { return std::make_pair(z, complex(1.0)); };
  } else {
    throw validation_error("pullback: no interior map g is available for " + d.name());
  }
  const std::size_t dims = n * (n + 1) / 2;
  auto integrand = [&](double r, double t, std::span<complex> out) {
    const complex zeta = std::polar(r, t);
    const auto [z, gp] = gmap(zeta);
    const complex w = mu(z) / norm * std::conj(gp) / gp * r;
    std::vector<complex> om(n);
    for (std::size_t m = 0; m < n; ++m) om[m] = basis(m + 1, z) * gp;
    std::size_t k = 0;
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t j = m; j < n; ++j) out[k++] = w * om[m] * om[j];
  };
  quadrature::CubatureOptions co;
  co.abs_tol = opt.tolerance * std::numbers::pi;
  co.max_cells = opt.max_cells;
  const auto res = quadrature::adaptive_rectangles(integrand, dims, quadrature::breakpoints(0.0, 1.0, 2),
                                                   quadrature::breakpoints(0.0, 2.0 * std::numbers::pi, 8), co);
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t k = 0;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = m; j < n; ++j) {
      b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = res.value[k++] / std::numbers::pi;
      b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) = b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
    }
  return b;
}

} // namespace detail

/// B_mn = (1/pi) iint_D mu* Q_m Q_n over the domain's orthonormal basis.
inline SymmetricForm alpha_form_domain(const BeltramiSpec& mu, const DomainSpec& d, const MilinBasis& basis,
                                       alpha_route route = alpha_route::direct, const QuadratureOptions& opt = {}) {
  detail::require_domain_coefficient(mu, d);
  detail::require(basis.domain.name() == d.name(), "alpha_form_domain: basis built for another domain");
  const std::size_t n = basis.order;
  if (route == alpha_route::pullback) return SymmetricForm(detail::pullback_form(mu, d, basis, opt), "alpha-Milin");
  const auto mom = detail::domain_moments(mu, d, 2 * n - 2, opt);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = m; j < n; ++j) {
      complex acc{};
      const auto& p = basis.polys[m];
      const auto& q = basis.polys[j];
      for (std::size_t s = 0; s < p.size(); ++s)
        for (std::size_t t = 0; t < q.size(); ++t) acc += p[s] * q[t] * mom[s + t];
      b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = acc;
    }
  return SymmetricForm(std::move(b), "alpha-Milin");
}

inline NormEstimate alpha_functional_domain(const BeltramiSpec& mu, const DomainSpec& d,
                                            std::size_t n = default_alpha_order,
                                            alpha_route route = alpha_route::direct,
                                            const QuadratureOptions& opt = {}) {
  detail::require(n >= 1, "alpha_functional_domain: order must be at least 1");
  if (d.is_unit_disk() && route == alpha_route::direct) return alpha_functional(mu.with_support(d), n, opt);
  const MilinBasis basis = milin_polynomials(d, n);
  NormEstimate est = form_norm(alpha_form_domain(mu, d, basis, route, opt));
  if (est.value > 1.0 + 1e3 * opt.tolerance + 1e-7)
    throw numerical_error("alpha_functional_domain: value exceeds 1 beyond quadrature and basis tolerance");
  return est;
}

} // namespace grunsky

#endif // GRUNSKY_QUASIDOMAIN_HPP
