#ifndef GRUNSKY_BELTRAMI_HPP
#define GRUNSKY_BELTRAMI_HPP

// Beltrami coefficients supported in a bounded domain, their moments against
// holomorphic bases, the extremal functional alpha, the strengthened Grunsky
// bound, first-order variational maps and pole-perturbed approximants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "grunsky/domain.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/quadrature.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

/// num(z) / den(z) with coefficient lists in ascending powers of z.
class RationalFunction {
public:
  RationalFunction() : num_{complex(1.0)}, den_{complex(1.0)} {}

  RationalFunction(std::vector<complex> num, std::vector<complex> den) : num_(std::move(num)), den_(std::move(den)) {
    trim(num_);
    trim(den_);
    detail::require(!is_zero(num_), "rational function: numerator is identically zero");
    detail::require(!is_zero(den_), "rational function: denominator is identically zero");
  }

  static RationalFunction polynomial(std::vector<complex> coeffs) { return {std::move(coeffs), {complex(1.0)}}; }
  static RationalFunction monomial(std::size_t p) {
    std::vector<complex> c(p + 1, complex{});
    c[p] = 1.0;
    return polynomial(std::move(c));
  }

  const std::vector<complex>& numerator() const { return num_; }
  const std::vector<complex>& denominator() const { return den_; }

  complex operator()(complex z) const { return horner(num_, z) / horner(den_, z); }

  /// this + c / z
  RationalFunction plus_pole_at_origin(complex c) const {
    std::vector<complex> num(std::max(num_.size() + 1, den_.size()), complex{});
    for (std::size_t i = 0; i < num_.size(); ++i) num[i + 1] += num_[i];
    for (std::size_t i = 0; i < den_.size(); ++i) num[i] += c * den_[i];
    std::vector<complex> den(den_.size() + 1, complex{});
    for (std::size_t i = 0; i < den_.size(); ++i) den[i + 1] = den_[i];
    return {std::move(num), std::move(den)};
  }

  /// Zeros of numerator and denominator (with multiplicity).
  std::vector<complex> critical_points() const {
    auto r = roots(num_);
    auto d = roots(den_);
    r.insert(r.end(), d.begin(), d.end());
    return r;
  }

  static std::vector<complex> roots(std::vector<complex> c) {
    trim(c);
    std::vector<complex> out;
    std::size_t low = 0;
    while (low < c.size() && c[low] == complex{}) {
      out.push_back(complex{});
      ++low;
    }
    const std::size_t deg = c.size() - 1 - low;
    if (deg == 0) return out;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
    const complex lead = c.back();
    for (std::size_t i = 0; i < deg; ++i) {
      comp(0, static_cast<Eigen::Index>(i)) = -c[c.size() - 2 - i] / lead;
      if (i + 1 < deg) comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw numerical_error("rational function: root finding failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
  }

private:
  static complex horner(const std::vector<complex>& c, complex z) {
    complex acc{};
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
  }
  static void trim(std::vector<complex>& c) {
    while (c.size() > 1 && c.back() == complex{}) c.pop_back();
    if (c.empty()) c.push_back(complex{});
  }
  static bool is_zero(const std::vector<complex>& c) {
    return std::all_of(c.begin(), c.end(), [](complex x) { return x == complex{}; });
  }

  std::vector<complex> num_, den_;
};

struct ConstantMu {
  complex value;
};

/// mu = k |psi| / psi.
struct TeichmullerMu {
  double k;
  RationalFunction psi;
};

/// nu(z) = (1/2) (1 - |z|^2)^2 phi(1/conj z) conj(z)^{-4}, phi given by its
/// expansion at infinity (coefficient of z^{-k} at index k).
struct HarmonicMu {
  TaylorSeries phi;
};

/// Values on the nodes of a product rule over the unit disk: radii with radial
/// weights (for integrals over rho in [0, 1]) times n_theta equispaced angles.
/// values[i * n_theta + j] sits at radii[i] * exp(2 pi i j / n_theta).
struct GridSampleMu {
  std::vector<double> radii;
  std::vector<double> radial_weights;
  std::size_t n_theta = 0;
  std::vector<complex> values;
};

class BeltramiSpec {
public:
  using variant_type = std::variant<ConstantMu, TeichmullerMu, HarmonicMu, GridSampleMu>;

  BeltramiSpec() : v_(ConstantMu{complex{}}) {}

  static BeltramiSpec constant(complex value, DomainSpec support = {}) {
    detail::require(std::abs(value) < 1.0, "Beltrami coefficient: |mu| must be < 1");
    return BeltramiSpec(ConstantMu{value}, std::move(support));
  }

  static BeltramiSpec teichmuller(double k, RationalFunction psi, DomainSpec support = {}) {
    detail::require(std::isfinite(k) && k > 0.0 && k < 1.0, "Teichmuller coefficient: k must lie in (0, 1)");
    return BeltramiSpec(TeichmullerMu{k, std::move(psi)}, std::move(support));
  }

  static BeltramiSpec harmonic(TaylorSeries phi) {
    detail::require(phi.at() == expansion_point::infinity, "harmonic coefficient: phi must be an expansion at infinity");
    BeltramiSpec s(HarmonicMu{std::move(phi)}, DomainSpec::unit_disk());
    detail::require(s.sup_norm() < 1.0, "harmonic coefficient: sampled sup norm must be < 1");
    return s;
  }

  static BeltramiSpec grid(GridSampleMu g) {
    detail::require(!g.radii.empty() && g.radii.size() == g.radial_weights.size() && g.n_theta >= 1,
                    "grid coefficient: inconsistent rule");
    detail::require(g.values.size() == g.radii.size() * g.n_theta, "grid coefficient: value count mismatch");
    for (double r : g.radii) detail::require(r >= 0.0 && r <= 1.0, "grid coefficient: radii must lie in [0, 1]");
    BeltramiSpec s(std::move(g), DomainSpec::unit_disk());
    detail::require(s.sup_norm() < 1.0, "grid coefficient: sup norm must be < 1");
    return s;
  }

  const variant_type& variant() const { return v_; }
  const DomainSpec& support() const { return support_; }
  BeltramiSpec with_support(DomainSpec d) const {
    BeltramiSpec s = *this;
    s.support_ = std::move(d);
    return s;
  }

  std::string type_name() const {
    static const char* names[] = {"constant", "teichmuller", "harmonic", "grid"};
    return names[v_.index()];
  }

  /// Teichmuller-type coefficients (k |psi|/psi, constants included).
  bool is_teichmuller_type() const { return v_.index() <= 1; }

  complex operator()(complex z) const {
    return std::visit(
        [&](const auto& m) -> complex {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantMu>) {
            return m.value;
          } else if constexpr (std::is_same_v<T, TeichmullerMu>) {
            const complex p = m.psi(z);
            if (p == complex{} || !std::isfinite(std::abs(p))) return complex{};  // measure zero
            return m.k * std::abs(p) / p;
          } else if constexpr (std::is_same_v<T, HarmonicMu>) {
            return harmonic_value(m.phi, z);
          } else {
            return grid_value(m, z);
          }
        },
        v_);
  }

  /// ||mu||_inf: exact for constant and Teichmuller coefficients, sampled otherwise.
  double sup_norm() const {
    return std::visit(
        [&](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, ConstantMu>) {
            return std::abs(m.value);
          } else if constexpr (std::is_same_v<T, TeichmullerMu>) {
            return m.k;
          } else if constexpr (std::is_same_v<T, HarmonicMu>) {
            double s = 0.0;
            for (int i = 0; i <= 64; ++i)
              for (int j = 0; j < 128; ++j)
                s = std::max(s, std::abs(harmonic_value(m.phi, std::polar(i / 64.0, 2.0 * std::numbers::pi * j / 128.0))));
            return s;
          } else {
            double s = 0.0;
            for (const auto& v : m.values) s = std::max(s, std::abs(v));
            return s;
          }
        },
        v_);
  }

  static complex harmonic_value(const TaylorSeries& phi, complex z) {
    const complex zb = std::conj(z);
    const double w = 1.0 - std::norm(z);
    complex acc{};
    // sum_k phi_k zb^{k-4}
    for (std::size_t k = phi.order() + 1; k-- > 4;) acc = acc * zb + phi[k];
    complex low{};
    for (std::size_t k = 0; k < std::min<std::size_t>(4, phi.order() + 1); ++k)
      if (phi[k] != complex{}) low += phi[k] * std::pow(zb, static_cast<int>(k) - 4);
    return 0.5 * w * w * (acc + low);
  }

private:
  BeltramiSpec(variant_type v, DomainSpec support) : v_(std::move(v)), support_(std::move(support)) {}

  static complex grid_value(const GridSampleMu& g, complex z) {
    // Bilinear interpolation in (rho, theta), clamped radially.
    const double r = std::abs(z);
    double t = std::arg(z);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    const double ft = t / (2.0 * std::numbers::pi) * static_cast<double>(g.n_theta);
    const auto j0 = static_cast<std::size_t>(std::floor(ft)) % g.n_theta;
    const std::size_t j1 = (j0 + 1) % g.n_theta;
    const double wt = ft - std::floor(ft);
    std::size_t i1 = 0;
    while (i1 < g.radii.size() && g.radii[i1] < r) ++i1;
    auto row = [&](std::size_t i) {
      return (1.0 - wt) * g.values[i * g.n_theta + j0] + wt * g.values[i * g.n_theta + j1];
    };
    if (i1 == 0) return row(0);
    if (i1 == g.radii.size()) return row(g.radii.size() - 1);
    const std::size_t i0 = i1 - 1;
    const double wr = (r - g.radii[i0]) / (g.radii[i1] - g.radii[i0]);
    return (1.0 - wr) * row(i0) + wr * row(i1);
  }

  variant_type v_;
  DomainSpec support_;
};

enum class moment_basis { monomial, milin, custom };

/// c[p - first] = (1/pi) iint_D mu*(z) e_p(z) dx dy.
struct MomentVector {
  std::vector<complex> c;
  int first = 0;
  moment_basis basis = moment_basis::monomial;

  complex operator[](int p) const {
    const int i = p - first;
    return i >= 0 && static_cast<std::size_t>(i) < c.size() ? c[static_cast<std::size_t>(i)] : complex{};
  }
  int last() const { return first + static_cast<int>(c.size()) - 1; }
};

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute, on (1/pi)-scaled moments
  std::size_t max_cells = 200000;
};

namespace detail {

// (1/pi) iint_{|z|<1} w(z) z^p dx dy for p in [p_lo, p_hi] by adaptive polar
// cubature; angular sectors and radial breaks pass through the given points.
template <class W>
std::vector<complex> polar_moments(W&& weight, int p_lo, int p_hi, const std::vector<complex>& split_points,
                                   const QuadratureOptions& opt) {
  const std::size_t dims = static_cast<std::size_t>(p_hi - p_lo + 1);
  std::vector<double> rho_extra, theta_extra;
  for (const complex& z : split_points) {
    const double r = std::abs(z);
    if (r > 1e-12 && r < 1.0) {
      rho_extra.push_back(r);
      double t = std::arg(z);
      if (t < 0.0) t += 2.0 * std::numbers::pi;
      theta_extra.push_back(t);
    }
  }
  const std::size_t sectors = std::max<std::size_t>(8, 2 * static_cast<std::size_t>(std::max(std::abs(p_lo), std::abs(p_hi)) + 2));
  auto rho_b = quadrature::breakpoints(0.0, 1.0, 2, rho_extra);
  auto theta_b = quadrature::breakpoints(0.0, 2.0 * std::numbers::pi, sectors, theta_extra);
  auto integrand = [&](double r, double t, std::span<complex> out) {
    const complex z = std::polar(r, t);
    const complex w = weight(z);
    // z^p * r (polar Jacobian), built from r^(p+1) e^{ipt}.
    complex e = std::polar(std::pow(r, p_lo + 1), p_lo * t);
    const complex step = z;
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = w * e;
      e *= step;
    }
  };
  quadrature::CubatureOptions co;
  co.abs_tol = opt.tolerance * std::numbers::pi;
  co.max_cells = opt.max_cells;
  const auto res = quadrature::adaptive_rectangles(integrand, dims, rho_b, theta_b, co);
  std::vector<complex> c(res.value);
  for (auto& x : c) x /= std::numbers::pi;
  return c;
}

inline std::vector<complex> grid_moments(const GridSampleMu& g, double scale, int p_lo, int p_hi) {
  std::vector<complex> c(static_cast<std::size_t>(p_hi - p_lo + 1), complex{});
  const double wt = 2.0 * std::numbers::pi / static_cast<double>(g.n_theta);
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    const double r = g.radii[i];
    for (std::size_t j = 0; j < g.n_theta; ++j) {
      const double t = wt * static_cast<double>(j);
      const complex v = g.values[i * g.n_theta + j] * scale;
      const double w = g.radial_weights[i] * wt * r;
      for (int p = p_lo; p <= p_hi; ++p)
        c[static_cast<std::size_t>(p - p_lo)] += w * v * std::polar(std::pow(r, p), p * t);
    }
  }
  for (auto& x : c) x /= std::numbers::pi;
  return c;
}

inline std::vector<complex> moments_impl(const BeltramiSpec& mu, int p_lo, int p_hi, bool normalized,
                                         const QuadratureOptions& opt) {
  require(mu.support().is_unit_disk(), "disk moments: coefficient must be supported on the unit disk");
  require(p_lo <= p_hi && p_lo >= -1, "disk moments: invalid moment range");
  const double norm = mu.sup_norm();
  if (normalized) require(norm > 0.0, "disk moments: mu vanishes identically, mu* undefined");
  const double scale = normalized ? 1.0 / norm : 1.0;
  return std::visit(
      [&](const auto& m) -> std::vector<complex> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GridSampleMu>) {
          return grid_moments(m, scale, p_lo, p_hi);
        } else {
          std::vector<complex> splits;
          if constexpr (std::is_same_v<T, TeichmullerMu>) splits = m.psi.critical_points();
          return polar_moments([&](complex z) { return scale * mu(z); }, p_lo, p_hi, splits, opt);
        }
      },
      mu.variant());
}

} // namespace detail

/// c_p = (1/pi) iint_{|z|<1} mu*(z) z^p dx dy, p = 0..P, with mu* = mu / ||mu||_inf.
inline MomentVector disk_moments(const BeltramiSpec& mu, std::size_t p_max, const QuadratureOptions& opt = {}) {
  return MomentVector{detail::moments_impl(mu, 0, static_cast<int>(p_max), true, opt), 0, moment_basis::monomial};
}

/// Same integrals with mu itself (no normalization), p = p_lo..p_hi, p_lo >= -1.
inline MomentVector raw_disk_moments(const BeltramiSpec& mu, int p_lo, int p_hi, const QuadratureOptions& opt = {}) {
  return MomentVector{detail::moments_impl(mu, p_lo, p_hi, false, opt), p_lo, moment_basis::monomial};
}

/// B_mn = sqrt(mn) c_{m+n-2}, 1 <= m, n <= N.
inline SymmetricForm hankel_form(const MomentVector& c, std::size_t n) {
  detail::require(c.first <= 0 && c.last() >= static_cast<int>(2 * n) - 2, "hankel_form: not enough moments");
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd b(nn, nn);
  for (Eigen::Index m = 0; m < nn; ++m)
    for (Eigen::Index j = 0; j < nn; ++j)
      b(m, j) = std::sqrt(static_cast<double>((m + 1) * (j + 1))) * c[static_cast<int>(m + j)];
  return SymmetricForm(std::move(b), "alpha-Hankel");
}

inline constexpr std::size_t default_alpha_order = 16;

/// alpha(mu): supremum over the truncated sphere of |(1/pi) iint mu* sum sqrt(mn) x_m x_n z^{m+n-2}|,
/// a certified lower bound for the full supremum.
inline NormEstimate alpha_functional(const BeltramiSpec& mu, std::size_t n = default_alpha_order,
                                     const QuadratureOptions& opt = {}) {
  detail::require(n >= 1, "alpha_functional: order must be at least 1");
  const MomentVector c = disk_moments(mu, 2 * n - 2, opt);
  NormEstimate est = form_norm(hankel_form(c, n));
  // alpha is a normalized pairing; quadrature noise may push it past 1 by ~tol.
  if (est.value > 1.0) {
    if (est.value > 1.0 + 1e3 * opt.tolerance)
      throw numerical_error("alpha_functional: value exceeds 1 beyond quadrature tolerance");
    est.value = 1.0;
    for (auto& h : est.history) h.second = std::min(h.second, 1.0);
  }
  return est;
}

/// k (k + alpha) / (1 + alpha k).
inline double strengthened_bound(double k, double alpha) {
  detail::require(std::isfinite(k) && k >= 0.0 && k < 1.0, "strengthened_bound: k must lie in [0, 1)");
  detail::require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0, "strengthened_bound: alpha must lie in [0, 1]");
  return k * (k + alpha) / (1.0 + alpha * k);
}

struct BoundReport {
  double kappa = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  double lower = 0.0;  // alpha k
  double upper = 0.0;  // k (k + alpha) / (1 + alpha k)
  double eps = 0.0;
  bool lower_applicable = false;
  bool lower_ok = true;
  bool upper_ok = true;
  bool ok() const { return lower_ok && upper_ok; }
};

/// Checks alpha k - eps <= kappa_N(f) <= k (k + alpha)/(1 + alpha k) + eps for a
/// declared extension mu of f.  Violations are reported, not thrown.
inline BoundReport bound_check(const LaurentFunction& f, const BeltramiSpec& mu, std::size_t n, double eps,
                               const QuadratureOptions& opt = {}) {
  detail::require(eps >= 0.0, "bound_check: eps must be nonnegative");
  BoundReport r;
  r.eps = eps;
  r.kappa = grunsky_norm(f.with_order(std::max(n, f.order())), n);
  r.k = mu.sup_norm();
  detail::require(r.k < 1.0, "bound_check: ||mu||_inf must be < 1");
  r.alpha = r.k > 0.0 ? alpha_functional(mu, n, opt).value : 0.0;
  r.upper = strengthened_bound(r.k, r.alpha);
  r.lower = r.alpha * r.k;
  r.lower_applicable = mu.is_teichmuller_type() || r.k == 0.0;
  r.upper_ok = r.kappa <= r.upper + eps;
  r.lower_ok = !r.lower_applicable || r.kappa >= r.lower - eps;
  return r;
}

/// First-order map f(z) = z + b_0 + sum b_n z^{-n} with
/// b_n = (1/pi) iint mu(w) w^{n-1}, b_0 = (1/pi) iint mu(w) / w; error O(||mu||^2).
inline LaurentFunction variational_map(const BeltramiSpec& mu, std::size_t n, const QuadratureOptions& opt = {}) {
  detail::require(n >= 1, "variational_map: order must be at least 1");
  const MomentVector c = raw_disk_moments(mu, -1, static_cast<int>(n) - 1, opt);
  std::vector<complex> b(n + 1);
  for (std::size_t k = 0; k <= n; ++k) b[k] = c[static_cast<int>(k) - 1];
  return LaurentFunction(1.0, std::move(b), n);
}

struct MoserReport {
  double k = 0.0;
  complex c;
  double alpha = 0.0;
  double bound = 0.0;
  bool strict = false;  // bound < k
};

/// psi_c = psi + c/z, mu_c = k |psi_c|/psi_c, with alpha(mu_c) and the resulting Grunsky bound.
inline std::pair<BeltramiSpec, MoserReport> moser_approximant(const RationalFunction& psi, double k, complex c,
                                                              std::size_t n = default_alpha_order,
                                                              const QuadratureOptions& opt = {}) {
  detail::require(c != complex{}, "moser_approximant: c must be nonzero");
  BeltramiSpec mu = BeltramiSpec::teichmuller(k, psi.plus_pole_at_origin(c));
  MoserReport r;
  r.k = k;
  r.c = c;
  r.alpha = alpha_functional(mu, n, opt).value;
  r.bound = strengthened_bound(k, r.alpha);
  r.strict = r.bound < k;
  return {std::move(mu), r};
}

} // namespace grunsky

#endif // GRUNSKY_BELTRAMI_HPP
