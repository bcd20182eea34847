#ifndef GRUNSKY_DOMAIN_HPP
#define GRUNSKY_DOMAIN_HPP

// Descriptors of a quasidisk pair (D, D*): D bounded and containing 0, D* its
// exterior containing infinity, with the maps used for coefficient expansions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "grunsky/errors.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

struct UnitDisk {};

/// Interior of the ellipse with foci +-1 and semiaxes a > b > 0, a^2 - b^2 = 1.
struct EllipseInterior {
  double a;
  double b;
};

/// Interior of the Cassini curve |z^2 - 1| = c, c > 1.
struct CassiniInterior {
  double c;
};

/// D = g(unit disk) with g(0) = 0, g'(0) > 0; D* = chi_inv(|u| > 1).
struct ConformalImage {
  TaylorSeries g;
  LaurentFunction chi_inv;
};

class DomainSpec {
public:
  using variant_type = std::variant<UnitDisk, EllipseInterior, CassiniInterior, ConformalImage>;

  DomainSpec() : v_(UnitDisk{}) {}

  static DomainSpec unit_disk() { return DomainSpec(); }

  static DomainSpec ellipse(double a, double b) {
    detail::require(std::isfinite(a) && std::isfinite(b) && a > b && b > 0.0,
                    "ellipse: semiaxes must satisfy a > b > 0");
    detail::require(std::abs(a * a - b * b - 1.0) <= 1e-9, "ellipse: foci must be at +-1 (a^2 - b^2 = 1)");
    return DomainSpec(EllipseInterior{a, b});
  }

  /// Ellipse with foci +-1 and major semiaxis a > 1.
  static DomainSpec ellipse_from_major(double a) {
    detail::require(a > 1.0, "ellipse: major semiaxis must exceed 1");
    return ellipse(a, std::sqrt(a * a - 1.0));
  }

  static DomainSpec cassini(double c) {
    detail::require(std::isfinite(c) && c > 1.0, "cassini: parameter c must exceed 1");
    return DomainSpec(CassiniInterior{c});
  }

  static DomainSpec conformal_image(TaylorSeries g, LaurentFunction chi_inv) {
    detail::require(g.at() == expansion_point::zero, "conformal image: g must be an expansion at 0");
    detail::require(g.order() >= 1, "conformal image: g needs a linear term");
    detail::require(g[0] == complex{}, "conformal image: g(0) must be 0");
    detail::require(g[1].imag() == 0.0 && g[1].real() > 0.0, "conformal image: g'(0) must be positive");
    return DomainSpec(ConformalImage{std::move(g), std::move(chi_inv)});
  }

  const variant_type& variant() const { return v_; }
  bool is_unit_disk() const { return std::holds_alternative<UnitDisk>(v_); }

  std::string name() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) return "disk";
          else if constexpr (std::is_same_v<T, EllipseInterior>) return "ellipse";
          else if constexpr (std::is_same_v<T, CassiniInterior>) return "cassini";
          else return "conformal";
        },
        v_);
  }

  struct Point {
    complex z;
    double jacobian;  // dx dy = jacobian * drho dtheta
  };

  /// Parametrization of D by (rho, theta) in [0, 1] x [0, 2 pi); rho = 1 traces
  /// the boundary.
  Point parametrize(double rho, double theta) const {
    return std::visit(
        [&](const auto& d) -> Point {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) {
            return {std::polar(rho, theta), rho};
          } else if constexpr (std::is_same_v<T, EllipseInterior>) {
            return {complex(d.a * rho * std::cos(theta), d.b * rho * std::sin(theta)), d.a * d.b * rho};
          } else if constexpr (std::is_same_v<T, CassiniInterior>) {
            const double r = cassini_radius(d.c, theta);
            return {std::polar(rho * r, theta), rho * r * r};
          } else {
            const complex zeta = std::polar(rho, theta);
            const complex gp = derivative(d.g)(zeta);
            return {d.g(zeta), rho * std::norm(gp)};
          }
        },
        v_);
  }

  /// (rho, theta) of a point of D, when the parametrization is invertible in closed form.
  std::optional<std::pair<double, double>> parameters_of(complex z) const {
    auto wrap = [](double t) {
      double w = std::fmod(t, 2.0 * std::numbers::pi);
      return w < 0.0 ? w + 2.0 * std::numbers::pi : w;
    };
    return std::visit(
        [&](const auto& d) -> std::optional<std::pair<double, double>> {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) {
            return std::make_pair(std::abs(z), wrap(std::arg(z)));
          } else if constexpr (std::is_same_v<T, EllipseInterior>) {
            const double x = z.real() / d.a, y = z.imag() / d.b;
            return std::make_pair(std::hypot(x, y), wrap(std::atan2(y, x)));
          } else if constexpr (std::is_same_v<T, CassiniInterior>) {
            const double t = wrap(std::arg(z));
            return std::make_pair(std::abs(z) / cassini_radius(d.c, t), t);
          } else {
            return std::nullopt;
          }
        },
        v_);
  }

  /// Radius of a disk about 0 contained in D.
  double inradius() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) return 1.0;
          else if constexpr (std::is_same_v<T, EllipseInterior>) return d.b;
          else if constexpr (std::is_same_v<T, CassiniInterior>) return std::sqrt(d.c - 1.0);
          else return 0.25 * d.g[1].real();  // Koebe
        },
        v_);
  }

  /// Expansion of chi^{-1}: {|u| > 1} -> D* about infinity, to the given order.
  LaurentFunction chi_inv(std::size_t order) const {
    return std::visit(
        [&](const auto& d) -> LaurentFunction {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) {
            return LaurentFunction::identity(order);
          } else if constexpr (std::is_same_v<T, EllipseInterior>) {
            // Joukowski: chi_inv(u) = ((a+b) u + 1/((a+b) u)) / 2.
            const double s = d.a + d.b;
            return LaurentFunction(0.5 * s, {complex{}, complex(0.5 / s)}, std::max<std::size_t>(order, 1));
          } else if constexpr (std::is_same_v<T, CassiniInterior>) {
            return cassini_chi_inv(d.c, order);
          } else {
            return d.chi_inv.with_order(order);
          }
        },
        v_);
  }

  /// Exterior conformal map chi: D* -> {|u| > 1}, chi(inf) = inf, chi'(inf) > 0.
  complex chi(complex z) const {
    return std::visit(
        [&](const auto& d) -> complex {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, UnitDisk>) {
            return z;
          } else if constexpr (std::is_same_v<T, EllipseInterior>) {
            // z + sqrt(z^2 - 1) on the branch positive for z > 1
            return (z + z * std::sqrt(1.0 - 1.0 / (z * z))) / (d.a + d.b);
          } else if constexpr (std::is_same_v<T, CassiniInterior>) {
            return z / std::sqrt(d.c) * std::sqrt(1.0 - 1.0 / (z * z));
          } else {
            const LaurentFunction inv = invert_at_infinity(d.chi_inv, d.chi_inv.order());
            return inv(z);
          }
        },
        v_);
  }

  static double cassini_radius(double c, double theta) {
    const double c2 = std::cos(2.0 * theta);
    return std::sqrt(c2 + std::sqrt(c2 * c2 + c * c - 1.0));
  }

  /// chi_inv(u) = sqrt(1 + c u^2) = sqrt(c) u (1 + u^{-2}/c)^{1/2}.
  static LaurentFunction cassini_chi_inv(double c, std::size_t order) {
    TaylorSeries inner(order + 1, expansion_point::infinity);
    inner[0] = 1.0;
    if (order + 1 >= 2) inner[2] = 1.0 / c;
    const TaylorSeries root = sqrt(inner);
    std::vector<complex> b(order + 1);
    for (std::size_t k = 0; k <= order; ++k) b[k] = std::sqrt(c) * root[k + 1];
    return LaurentFunction(std::sqrt(c), std::move(b), order);
  }

  /// g(z) = z sqrt((c^2 - 1)/(c - z^2)) expanded at 0 to degree M.
  static TaylorSeries cassini_g(double c, std::size_t degree) {
    TaylorSeries inner(degree, expansion_point::zero);
    inner[0] = 1.0;
    if (degree >= 2) inner[2] = -1.0 / c;
    const TaylorSeries p = pow(inner, -0.5);
    TaylorSeries g(degree, expansion_point::zero);
    const double lead = std::sqrt((c * c - 1.0) / c);
    for (std::size_t k = 1; k <= degree; ++k) g[k] = lead * p[k - 1];
    return g;
  }

private:
  explicit DomainSpec(variant_type v) : v_(std::move(v)) {}
  variant_type v_;
};

} // namespace grunsky

#endif // GRUNSKY_DOMAIN_HPP
