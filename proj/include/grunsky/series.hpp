#ifndef GRUNSKY_SERIES_HPP
#define GRUNSKY_SERIES_HPP

// Truncated Taylor/Laurent series algebra and the bivariate logarithmic
// kernel that produces Grunsky coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grunsky/errors.hpp"

namespace grunsky {

using complex = std::complex<double>;

enum class expansion_point { zero, infinity };

/// Truncated power series a_0 + a_1 x + ... + a_M x^M.  When the series is
/// flagged as an expansion at infinity the variable is x = 1/z.
class TaylorSeries {
public:
  TaylorSeries() : coeffs_(1, complex{}) {}

  explicit TaylorSeries(std::size_t order, expansion_point at = expansion_point::zero)
      : coeffs_(order + 1, complex{}), at_(at) {}

  explicit TaylorSeries(std::vector<complex> coeffs, expansion_point at = expansion_point::zero)
      : coeffs_(std::move(coeffs)), at_(at) {
    if (coeffs_.empty()) coeffs_.push_back(complex{});
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  expansion_point at() const { return at_; }

  complex operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : complex{}; }
  complex& operator[](std::size_t i) { return coeffs_.at(i); }

  std::span<const complex> coefficients() const { return coeffs_; }

  /// Evaluates the truncated sum at z (at x = 1/z for expansions at infinity).
  complex operator()(complex z) const {
    const complex x = at_ == expansion_point::infinity ? 1.0 / z : z;
    complex acc{};
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  TaylorSeries truncated(std::size_t order) const {
    std::vector<complex> c(order + 1, complex{});
    for (std::size_t i = 0; i <= std::min(order, this->order()); ++i) c[i] = coeffs_[i];
    return TaylorSeries(std::move(c), at_);
  }

  TaylorSeries& operator+=(const TaylorSeries& o) {
    coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  TaylorSeries& operator-=(const TaylorSeries& o) {
    coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  TaylorSeries& operator*=(complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator*(TaylorSeries a, complex s) { return a *= s; }
  friend TaylorSeries operator*(complex s, TaylorSeries a) { return a *= s; }

  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
    const std::size_t m = std::min(a.order(), b.order());
    std::vector<complex> c(m + 1, complex{});
    for (std::size_t i = 0; i <= m; ++i) {
      if (a.coeffs_[i] == complex{}) continue;
      for (std::size_t j = 0; i + j <= m; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return TaylorSeries(std::move(c), a.at_);
  }

private:
  std::vector<complex> coeffs_;
  expansion_point at_ = expansion_point::zero;
};

/// 1/s; requires s[0] != 0.
inline TaylorSeries inverse(const TaylorSeries& s) {
  detail::require(s[0] != complex{}, "series inverse: zero constant term");
  const std::size_t m = s.order();
  TaylorSeries r(m, s.at());
  r[0] = 1.0 / s[0];
  for (std::size_t n = 1; n <= m; ++n) {
    complex acc{};
    for (std::size_t k = 1; k <= n; ++k) acc += s[k] * r[n - k];
    r[n] = -acc * r[0];
  }
  return r;
}

inline TaylorSeries derivative(const TaylorSeries& s) {
  const std::size_t m = s.order();
  TaylorSeries r(m == 0 ? 0 : m - 1, s.at());
  for (std::size_t k = 1; k <= m; ++k) r[k - 1] = static_cast<double>(k) * s[k];
  return r;
}

/// s^p for real p, principal branch of s[0]^p.  Miller's recurrence.
inline TaylorSeries pow(const TaylorSeries& s, double p) {
  detail::require(s[0] != complex{}, "series pow: zero constant term");
  const std::size_t m = s.order();
  TaylorSeries r(m, s.at());
  r[0] = std::pow(s[0], p);
  for (std::size_t n = 1; n <= m; ++n) {
    complex acc{};
    for (std::size_t k = 1; k <= n; ++k)
      acc += ((p + 1.0) * static_cast<double>(k) - static_cast<double>(n)) * s[k] * r[n - k];
    r[n] = acc / (static_cast<double>(n) * s[0]);
  }
  return r;
}

inline TaylorSeries sqrt(const TaylorSeries& s) { return pow(s, 0.5); }

/// Principal logarithm; requires s[0] != 0.
inline TaylorSeries log(const TaylorSeries& s) {
  detail::require(s[0] != complex{}, "series log: zero constant term");
  const TaylorSeries q = derivative(s) * inverse(s.truncated(s.order() == 0 ? 0 : s.order() - 1));
  TaylorSeries r(s.order(), s.at());
  r[0] = std::log(s[0]);
  for (std::size_t k = 1; k <= s.order(); ++k) r[k] = q[k - 1] / static_cast<double>(k);
  return r;
}

inline TaylorSeries exp(const TaylorSeries& s) {
  const std::size_t m = s.order();
  TaylorSeries r(m, s.at());
  r[0] = std::exp(s[0]);
  for (std::size_t n = 1; n <= m; ++n) {
    complex acc{};
    for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * s[k] * r[n - k];
    r[n] = acc / static_cast<double>(n);
  }
  return r;
}

/// outer(inner(x)); inner must have no constant term.
inline TaylorSeries compose(const TaylorSeries& outer, const TaylorSeries& inner) {
  detail::require(inner[0] == complex{}, "series compose: inner series has a constant term");
  const std::size_t m = std::min(outer.order(), inner.order());
  const TaylorSeries in = inner.truncated(m);
  TaylorSeries r(m, inner.at());
  for (std::size_t k = outer.order() + 1; k-- > 0;) {
    r = r * in;
    r[0] += outer[k];
  }
  return r;
}

/// Normalized expansion near infinity,
///   f(z) = c z + b_0 + b_1 z^{-1} + ... + b_N z^{-N},   c > 0,
/// with every coefficient beyond the declared order N exactly zero.
class LaurentFunction {
public:
  LaurentFunction() : LaurentFunction(1.0, {complex{}}, 1) {}

  /// b holds b_0..b_K; the declared order defaults to max(1, K) and may exceed K
  /// (missing coefficients are zero) but not be smaller.
  LaurentFunction(double leading, std::vector<complex> b, std::optional<std::size_t> order = std::nullopt)
      : leading_(leading), b_(std::move(b)) {
    detail::require(std::isfinite(leading_) && leading_ > 0.0,
                    "LaurentFunction: leading coefficient must be positive");
    if (b_.empty()) b_.push_back(complex{});
    const std::size_t natural = std::max<std::size_t>(1, b_.size() - 1);
    const std::size_t n = order.value_or(natural);
    detail::require(n >= 1, "LaurentFunction: order must be at least 1");
    if (b_.size() > n + 1) {
      for (std::size_t i = n + 1; i < b_.size(); ++i)
        detail::require(b_[i] == complex{}, "LaurentFunction: nonzero coefficient beyond declared order");
    }
    b_.resize(n + 1, complex{});
    for (const auto& c : b_)
      detail::require(std::isfinite(c.real()) && std::isfinite(c.imag()),
                      "LaurentFunction: non-finite coefficient");
  }

  static LaurentFunction identity(std::size_t order = 1) { return LaurentFunction(1.0, {}, order); }

  double leading() const { return leading_; }
  std::size_t order() const { return b_.size() - 1; }
  complex b(std::size_t n) const { return n < b_.size() ? b_[n] : complex{}; }
  std::span<const complex> coefficients() const { return b_; }

  bool is_identity() const {
    return leading_ == 1.0 && std::all_of(b_.begin(), b_.end(), [](complex c) { return c == complex{}; });
  }

  /// Same function with a different declared order (zero-padding or dropping
  /// trailing coefficients).
  LaurentFunction with_order(std::size_t n) const {
    std::vector<complex> b(b_.begin(), b_.begin() + static_cast<std::ptrdiff_t>(std::min(n, order()) + 1));
    return LaurentFunction(leading_, std::move(b), n);
  }

  LaurentFunction translated(complex shift) const {
    auto b = b_;
    b[0] += shift;
    return LaurentFunction(leading_, std::move(b), order());
  }

  complex operator()(complex z) const {
    const complex w = 1.0 / z;
    complex acc{};
    for (std::size_t n = order(); n >= 1; --n) acc = (acc + b_[n]) * w;
    return leading_ * z + b_[0] + acc;
  }

  /// k-th derivative in z, k = 1, 2, 3.
  complex derivative(complex z, int k) const {
    const complex w = 1.0 / z;
    complex acc{};
    for (std::size_t n = order(); n >= 1; --n) {
      const double dn = static_cast<double>(n);
      double f = 0.0;
      switch (k) {
        case 1: f = -dn; break;
        case 2: f = dn * (dn + 1.0); break;
        case 3: f = -dn * (dn + 1.0) * (dn + 2.0); break;
        default: throw validation_error("LaurentFunction::derivative: k must be 1, 2 or 3");
      }
      acc += f * b_[n] * std::pow(w, static_cast<int>(n) + k);
    }
    return k == 1 ? leading_ + acc : acc;
  }

private:
  double leading_;
  std::vector<complex> b_;
};

enum class kernel_kind { classical, generalized };

/// Symmetric N x N matrix of expansion coefficients of -log((f(z)-f(zeta))/(z-zeta)),
/// the coefficient of z^{-m} zeta^{-n} (or chi(z)^{-m} chi(zeta)^{-n}) at (m, n).
/// Symmetry is imposed on construction by mirroring the upper triangle.
class KernelMatrix {
public:
  KernelMatrix() = default;

  KernelMatrix(Eigen::MatrixXcd entries, kernel_kind kind) : entries_(std::move(entries)), kind_(kind) {
    detail::require(entries_.rows() == entries_.cols(), "KernelMatrix: matrix must be square");
    for (Eigen::Index m = 0; m < entries_.rows(); ++m)
      for (Eigen::Index n = 0; n < m; ++n) entries_(m, n) = entries_(n, m);
  }

  std::size_t order() const { return static_cast<std::size_t>(entries_.rows()); }
  kernel_kind kind() const { return kind_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  /// 1-based access matching the usual (m, n) indexing.
  complex operator()(std::size_t m, std::size_t n) const {
    return entries_(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(n - 1));
  }

private:
  Eigen::MatrixXcd entries_;
  kernel_kind kind_ = kernel_kind::classical;
};

namespace detail {

// Dense coefficient box c(p, q) for 0 <= p, q <= N of a bivariate series in
// (1/z, 1/zeta), truncated independently in each variable.
class BivariateBox {
public:
  explicit BivariateBox(std::size_t n) : n_(n), c_((n + 1) * (n + 1), complex{}) {}

  complex& operator()(std::size_t p, std::size_t q) { return c_[p * (n_ + 1) + q]; }
  complex operator()(std::size_t p, std::size_t q) const { return c_[p * (n_ + 1) + q]; }
  std::size_t size() const { return n_; }

  // Product of two series whose nonzero terms have p, q >= 1 and p >= lo_a, p >= lo_b.
  static BivariateBox product(const BivariateBox& a, std::size_t lo_a, const BivariateBox& b, std::size_t lo_b) {
    const std::size_t n = a.n_;
    BivariateBox r(n);
    for (std::size_t i = lo_a; i <= n; ++i)
      for (std::size_t j = lo_a; j <= n; ++j) {
        const complex x = a(i, j);
        if (x == complex{}) continue;
        for (std::size_t k = lo_b; i + k <= n; ++k)
          for (std::size_t l = lo_b; j + l <= n; ++l) r(i + k, j + l) += x * b(k, l);
      }
    return r;
  }

private:
  std::size_t n_;
  std::vector<complex> c_;
};

} // namespace detail

/// Grunsky coefficients alpha_mn, 1 <= m, n <= N, of f: the coefficients of
/// z^{-m} zeta^{-n} in -log((f(z)-f(zeta))/(z-zeta)), the constant log c dropped.
///
/// The difference quotient equals c (1 + T) with
///   T(u, v) = -(1/c) sum_k b_k sum_{p+q=k+1, p,q>=1} u^p v^q,   u = 1/z, v = 1/zeta,
/// and -log(1 + T) is summed as a truncated logarithm series.  Since every term
/// of T has p, q >= 1, T^j only reaches the box when j <= N.
inline KernelMatrix series_log_ratio(const LaurentFunction& f, std::size_t n) {
  detail::require(n >= 1, "series_log_ratio: order must be at least 1");
  detail::require(n <= f.order(), "series_log_ratio: requested order " + std::to_string(n) +
                                      " exceeds the function's declared order " + std::to_string(f.order()));
  const double c = f.leading();
  detail::BivariateBox t(n);
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q) t(p, q) = -f.b(p + q - 1) / c;

  detail::BivariateBox logsum = t;
  detail::BivariateBox power = t;
  for (std::size_t j = 2; j <= n; ++j) {
    power = detail::BivariateBox::product(power, j - 1, t, 1);
    const double w = (j % 2 == 0 ? -1.0 : 1.0) / static_cast<double>(j);
    for (std::size_t p = j; p <= n; ++p)
      for (std::size_t q = j; q <= n; ++q) logsum(p, q) += w * power(p, q);
  }

  Eigen::MatrixXcd alpha(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q)
      alpha(static_cast<Eigen::Index>(p - 1), static_cast<Eigen::Index>(q - 1)) = -logsum(p, q);
  return KernelMatrix(std::move(alpha), kernel_kind::classical);
}

/// Independent check of series_log_ratio: samples -log((f(z)-f(zeta))/(z-zeta)) on
/// |z| = r1, |zeta| = r2 at S equispaced angles, tracks the logarithm's branch by
/// continuity from angle 0, and recovers alpha_mn by a 2D DFT rescaled by r1^m r2^n.
inline KernelMatrix kernel_oracle_sampling(const LaurentFunction& f, std::size_t n, double r1 = 3.0,
                                           double r2 = 3.0, std::size_t samples = 0) {
  if (samples == 0) samples = 8 * n;
  detail::require(n >= 1, "kernel_oracle_sampling: order must be at least 1");
  detail::require(r1 > 1.0 && r2 > 1.0, "kernel_oracle_sampling: radii must exceed 1");
  detail::require(samples >= 4 * n, "kernel_oracle_sampling: need at least 4N samples per circle");
  const std::size_t s = samples;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<complex> zs(s), ws(s), fz(s), fw(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double th = two_pi * static_cast<double>(j) / static_cast<double>(s);
    zs[j] = std::polar(r1, th);
    ws[j] = std::polar(r2, th);
    fz[j] = f(zs[j]);
    fw[j] = f(ws[j]);
  }

  auto quotient = [&](std::size_t j, std::size_t l) {
    const complex dz = zs[j] - ws[l];
    if (std::abs(dz) <= 1e-12 * std::abs(zs[j])) return f.derivative(zs[j], 1);
    return (fz[j] - fw[l]) / dz;
  };

  std::vector<complex> logs(s * s);
  auto at = [&](std::size_t j, std::size_t l) -> complex& { return logs[j * s + l]; };
  auto unwrap = [&](complex value, complex ref) {
    double im = value.imag();
    const double k = std::round((ref.imag() - im) / two_pi);
    im += k * two_pi;
    return complex(value.real(), im);
  };

  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t l = 0; l < s; ++l) {
      const complex q = quotient(j, l);
      if (std::abs(q) < 1e-300 || !std::isfinite(q.real()) || !std::isfinite(q.imag()))
        throw numerical_error("kernel_oracle_sampling: difference quotient vanishes on the sampling grid");
      at(j, l) = -std::log(q);
    }
  for (std::size_t j = 1; j < s; ++j) at(j, 0) = unwrap(at(j, 0), at(j - 1, 0));
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t l = 1; l < s; ++l) at(j, l) = unwrap(at(j, l), at(j, l - 1));

  // Closing the loops must not change the branch.
  for (std::size_t j = 0; j < s; ++j)
    if (std::abs(unwrap(at(j, 0), at(j, s - 1)).imag() - at(j, 0).imag()) > 1e-9)
      throw numerical_error("kernel_oracle_sampling: logarithm winds along the sampling circle (radii too small)");
  for (std::size_t l = 0; l < s; ++l)
    if (std::abs(unwrap(at(0, l), at(s - 1, l)).imag() - at(0, l).imag()) > 1e-9)
      throw numerical_error("kernel_oracle_sampling: logarithm winds along the sampling circle (radii too small)");

  // Separable DFT: first over zeta's angle, then over z's angle.
  std::vector<complex> partial(s * n);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t q = 1; q <= n; ++q) {
      complex acc{};
      for (std::size_t l = 0; l < s; ++l)
        acc += at(j, l) * std::polar(1.0, two_pi * static_cast<double>((l * q) % s) / static_cast<double>(s));
      partial[j * n + (q - 1)] = acc;
    }
  Eigen::MatrixXcd alpha(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double norm = 1.0 / static_cast<double>(s * s);
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t q = 1; q <= n; ++q) {
      complex acc{};
      for (std::size_t j = 0; j < s; ++j)
        acc += partial[j * n + (q - 1)] *
               std::polar(1.0, two_pi * static_cast<double>((j * p) % s) / static_cast<double>(s));
      alpha(static_cast<Eigen::Index>(p - 1), static_cast<Eigen::Index>(q - 1)) =
          acc * norm * std::pow(r1, static_cast<double>(p)) * std::pow(r2, static_cast<double>(q));
    }
  const Eigen::MatrixXcd sym = 0.5 * (alpha + alpha.transpose());
  return KernelMatrix(sym, kernel_kind::classical);
}

/// Expansion of f(g(z)) about infinity to order N.
inline LaurentFunction compose_at_infinity(const LaurentFunction& f, const LaurentFunction& g, std::size_t n) {
  detail::require(n >= 1, "compose_at_infinity: order must be at least 1");
  if (n > f.order() || n > g.order())
    throw numerical_error("compose_at_infinity: order underflow (requested " + std::to_string(n) +
                          ", inputs carry " + std::to_string(std::min(f.order(), g.order())) + ")");
  const double cg = g.leading();
  // g(z) = cg z (1 + h(v)), v = 1/z.
  TaylorSeries h(n, expansion_point::infinity);
  for (std::size_t k = 0; k + 1 <= n; ++k) h[k + 1] = g.b(k) / cg;
  TaylorSeries one_plus_h = h;
  one_plus_h[0] = 1.0;
  // s = 1/g(z) = v (1 + h)^{-1} / cg
  const TaylorSeries inv = inverse(one_plus_h);
  TaylorSeries s(n, expansion_point::infinity);
  for (std::size_t k = 0; k + 1 <= n; ++k) s[k + 1] = inv[k] / cg;

  std::vector<complex> out(n + 1, complex{});
  for (std::size_t k = 0; k <= n; ++k) out[k] = f.leading() * g.b(k);
  out[0] += f.b(0);
  TaylorSeries power = s;
  for (std::size_t k = 1; k <= n; ++k) {
    const complex fk = f.b(k);
    if (fk != complex{})
      for (std::size_t i = k; i <= n; ++i) out[i] += fk * power[i];
    if (k < n) power = power * s;
  }
  return LaurentFunction(f.leading() * cg, std::move(out), n);
}

/// Inverse map h with g(h(u)) = u near infinity, to order N.
inline LaurentFunction invert_at_infinity(const LaurentFunction& g, std::size_t n) {
  detail::require(n >= 1, "invert_at_infinity: order must be at least 1");
  if (n > g.order()) throw numerical_error("invert_at_infinity: order underflow");
  const double c = g.leading();
  std::vector<complex> d(n + 1, complex{});
  d[0] = -g.b(0) / c;
  LaurentFunction h(1.0 / c, d, n);
  // Each pass fixes at least two more coefficients: g'(h)/c - 1 = O(u^-2).
  for (std::size_t it = 0; it < n / 2 + 2; ++it) {
    const LaurentFunction gh = compose_at_infinity(g, h, n);
    std::vector<complex> next(h.coefficients().begin(), h.coefficients().end());
    for (std::size_t k = 0; k <= n; ++k) next[k] -= gh.b(k) / c;
    h = LaurentFunction(1.0 / c, std::move(next), n);
  }
  return h;
}

} // namespace grunsky

#endif // GRUNSKY_SERIES_HPP
