#ifndef GRUNSKY_GRUNSKY_OPERATOR_HPP
#define GRUNSKY_GRUNSKY_OPERATOR_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "grunsky/errors.hpp"
#include "grunsky/series.hpp"

namespace grunsky {

/// Complex symmetric matrix B viewed as the quadratic form x -> sum B_mn x_m x_n.
class SymmetricForm {
public:
  SymmetricForm() = default;

  SymmetricForm(Eigen::MatrixXcd b, std::string label) : b_(std::move(b)), label_(std::move(label)) {
    detail::require(b_.rows() == b_.cols(), "SymmetricForm: matrix must be square");
    for (Eigen::Index m = 0; m < b_.rows(); ++m)
      for (Eigen::Index n = 0; n < b_.cols(); ++n) {
        const complex v = b_(m, n);
        detail::require(std::isfinite(v.real()) && std::isfinite(v.imag()), "SymmetricForm: non-finite entry");
      }
    for (Eigen::Index m = 0; m < b_.rows(); ++m)
      for (Eigen::Index n = 0; n < m; ++n) b_(m, n) = b_(n, m);
  }

  std::size_t order() const { return static_cast<std::size_t>(b_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return b_; }
  const std::string& label() const { return label_; }

  /// Form restricted to the first k coordinates.
  SymmetricForm leading(std::size_t k) const {
    const auto kk = static_cast<Eigen::Index>(k);
    return SymmetricForm(b_.topLeftCorner(kk, kk), label_);
  }

  SymmetricForm scaled(complex c) const { return SymmetricForm(c * b_, label_); }

private:
  Eigen::MatrixXcd b_;
  std::string label_;
};

/// Truncated supremum with its history over nested truncations.  The history
/// values are nondecreasing lower bounds; value is the last one.
struct NormEstimate {
  double value = 0.0;
  std::size_t order = 0;
  std::vector<std::pair<std::size_t, double>> history;
  bool converged = false;
  double tolerance = 1e-10;
  std::optional<std::size_t> converged_at;
};

inline constexpr double default_norm_tolerance = 1e-10;
inline constexpr std::size_t dense_svd_limit = 64;

/// sqrt(mn) * entries: the form whose supremum is the (generalized) Grunsky norm.
inline SymmetricForm build_form(const KernelMatrix& k) {
  const auto n = static_cast<Eigen::Index>(k.order());
  Eigen::MatrixXcd b(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index j = 0; j < n; ++j)
      b(m, j) = std::sqrt(static_cast<double>((m + 1) * (j + 1))) * k.entries()(m, j);
  return SymmetricForm(std::move(b), k.kind() == kernel_kind::classical ? "Grunsky" : "generalized Grunsky");
}

namespace detail {

inline double largest_singular_value_power(const Eigen::MatrixXcd& b, std::size_t max_iter = 20000) {
  const Eigen::Index n = b.rows();
  if (n == 0 || b.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  // Deterministic start with all components active.
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex(1.0, 0.5 / static_cast<double>(i + 1));
  v.normalize();
  double sigma = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = b.adjoint() * (b * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = std::sqrt(nw);
    if (it > 10 && std::abs(next - sigma) <= 1e-15 * next) return next;
    sigma = next;
    v = std::move(w);
  }
  throw numerical_error("form_norm: power iteration did not converge within the iteration cap");
}

inline double largest_singular_value(const Eigen::MatrixXcd& b) {
  if (b.rows() == 0) return 0.0;
  if (static_cast<std::size_t>(b.rows()) <= dense_svd_limit) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
    if (svd.info() != Eigen::Success) throw numerical_error("form_norm: dense SVD failed");
    return svd.singularValues()(0);
  }
  return largest_singular_value_power(b);
}

// converged: the last two history values agree within tolerance.
// converged_at: first order from which every later value stays within tolerance.
inline void mark_convergence(NormEstimate& est) {
  const auto& h = est.history;
  est.converged = h.size() >= 2 && std::abs(h.back().second - h[h.size() - 2].second) < est.tolerance;
  est.converged_at.reset();
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    bool stable = true;
    for (std::size_t j = i + 1; j < h.size(); ++j)
      if (std::abs(h[j].second - h[i].second) >= est.tolerance) stable = false;
    if (stable) {
      est.converged_at = h[i].first;
      break;
    }
  }
}

} // namespace detail

/// sup |x^T B x| over complex unit vectors, i.e. the largest singular value of
/// the complex symmetric B (Takagi).  History covers every leading submatrix.
inline NormEstimate form_norm(const SymmetricForm& f, double tolerance = default_norm_tolerance) {
  NormEstimate est;
  est.tolerance = tolerance;
  est.order = f.order();
  double running = 0.0;
  for (std::size_t k = 1; k <= f.order(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double s = detail::largest_singular_value(f.matrix().topLeftCorner(kk, kk));
    // Interlacing makes the sequence nondecreasing; absorb rounding-level dips.
    running = std::max(running, s);
    est.history.emplace_back(k, running);
  }
  est.value = running;
  detail::mark_convergence(est);
  return est;
}

/// Unit vector x attaining |x^T B x| = sigma_max (a Takagi vector), phase fixed so
/// the first nonzero entry is positive real.
inline Eigen::VectorXcd form_maximizer(const SymmetricForm& f) {
  const auto& b = f.matrix();
  const Eigen::Index n = b.rows();
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  if (n == 0) return x;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma = svd.singularValues()(0);
  if (sigma == 0.0) {
    x(0) = 1.0;
    return x;
  }
  const Eigen::VectorXcd u = svd.matrixU().col(0);
  const Eigen::VectorXcd v = svd.matrixV().col(0);
  // w = u + conj(v) satisfies B conj(w) = sigma w; fall back to i(u - conj(v)).
  Eigen::VectorXcd w = u + v.conjugate();
  if (w.norm() < 1e-8) w = complex(0.0, 1.0) * (u - v.conjugate());
  x = w.conjugate().normalized();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(x(i)) > 1e-14) {
      x *= std::polar(1.0, -std::arg(x(i)));
      break;
    }
  return x;
}

/// sum B_mn x_m x_n.
inline complex form_eval(const SymmetricForm& f, const Eigen::VectorXcd& x) {
  detail::require(static_cast<std::size_t>(x.size()) == f.order(), "form_eval: dimension mismatch");
  detail::require(x.norm() <= 1.0 + 1e-12, "form_eval: argument must lie in the closed unit ball");
  return (x.transpose() * f.matrix() * x)(0, 0);
}

/// sum_{m=j..M} sum_{n=l..N} B_mn x_m x_n with 1-based inclusive windows.
inline complex form_partial_sum(const SymmetricForm& f, const Eigen::VectorXcd& x, std::size_t j, std::size_t m_hi,
                                std::size_t l, std::size_t n_hi) {
  detail::require(static_cast<std::size_t>(x.size()) == f.order(), "form_partial_sum: dimension mismatch");
  detail::require(1 <= j && j <= m_hi && m_hi <= f.order() && 1 <= l && l <= n_hi && n_hi <= f.order(),
                  "form_partial_sum: invalid index window");
  complex acc{};
  for (std::size_t m = j; m <= m_hi; ++m)
    for (std::size_t n = l; n <= n_hi; ++n)
      acc += f.matrix()(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(n - 1)) *
             x(static_cast<Eigen::Index>(m - 1)) * x(static_cast<Eigen::Index>(n - 1));
  return acc;
}

/// kappa_N(f) for each requested order.
inline NormEstimate norm_convergence(const LaurentFunction& f, const std::vector<std::size_t>& orders,
                                     double tolerance = default_norm_tolerance) {
  detail::require(!orders.empty(), "norm_convergence: no orders requested");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    detail::require(orders[i] >= 1, "norm_convergence: orders must be positive");
    if (i > 0) detail::require(orders[i] > orders[i - 1], "norm_convergence: orders must be increasing");
  }
  const std::size_t top = orders.back();
  detail::require(top <= f.order(), "norm_convergence: order exceeds the function's declared order");
  const SymmetricForm full = build_form(series_log_ratio(f, top));

  NormEstimate est;
  est.tolerance = tolerance;
  est.order = top;
  double running = 0.0;
  for (std::size_t k : orders) {
    const auto kk = static_cast<Eigen::Index>(k);
    running = std::max(running, detail::largest_singular_value(full.matrix().topLeftCorner(kk, kk)));
    est.history.emplace_back(k, running);
  }
  est.value = running;
  detail::mark_convergence(est);
  return est;
}

/// kappa_N(f) at a single order.
inline double grunsky_norm(const LaurentFunction& f, std::size_t n) {
  return detail::largest_singular_value(build_form(series_log_ratio(f, n)).matrix());
}

} // namespace grunsky

#endif // GRUNSKY_GRUNSKY_OPERATOR_HPP
