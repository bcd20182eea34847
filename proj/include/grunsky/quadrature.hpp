#ifndef GRUNSKY_QUADRATURE_HPP
#define GRUNSKY_QUADRATURE_HPP

// Gauss-Legendre rules and an adaptive tensor cubature on rectangles of the
// (rho, theta) parameter plane.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "grunsky/errors.hpp"

namespace grunsky::quadrature {

using complex = std::complex<double>;

struct GaussRule {
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(std::size_t n) {
  grunsky::detail::require(n >= 1, "gauss_legendre: need at least one node");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  // Legendre P_n and P_{n-1} at x by the three-term recurrence.
  auto legendre = [n](double x, double& pn, double& pn1) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                        static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    pn = p1;
    pn1 = p0;
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pn = 0.0, pn1 = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(x, pn, pn1);
      dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, pn, pn1);
    dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Product rule on [0, 1] x [0, 2 pi): Gauss-Legendre in rho, trapezoid in theta
/// (exact for trigonometric polynomials of degree < n_theta).
struct TensorRule {
  std::vector<double> rho;
  std::vector<double> rho_weights;
  std::size_t n_theta = 0;

  double theta(std::size_t j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_theta); }
  double theta_weight() const { return 2.0 * std::numbers::pi / static_cast<double>(n_theta); }
};

inline TensorRule tensor_rule(std::size_t n_rho, std::size_t n_theta) {
  const GaussRule g = gauss_legendre(n_rho);
  TensorRule t;
  t.n_theta = n_theta;
  for (std::size_t i = 0; i < n_rho; ++i) {
    t.rho.push_back(0.5 * (g.nodes[i] + 1.0));
    t.rho_weights.push_back(0.5 * g.weights[i]);
  }
  return t;
}

struct CubatureResult {
  std::vector<complex> value;
  double error = 0.0;
  std::size_t cells = 0;
};

struct CubatureOptions {
  double abs_tol = 1e-11;
  std::size_t max_cells = 200000;
  std::size_t points = 8;  // Gauss points per direction per cell
};

namespace detail {

struct Cell {
  double r0, r1, t0, t1;
  std::vector<complex> fine;  // sum of the four children's rule values
  double error;
  std::size_t id;
};

template <class F>
void apply_rule(F& integrand, const GaussRule& g, double r0, double r1, double t0, double t1,
                std::vector<complex>& out, std::vector<complex>& scratch) {
  std::fill(out.begin(), out.end(), complex{});
  const double hr = 0.5 * (r1 - r0), ht = 0.5 * (t1 - t0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double r = r0 + hr * (g.nodes[i] + 1.0);
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double t = t0 + ht * (g.nodes[j] + 1.0);
      integrand(r, t, std::span<complex>(scratch));
      const double w = g.weights[i] * g.weights[j] * hr * ht;
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * scratch[k];
    }
  }
}

} // namespace detail

/// Global adaptive cubature of a vector-valued integrand over the union of the
/// rectangles spanned by consecutive breakpoints.  integrand(rho, theta, out)
/// writes `dims` values (Jacobian included).  Cells are bisected in both
/// directions, worst error first, until the summed error estimate (max over
/// components) falls below abs_tol.  The partition depends only on the
/// integrand and options, so results are reproducible bit for bit.
template <class F>
CubatureResult adaptive_rectangles(F&& integrand, std::size_t dims, std::vector<double> rho_breaks,
                                   std::vector<double> theta_breaks, const CubatureOptions& opt = {}) {
  auto clean = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), v.end());
  };
  clean(rho_breaks);
  clean(theta_breaks);
  grunsky::detail::require(rho_breaks.size() >= 2 && theta_breaks.size() >= 2, "adaptive_rectangles: empty domain");

  const GaussRule g = gauss_legendre(opt.points);
  std::vector<complex> scratch(dims), tmp(dims), coarse(dims);

  std::vector<detail::Cell> cells;
  std::vector<bool> alive;
  auto cmp = [&](std::size_t a, std::size_t b) {
    if (cells[a].error != cells[b].error) return cells[a].error < cells[b].error;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> queue(cmp);

  auto make_cell = [&](double r0, double r1, double t0, double t1) {
    detail::Cell c{r0, r1, t0, t1, std::vector<complex>(dims, complex{}), 0.0, cells.size()};
    detail::apply_rule(integrand, g, r0, r1, t0, t1, coarse, scratch);
    const double rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
    const double rb[3] = {r0, rm, r1}, tb[3] = {t0, tm, t1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        detail::apply_rule(integrand, g, rb[a], rb[a + 1], tb[b], tb[b + 1], tmp, scratch);
        for (std::size_t k = 0; k < dims; ++k) c.fine[k] += tmp[k];
      }
    double err = 0.0;
    for (std::size_t k = 0; k < dims; ++k) err = std::max(err, std::abs(c.fine[k] - coarse[k]));
    c.error = err;
    cells.push_back(std::move(c));
    alive.push_back(true);
    queue.push(cells.size() - 1);
    return err;
  };

  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < rho_breaks.size(); ++i)
    for (std::size_t j = 0; j + 1 < theta_breaks.size(); ++j)
      total_error += make_cell(rho_breaks[i], rho_breaks[i + 1], theta_breaks[j], theta_breaks[j + 1]);

  std::size_t leaves = cells.size();
  while (total_error > opt.abs_tol && !queue.empty()) {
    if (leaves > opt.max_cells)
      throw numerical_error("adaptive cubature did not converge: error estimate " + std::to_string(total_error) +
                            " above tolerance " + std::to_string(opt.abs_tol) + " after " + std::to_string(leaves) +
                            " cells");
    const std::size_t id = queue.top();
    queue.pop();
    const double r0 = cells[id].r0, r1 = cells[id].r1, t0 = cells[id].t0, t1 = cells[id].t1;
    if (r1 - r0 < 1e-13 || t1 - t0 < 1e-13)
      throw numerical_error("adaptive cubature did not converge: cell size underflow");
    total_error -= cells[id].error;
    alive[id] = false;
    cells[id].fine.clear();
    cells[id].fine.shrink_to_fit();
    const double rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
    total_error += make_cell(r0, rm, t0, tm);
    total_error += make_cell(r0, rm, tm, t1);
    total_error += make_cell(rm, r1, t0, tm);
    total_error += make_cell(rm, r1, tm, t1);
    leaves += 3;
    if (total_error < 0.0) total_error = 0.0;
  }

  CubatureResult res;
  res.value.assign(dims, complex{});
  res.error = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t k = 0; k < dims; ++k) res.value[k] += cells[i].fine[k];
    res.error += cells[i].error;
    ++res.cells;
  }
  if (res.error > opt.abs_tol)
    throw numerical_error("adaptive cubature did not converge: final error estimate " + std::to_string(res.error));
  return res;
}

/// Uniform breakpoints on [lo, hi] merged with extra points inside.
inline std::vector<double> breakpoints(double lo, double hi, std::size_t pieces, std::span<const double> extra = {}) {
  std::vector<double> v;
  for (std::size_t i = 0; i <= pieces; ++i) v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pieces));
  for (double x : extra)
    if (x > lo && x < hi) v.push_back(x);
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace grunsky::quadrature

#endif // GRUNSKY_QUADRATURE_HPP
