// Tour of the disk-case quantities on the Joukowski-type maps z + b/z and a
// quadratic Teichmuller coefficient: Grunsky norms, alpha, the strengthened
// bound, Fredholm eigenvalues and a homotopy profile.

#include <cstdio>
#include <vector>

#include "grunsky/grunsky.hpp"

using namespace grunsky;

int main() {
  std::printf("%-6s %-12s %-12s %-12s %-12s %-12s\n", "b", "kappa_8", "rho", "firstorder", "bnorm", "Ahlfors");
  for (double b : {0.05, 0.1, 0.3, 0.5}) {
    const LaurentFunction f(1.0, {0.0, b}, 16);
    const FredholmReport r = fredholm_eigenvalue(f, 8, b);
    std::printf("%-6.2f %-12.9f %-12.9f %-12.9f %-12.9f %s\n", b, r.kappa, *r.rho, r.firstorder, r.bnorm,
                r.ahlfors_ok ? "ok" : "violated");
  }

  std::printf("\nalpha for mu = k |z^p|/z^p (k = 0.3):\n");
  for (std::size_t p = 0; p <= 6; ++p) {
    const BeltramiSpec mu = BeltramiSpec::teichmuller(0.3, RationalFunction::monomial(p));
    const double a = alpha_functional(mu).value;
    std::printf("  p = %zu  alpha = %.12f  bound k(k+alpha)/(1+alpha k) = %.12f\n", p, a, strengthened_bound(0.3, a));
  }

  std::printf("\nfirst-order maps for mu = 0.05 |z|/z:\n");
  const BeltramiSpec mu = BeltramiSpec::teichmuller(0.05, RationalFunction::monomial(1));
  const LaurentFunction g = variational_map(mu, 24);
  const double alpha = alpha_functional(mu, 12).value;
  std::printf("  kappa_12 = %.12f  alpha k = %.12f  upper bound = %.12f\n", grunsky_norm(g, 12), alpha * 0.05,
              strengthened_bound(0.05, alpha));

  std::printf("\nnorm profile of f_t = t f(z/t) for z + 0.4/z:\n");
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  const HomotopyProfile p = norm_profile(LaurentFunction(1.0, {0.0, 0.4}, 12), grid, 12,
                                         [](double r) { return 0.4 * r * r; });
  for (std::size_t i = 0; i < grid.size(); ++i)
    std::printf("  r = %.1f  kappa = %.12f  ratio = %.12f\n", grid[i], p.kappa[i], (*p.ratio)[i]);
  std::printf("  monotone: %s, level property: %s\n", p.monotone ? "yes" : "no", p.level_property_ok ? "yes" : "no");
  return 0;
}
