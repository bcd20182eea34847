// Tour of the quasidisk machinery: exterior maps of an ellipse and a Cassini
// oval, their orthonormal polynomial bases and generalized Grunsky norms.

#include <cstdio>

#include "grunsky/grunsky.hpp"

using namespace grunsky;

int main() {
  const EllipseMaps em = ellipse_maps(1.25, 0.75);
  std::printf("ellipse a = 1.25, b = 0.75: round trip %.3e\n", em.roundtrip_error);
  const EllipseBasis eb = ellipse_basis(1.25, 0.75, 6);
  std::printf("  Chebyshev basis N = 6: orthonormality error %.3e\n", eb.basis.orthonormality_error());

  const CassiniMaps cm = cassini_maps(2.0);
  std::printf("Cassini c = 2: round trip %.3e, boundary residual %.3e\n", cm.roundtrip_error, cm.boundary_residual);

  for (const DomainSpec& d : {DomainSpec::unit_disk(), DomainSpec::ellipse(1.25, 0.75), DomainSpec::cassini(2.0)}) {
    std::printf("\n%s (inradius %.4f)\n", d.name().c_str(), d.inradius());
    for (std::size_t n : {2u, 4u, 8u})
      std::printf("  Milin basis N = %zu: orthonormality error %.3e\n", n, milin_polynomials(d, n).orthonormality_error());
    for (double b : {0.1, 0.3}) {
      // r f(z/r) with r the inradius is univalent on the domain exterior.
      const double r = d.inradius();
      const LaurentFunction f(1.0, {0.0, b * r * r}, 16);
      std::printf("  f = z + %.4f/z: generalized norm N = 8 = %.12f\n", b * r * r,
                  generalized_grunsky_norm(f, d, 8));
    }
    const BeltramiSpec mu = BeltramiSpec::constant(0.3, d);
    std::printf("  alpha of constant 0.3 on the domain: %.12f\n", alpha_functional_domain(mu, d, 6).value);
  }
  return 0;
}
