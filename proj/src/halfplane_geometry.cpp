#include "pwtrace/halfplane_geometry.hpp"

#include "pwtrace/errors.hpp"

namespace pwtrace {

namespace {
// Guards true poles only, not precision.
constexpr double kPoleGuard = 1e-300;
}  // namespace

Complex blaschke_factor(Complex z, Complex mu, const HalfPlane& hp) {
  const Complex den = z - std::conj(mu) - Complex(0.0, 2.0 * hp.offset);
  if (std::abs(den) < kPoleGuard) {
    fail(errc::degenerate_denominator,
         "blaschke_factor: z coincides with the reflection of mu across the boundary");
  }
  return (z - mu) / den;
}

double pseudo_distance(Complex z, Complex w, const HalfPlane& hp) {
  return std::abs(blaschke_factor(z, w, hp));
}

double delta_distance(Complex z, Complex w) {
  return std::abs(z - w) / (1.0 + std::abs(z - std::conj(w)));
}

}  // namespace pwtrace
