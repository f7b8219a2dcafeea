#pragma once

#include "pwtrace/types.hpp"

namespace pwtrace {

/// Blaschke factor b_mu(z) = (z - mu) / (z - conj(mu) - 2ia) for the
/// half-plane bounded by Im z = a. The same formula serves the upper and the
/// lower half-plane; it vanishes at mu and is unimodular on the boundary.
/// Throws degenerate_denominator when z coincides with the reflected point.
Complex blaschke_factor(Complex z, Complex mu, const HalfPlane& hp);

/// Pseudohyperbolic distance |b_mu(z)|. In [0,1) for interior pairs,
/// exactly 1 when either point sits on the boundary line, 0 iff z == mu.
double pseudo_distance(Complex z, Complex w, const HalfPlane& hp);

/// Mixed metric |z - w| / (1 + |z - conj(w)|): Euclidean-like near the real
/// axis, pseudohyperbolic-like far from it. Not capped at 1.
double delta_distance(Complex z, Complex w);

}  // namespace pwtrace
