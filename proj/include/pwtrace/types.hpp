#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace pwtrace {

using Complex = std::complex<double>;

enum class HalfPlaneSign { upper, lower };

/// Open half-plane above or below the horizontal line Im z = offset.
struct HalfPlane {
  HalfPlaneSign sign = HalfPlaneSign::upper;
  double offset = 0.0;

  static HalfPlane upper(double a = 0.0) { return {HalfPlaneSign::upper, a}; }
  static HalfPlane lower(double a = 0.0) { return {HalfPlaneSign::lower, a}; }

  /// Signed distance into the half-plane (positive strictly inside).
  double depth(Complex z) const {
    return sign == HalfPlaneSign::upper ? z.imag() - offset : offset - z.imag();
  }

  /// Strict membership; boundary points are outside.
  bool contains(Complex z) const { return depth(z) > 0.0; }
};

/// Axis-aligned closed rectangle given by center and side lengths.
struct Rect {
  Complex center;
  double width = 0.0;
  double height = 0.0;

  bool contains(Complex z) const {
    return std::abs(z.real() - center.real()) <= width / 2.0 &&
           std::abs(z.imag() - center.imag()) <= height / 2.0;
  }
};

/// Rectangular evaluation grid for margin estimators and profile sweeps.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double step = 0.0;
};

/// Space parameters: exponential type tau, integrability exponent p,
/// strip half-width epsilon and cluster capacity N.
struct SpaceParams {
  double tau = std::numbers::pi;
  double p = 2.0;
  double epsilon = 0.0;  // 0 means: derive from the empirical density radius
  int capacity = 1;
};

enum class Flavor { euclidean, pseudohyperbolic };
enum class ExpSign { plus, minus };

}  // namespace pwtrace
