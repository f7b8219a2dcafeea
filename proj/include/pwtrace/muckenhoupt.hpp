#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwtrace/types.hpp"

namespace pwtrace {

enum class ApVerdict { bounded, growing, inconclusive };

std::string to_string(ApVerdict v);

/// Grid evidence for a Muckenhoupt-type condition. Estimates are lower
/// bounds for a supremum over infinitely many intervals, so "bounded" is a
/// trend statement, never a certificate.
struct ApReport {
  struct ScaleMax {
    double scale = 0.0;
    double max_ratio = 0.0;
  };
  double estimate = 0.0;  // max over per_scale
  std::vector<ScaleMax> per_scale;
  ApVerdict verdict = ApVerdict::inconclusive;
  double p = 0.0;
  std::string grid_desc;

  nlohmann::json to_json() const;
};

/// Verdict growing: the last three per-scale maxima strictly increase and the
/// total factor across them exceeds this threshold.
inline constexpr double kApGrowthThreshold = 1.25;

/// Continuous (A_p) estimator over precomputed samples w(x_min + i*step):
/// for every scale and every grid-aligned interval of that length, the ratio
/// (avg_I w) (avg_I w^{-1/(p-1)})^{p-1} via trapezoid sums.
ApReport continuous_ap_sampled(const std::vector<double>& samples, double p,
                               std::vector<double> scales, double x_min, double step);

/// Same, sampling the weight internally on [x_min, x_max] with the given step.
ApReport continuous_ap(const std::function<double(double)>& weight, double p,
                       std::vector<double> scales, double x_min, double x_max, double step);

/// Discrete (A_p) over an integer-indexed window: the exact maximum of
/// (avg w)(avg w^{-1/(p-1)})^{p-1} over all windows of length <= max_window,
/// with per-length maxima recorded.
ApReport discrete_ap(const std::vector<double>& w, double p, int max_window);

/// Hilbert transform integral_{-T}^{T} f(t)/(t - z) dt. Composite Simpson for
/// z off the real axis; for real z the principal value via symmetric midpoint
/// panels (the odd singular part cancels pairwise) with Richardson
/// extrapolation over two panel widths. Real z must have symmetric reach
/// inside [-T, T].
Complex hilbert_pv(const std::function<Complex(double)>& f, Complex z, double T,
                   int panels = 1 << 20);

/// Finite discrete Hilbert transform (H a)_n = sum_j a_j / (gamma_j - sigma_n).
std::vector<Complex> discrete_hilbert(const std::vector<Complex>& gamma,
                                      const std::vector<Complex>& sigma,
                                      const std::vector<Complex>& a);

}  // namespace pwtrace
