#include "pwtrace/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>

#include "pwtrace/errors.hpp"
#include "pwtrace/parallel.hpp"

namespace pwtrace {

namespace {

constexpr double kWeightFloor = 1e-300;

// Verdict from the per-scale maxima: growing needs the last three entries
// strictly increasing with total factor above the threshold.
ApVerdict classify(const std::vector<ApReport::ScaleMax>& per_scale) {
  if (per_scale.size() < 3) return ApVerdict::inconclusive;
  const double m1 = per_scale[per_scale.size() - 3].max_ratio;
  const double m2 = per_scale[per_scale.size() - 2].max_ratio;
  const double m3 = per_scale[per_scale.size() - 1].max_ratio;
  if (!(std::isfinite(m1) && std::isfinite(m2) && std::isfinite(m3)))
    return ApVerdict::inconclusive;
  const bool monotone = m1 < m2 && m2 < m3;
  const double factor = m3 / m1;
  if (monotone && factor > kApGrowthThreshold) return ApVerdict::growing;
  if (factor <= kApGrowthThreshold) return ApVerdict::bounded;
  return ApVerdict::inconclusive;
}

}  // namespace

std::string to_string(ApVerdict v) {
  switch (v) {
    case ApVerdict::bounded:
      return "bounded";
    case ApVerdict::growing:
      return "growing";
    default:
      return "inconclusive";
  }
}

nlohmann::json ApReport::to_json() const {
  nlohmann::json scales = nlohmann::json::array();
  for (const ScaleMax& s : per_scale)
    scales.push_back({{"scale", s.scale}, {"max_ratio", s.max_ratio}});
  return {{"estimate", estimate},
          {"per_scale", scales},
          {"verdict", to_string(verdict)},
          {"p", p},
          {"grid", grid_desc}};
}

ApReport continuous_ap_sampled(const std::vector<double>& samples, double p,
                               std::vector<double> scales, double x_min, double step) {
  if (p <= 1.0) fail(errc::invalid_argument, "continuous_ap: p must exceed 1");
  if (step <= 0.0 || samples.size() < 2) fail(errc::empty_grid, "continuous_ap: empty grid");
  if (scales.empty()) fail(errc::empty_grid, "continuous_ap: no scales");
  for (double w : samples) {
    if (!(w >= kWeightFloor) || !std::isfinite(w))
      fail(errc::non_positive_weight, "continuous_ap: weight sample below the positive floor");
  }
  const std::size_t n = samples.size();
  const double dual_exp = -1.0 / (p - 1.0);

  // Trapezoid prefix sums: integral over [x_a, x_b] = step * (P[b] - P[a]).
  std::vector<double> pw(n, 0.0), pq(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    pw[i] = pw[i - 1] + (samples[i - 1] + samples[i]) / 2.0;
    pq[i] = pq[i - 1] +
            (std::pow(samples[i - 1], dual_exp) + std::pow(samples[i], dual_exp)) / 2.0;
  }

  std::sort(scales.begin(), scales.end());
  ApReport report;
  report.p = p;
  report.grid_desc = "[" + std::to_string(x_min) + ", " +
                     std::to_string(x_min + step * static_cast<double>(n - 1)) + "] step " +
                     std::to_string(step);
  std::size_t last_m = 0;
  for (double scale : scales) {
    const std::size_t m = std::min<std::size_t>(
        n - 1, std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(scale / step))));
    if (m == last_m) continue;  // duplicate realized scale
    last_m = m;
    double max_ratio = 0.0;
    for (std::size_t i = 0; i + m < n; ++i) {
      const double avg_w = (pw[i + m] - pw[i]) / static_cast<double>(m);
      const double avg_q = (pq[i + m] - pq[i]) / static_cast<double>(m);
      max_ratio = std::max(max_ratio, avg_w * std::pow(avg_q, p - 1.0));
    }
    report.per_scale.push_back({static_cast<double>(m) * step, max_ratio});
    report.estimate = std::max(report.estimate, max_ratio);
  }
  report.verdict = classify(report.per_scale);
  return report;
}

ApReport continuous_ap(const std::function<double(double)>& weight, double p,
                       std::vector<double> scales, double x_min, double x_max, double step) {
  if (step <= 0.0 || x_max <= x_min) fail(errc::empty_grid, "continuous_ap: empty grid");
  const std::size_t n = static_cast<std::size_t>((x_max - x_min) / step) + 1;
  std::vector<double> samples(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      samples[i] = weight(x_min + static_cast<double>(i) * step);
  });
  return continuous_ap_sampled(samples, p, std::move(scales), x_min, step);
}

ApReport discrete_ap(const std::vector<double>& w, double p, int max_window) {
  if (p <= 1.0) fail(errc::invalid_argument, "discrete_ap: p must exceed 1");
  if (w.empty() || max_window < 1) fail(errc::empty_grid, "discrete_ap: empty input");
  for (double v : w) {
    if (!(v >= kWeightFloor) || !std::isfinite(v))
      fail(errc::non_positive_weight, "discrete_ap: non-positive entry");
  }
  const std::size_t n = w.size();
  const double dual_exp = -1.0 / (p - 1.0);
  std::vector<double> pw(n + 1, 0.0), pq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    pw[i + 1] = pw[i] + w[i];
    pq[i + 1] = pq[i] + std::pow(w[i], dual_exp);
  }
  ApReport report;
  report.p = p;
  report.grid_desc = std::to_string(n) + " entries, windows <= " + std::to_string(max_window);
  const std::size_t w_max = std::min<std::size_t>(n, static_cast<std::size_t>(max_window));
  for (std::size_t len = 1; len <= w_max; ++len) {
    double max_ratio = 0.0;
    for (std::size_t k = 0; k + len <= n; ++k) {
      const double avg_w = (pw[k + len] - pw[k]) / static_cast<double>(len);
      const double avg_q = (pq[k + len] - pq[k]) / static_cast<double>(len);
      max_ratio = std::max(max_ratio, avg_w * std::pow(avg_q, p - 1.0));
    }
    report.per_scale.push_back({static_cast<double>(len), max_ratio});
    report.estimate = std::max(report.estimate, max_ratio);
  }
  report.verdict = classify(report.per_scale);
  return report;
}

namespace {

// Composite Simpson over [a, b]; panels forced even.
Complex simpson(const std::function<Complex(double)>& g, double a, double b, int panels) {
  if (b <= a) return {0.0, 0.0};
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  Complex acc = g(a) + g(b);
  for (int i = 1; i < panels; ++i) acc += g(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return acc * (h / 3.0);
}

// Midpoint quadrature of the folded integrand [f(x+s) - f(x-s)] / s over
// [lo, hi]; the odd part of the 1/(t-x) kernel cancels pairwise.
Complex folded_pv(const std::function<Complex(double)>& f, double x, double lo, double hi,
                  int panels) {
  const double h = (hi - lo) / panels;
  Complex acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double s = lo + (i + 0.5) * h;
    acc += (f(x + s) - f(x - s)) / s;
  }
  return acc * h;
}

// Far zone under s = s1 * e^u, uniform midpoint in u.
Complex folded_pv_log(const std::function<Complex(double)>& f, double x, double s1, double hi,
                      int panels) {
  const double span = std::log(hi / s1);
  const double h = span / panels;
  Complex acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double s = s1 * std::exp((i + 0.5) * h);
    acc += (f(x + s) - f(x - s));  // ds/s absorbs the kernel denominator
  }
  return acc * h;
}

}  // namespace

Complex hilbert_pv(const std::function<Complex(double)>& f, Complex z, double T, int panels) {
  if (T <= 0.0 || panels < 64) fail(errc::invalid_argument, "hilbert_pv: bad quadrature window");
  if (std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z.real()))) {
    return simpson([&](double t) { return f(t) / (t - z); }, -T, T, panels);
  }
  const double x = z.real();
  const double reach = std::min(T - x, T + x);
  const double near = std::min(reach, 64.0);
  if (reach <= 16.0 * (2.0 * T / panels) || reach <= 0.0)
    fail(errc::singular_sample_gap,
         "hilbert_pv: real z too close to the window edge for symmetric panels");
  // Near zone with Richardson over panel widths h and h/2 (midpoint ~ h^2).
  const Complex coarse = folded_pv(f, x, 0.0, near, panels / 4);
  const Complex fine = folded_pv(f, x, 0.0, near, panels / 2);
  Complex sym = (4.0 * fine - coarse) / 3.0;
  if (reach > near) sym += folded_pv_log(f, x, near, reach, panels / 4);
  // Leftover segment on the longer side carries no singularity.
  Complex rest = 0.0;
  auto g = [&](double t) { return f(t) / (t - x); };
  if (T - x > reach) rest += simpson(g, x + reach, T, panels / 8);
  if (T + x > reach) rest += simpson(g, -T, x - reach, panels / 8);
  return sym + rest;
}

std::vector<Complex> discrete_hilbert(const std::vector<Complex>& gamma,
                                      const std::vector<Complex>& sigma,
                                      const std::vector<Complex>& a) {
  if (gamma.size() != a.size())
    fail(errc::invalid_argument, "discrete_hilbert: one coefficient per gamma point");
  std::vector<Complex> out(sigma.size(), Complex(0.0, 0.0));
  for (std::size_t n = 0; n < sigma.size(); ++n) {
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      const Complex den = gamma[j] - sigma[n];
      if (den == Complex(0.0, 0.0))
        fail(errc::coincident_point, "discrete_hilbert: gamma_j equals sigma_n");
      out[n] += a[j] / den;
    }
  }
  return out;
}

}  // namespace pwtrace
