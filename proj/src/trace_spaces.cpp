#include "pwtrace/trace_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pwtrace/errors.hpp"
#include "pwtrace/halfplane_geometry.hpp"
#include "pwtrace/parallel.hpp"

namespace pwtrace {

TraceData restrict_trace(const BandlimitedFunction& f, const NodeSequence& seq) {
  TraceData out;
  out.nodes = seq.nodes;
  out.values.reserve(seq.size());
  for (Complex lam : seq.nodes) out.values.push_back(f(lam));
  return out;
}

std::vector<ClusterNormTerms> partition_norm_terms(const TraceData& trace,
                                                   const std::vector<Cluster>& clusters,
                                                   double tau, double p, bool modify_by_exp,
                                                   const std::vector<double>& weights) {
  std::vector<ClusterNormTerms> out;
  out.reserve(clusters.size());
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const Cluster& c = clusters[ci];
    std::vector<Complex> values = slice_values(trace, c);
    if (modify_by_exp) {
      const Complex it(0.0, c.sign_value() * tau);
      for (std::size_t j = 0; j < values.size(); ++j) values[j] *= std::exp(it * c.points[j]);
    }
    const std::vector<Complex> dd = prefix_divided_differences(c, values);
    ClusterNormTerms t;
    t.cluster_index = ci;
    t.weight = weights[ci];
    t.term_p.reserve(dd.size());
    double sum = 0.0;
    for (Complex d : dd) {
      const double tp = std::pow(std::abs(d), p);
      t.term_p.push_back(tp);
      sum += tp;
    }
    t.contribution = t.weight * sum;
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

void require_full_trace(const TraceData& trace, std::size_t node_count, const char* who) {
  if (trace.values.size() != node_count || trace.nodes.size() != node_count)
    fail(errc::missing_trace_value, std::string(who) + ": trace does not cover the node set");
}

double norm_from_terms(const std::vector<ClusterNormTerms>& terms, double p) {
  double sum = 0.0;
  for (const ClusterNormTerms& t : terms) sum += t.contribution;
  return std::pow(sum, 1.0 / p);
}

}  // namespace

double trace_norm_partition(const TraceData& trace, const Partition& partition,
                            const SpaceParams& params) {
  require_full_trace(trace, partition.membership.size(), "trace_norm_partition");
  std::vector<double> weights;
  weights.reserve(partition.clusters.size());
  for (const Cluster& c : partition.clusters)
    weights.push_back(1.0 + std::abs(c.base_point().imag()));
  return norm_from_terms(
      partition_norm_terms(trace, partition.clusters, params.tau, params.p, true, weights),
      params.p);
}

double trace_norm_neighbors(const TraceData& trace, const NodeSequence& seq,
                            const SpaceParams& params, double eta) {
  require_full_trace(trace, seq.size(), "trace_norm_neighbors");
  const std::vector<Cluster> groups = neighbor_groups(seq, params.capacity, eta);
  std::vector<double> weights;
  weights.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i)
    weights.push_back(1.0 + std::abs(seq.nodes[i].imag()));  // weight of the group's center
  return norm_from_terms(partition_norm_terms(trace, groups, params.tau, params.p, true, weights),
                         params.p);
}

double trace_norm_halfplane(const TraceData& trace, const Partition& partition,
                            const HalfPlane& hp, double p) {
  require_full_trace(trace, partition.membership.size(), "trace_norm_halfplane");
  std::vector<double> weights;
  weights.reserve(partition.clusters.size());
  for (const Cluster& c : partition.clusters) {
    if (c.flavor != Flavor::pseudohyperbolic || c.half_plane.sign != hp.sign ||
        c.half_plane.offset != hp.offset)
      fail(errc::flavor_mismatch,
           "trace_norm_halfplane: every cluster must be pseudohyperbolic in the given half-plane");
    weights.push_back(std::abs(c.base_point().imag() - hp.offset));
  }
  return norm_from_terms(partition_norm_terms(trace, partition.clusters, 0.0, p, false, weights),
                         p);
}

BandlimitedFunction cardinal_interpolant(const TraceData& trace, const NodeSequence& seq,
                                         double radius) {
  require_full_trace(trace, seq.size(), "cardinal_interpolant");
  struct Series {
    NodeSequence seq;
    double radius = 0.0;
    std::vector<Complex> nodes;   // support
    std::vector<Complex> values;  // a(lambda)
    std::vector<Complex> coeff;   // a(lambda) / S'(lambda)
  };
  auto data = std::make_shared<Series>();
  data->seq = seq;
  data->radius = radius;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (trace.values[i] == Complex(0.0, 0.0)) continue;
    const Complex sp = eval_S_prime(seq, seq.nodes[i], radius);
    if (std::abs(sp) < 1e-250)
      fail(errc::derivative_zero, "cardinal_interpolant: S'(lambda) vanishes at a support node");
    data->nodes.push_back(seq.nodes[i]);
    data->values.push_back(trace.values[i]);
    data->coeff.push_back(trace.values[i] / sp);
  }
  BandlimitedFunction f;
  f.description = "cardinal series";
  f.evaluator = [data](Complex z) {
    const Complex s = eval_S(data->seq, z, data->radius);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < data->nodes.size(); ++k) {
      const Complex lam = data->nodes[k];
      if (std::abs(z - lam) < 1e-8 * (1.0 + std::abs(lam)))
        acc += data->values[k];  // removable singularity: the term's limit
      else
        acc += data->coeff[k] * s / (z - lam);
    }
    return acc;
  };
  return f;
}

BandlimitedFunction sinc_kernel(double x0, double tau) {
  if (tau <= 0.0) fail(errc::invalid_argument, "sinc_kernel: tau must be positive");
  BandlimitedFunction f;
  f.declared_type = tau;
  f.description = "sinc";
  f.evaluator = [x0, tau](Complex z) {
    const Complex w = tau * (z - x0);
    if (std::abs(w) < 1e-4) {
      const Complex w2 = w * w;
      return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    }
    return std::sin(w) / w;
  };
  return f;
}

namespace {

// Trapezoid integral of |f(x + i shift)|^p over [-T, T].
double abs_p_integral(const BandlimitedFunction& f, double p, double shift, double window,
                      double step) {
  if (window <= 0.0 || step <= 0.0) fail(errc::invalid_argument, "bad quadrature window");
  const std::size_t n = static_cast<std::size_t>(std::llround(2.0 * window / step));
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = -window + static_cast<double>(i) * step;
    const double v = std::pow(std::abs(f(Complex(x, shift))), p);
    sum += (i == 0 || i == n) ? v / 2.0 : v;
  }
  return sum * step;
}

}  // namespace

double pw_lp_norm(const BandlimitedFunction& f, double p, double window, double step) {
  return std::pow(abs_p_integral(f, p, 0.0, window, step), 1.0 / p);
}

PlancherelResult plancherel_polya_ratio(const BandlimitedFunction& f, double p, double a,
                                        double tau, double window, double step) {
  const double denom = abs_p_integral(f, p, 0.0, window, step);
  if (denom == 0.0) return {0.0, true};
  const double num = abs_p_integral(f, p, a, window, step);
  return {num / (std::exp(tau * p * std::abs(a)) * denom), false};
}

double pointwise_bound_ratio(const BandlimitedFunction& f, double p, double tau, Complex z,
                             double norm) {
  if (!(norm > 0.0)) fail(errc::zero_norm, "pointwise_bound_ratio: norm must be positive");
  const double y = std::abs(z.imag());
  return std::abs(f(z)) * std::pow(1.0 + y, 1.0 / p) * std::exp(-tau * y) / norm;
}

double residue_identity_gap(const Rect& rect, const std::function<Complex(Complex)>& numerator,
                            const std::function<Complex(Complex)>& denominator,
                            const Cluster& cluster, int panels_per_side) {
  auto h = [&](Complex z) { return numerator(z) / denominator(z); };
  const double hw = rect.width / 2.0, hh = rect.height / 2.0;
  const double scale = 1.0 + std::max(rect.width, rect.height);

  std::vector<double> margins;
  for (Complex lam : cluster.points) {
    const double mx = hw - std::abs(lam.real() - rect.center.real());
    const double my = hh - std::abs(lam.imag() - rect.center.imag());
    const double margin = std::min(mx, my);
    if (margin < 1e-9 * scale)
      fail(errc::pole_on_contour, "residue_identity_gap: pole on or outside the contour");
    margins.push_back(margin);
  }

  // Contour integral, counterclockwise, composite 4-point Gauss per panel.
  static constexpr double kGaussX[2] = {0.3399810435848563, 0.8611363115940526};
  static constexpr double kGaussW[2] = {0.6521451548625461, 0.3478548451374538};
  const Complex corners[4] = {rect.center + Complex(-hw, -hh), rect.center + Complex(hw, -hh),
                              rect.center + Complex(hw, hh), rect.center + Complex(-hw, hh)};
  Complex contour = 0.0;
  for (int side = 0; side < 4; ++side) {
    const Complex a = corners[side];
    const Complex b = corners[(side + 1) % 4];
    const Complex dz = (b - a) / static_cast<double>(panels_per_side);
    Complex acc = 0.0;
    for (int i = 0; i < panels_per_side; ++i) {
      const Complex mid = a + dz * (static_cast<double>(i) + 0.5);
      for (int g = 0; g < 2; ++g) {
        acc += kGaussW[g] * (h(mid + dz * (0.5 * kGaussX[g])) + h(mid - dz * (0.5 * kGaussX[g])));
      }
    }
    contour += acc * dz / 2.0;
  }

  // Residues as small-circle means: Res = (r/m) sum h(lam + r e^{i t_k}) e^{i t_k}.
  Complex residue_sum = 0.0;
  constexpr int kCircle = 64;
  for (std::size_t j = 0; j < cluster.points.size(); ++j) {
    const Complex lam = cluster.points[j];
    double r = margins[j];
    for (std::size_t k = 0; k < cluster.points.size(); ++k)
      if (k != j) r = std::min(r, std::abs(lam - cluster.points[k]));
    r *= 0.25;
    Complex acc = 0.0;
    for (int k = 0; k < kCircle; ++k) {
      const double t = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / kCircle;
      const Complex e = std::polar(1.0, t);
      acc += h(lam + r * e) * e;
    }
    residue_sum += acc * (r / static_cast<double>(kCircle));
  }
  const Complex target = Complex(0.0, 2.0 * std::numbers::pi) * residue_sum;
  return std::abs(contour - target) / (1.0 + std::abs(target));
}

const ConditionEntry* ConditionReport::find(const std::string& name) const {
  for (const ConditionEntry& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json conditions = nlohmann::json::array();
  for (const ConditionEntry& e : entries) {
    conditions.push_back(
        {{"name", e.name}, {"verdict", e.verdict}, {"evidence", e.evidence}, {"notes", e.notes}});
  }
  return {{"conditions", conditions}};
}

// ---------------------------------------------------------------------------
// Condition checks
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kEntryDensity = "relative_density";
constexpr const char* kEntryCarleson = "carleson_per_halfplane";
constexpr const char* kEntryTrend = "S_convergence_trend";
constexpr const char* kEntryAp = "Ap_profile";
constexpr const char* kEntryDiscreteAp = "discrete_Ap_profile";

struct ResolvedGrids {
  double density_x_min = 0.0, density_x_max = 0.0;
  double ap_x_min = 0.0, ap_x_max = 0.0;
  double step = 0.25;
  double radius = 1.0;
  CheckGrids g;
};

ResolvedGrids resolve_grids(const NodeSequence& seq, const CheckGrids& grids) {
  ResolvedGrids r;
  r.g = grids;
  r.step = grids.step;
  double re_min = seq.nodes.front().real(), re_max = re_min, abs_max = 0.0;
  for (Complex z : seq.nodes) {
    re_min = std::min(re_min, z.real());
    re_max = std::max(re_max, z.real());
    abs_max = std::max(abs_max, std::abs(z));
  }
  r.radius = grids.radius > 0.0 ? grids.radius : abs_max + 1.0;
  if (grids.x_min == 0.0 && grids.x_max == 0.0) {
    // Density scans the real span of the truncation; beyond the extremal
    // nodes every finite sequence thins out. Degenerate spans are widened so
    // sequences with no real extent still get probed.
    r.density_x_min = re_min;
    r.density_x_max = re_max;
    if (re_max - re_min < 2.0 * grids.density_threshold) {
      const double mid = (re_min + re_max) / 2.0;
      r.density_x_min = mid - 2.0 * grids.density_threshold;
      r.density_x_max = mid + 2.0 * grids.density_threshold;
    }
    // The A_p window stays on a core where |S| of a finite truncation is not
    // dominated by the missing far factors (those scale like exp(x^2 / R)).
    const double center = (re_min + re_max) / 2.0;
    const double half_span = (re_max - re_min) / 2.0 + 5.0;
    const double core = std::sqrt(0.11 * std::max(r.radius, 1.0));
    const double half = std::min(half_span, std::max(core, 4.0 * grids.step));
    r.ap_x_min = center - half;
    r.ap_x_max = center + half;
  } else {
    r.density_x_min = r.ap_x_min = grids.x_min;
    r.density_x_max = r.ap_x_max = grids.x_max;
  }
  return r;
}

ConditionEntry density_entry(const NodeSequence& seq, const ResolvedGrids& rg, double* out_r) {
  double radius = 0.0, argmax = rg.density_x_min;
  const std::size_t n =
      static_cast<std::size_t>((rg.density_x_max - rg.density_x_min) / rg.step) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rg.density_x_min + static_cast<double>(i) * rg.step;
    double d = std::numeric_limits<double>::infinity();
    for (Complex lam : seq.nodes) d = std::min(d, std::abs(Complex(x, 0.0) - lam));
    if (d > radius) {
      radius = d;
      argmax = x;
    }
  }
  *out_r = radius;
  ConditionEntry e;
  e.name = kEntryDensity;
  e.verdict = radius < rg.g.density_threshold ? "pass" : "fail";
  e.evidence = {{"radius_r", radius},
                {"threshold", rg.g.density_threshold},
                {"argmax_x", argmax},
                {"window", {rg.density_x_min, rg.density_x_max}}};
  e.notes = "max over the real grid of d(x, Lambda)";
  return e;
}

double carleson_floor_at(double a, double base_floor) {
  return std::pow(base_floor, std::max(1.0, 2.0 * std::abs(a)));
}

// Carleson constants of the given node classes restricted to C_a^+- for every
// a; the classes are the whole sequence for the LS check and the greedy
// N-coloring of the partition for the H_N check.
ConditionEntry carleson_entry(const std::vector<NodeSequence>& classes, const ResolvedGrids& rg) {
  ConditionEntry e;
  e.name = kEntryCarleson;
  nlohmann::json rows = nlohmann::json::array();
  bool all_pass = true;
  for (double a : rg.g.a_values) {
    for (int side = 0; side < 2; ++side) {
      const HalfPlane hp = side == 0 ? HalfPlane::upper(a) : HalfPlane::lower(a);
      for (std::size_t k = 0; k < classes.size(); ++k) {
        const NodeSequence sub = restrict_to_halfplane(classes[k], hp);
        const double constant = carleson_constant(sub, hp);
        const double floor = carleson_floor_at(a, rg.g.carleson_floor);
        const bool pass = constant > floor;
        all_pass = all_pass && pass;
        rows.push_back({{"a", a},
                        {"side", side == 0 ? "upper" : "lower"},
                        {"class", k},
                        {"count", sub.size()},
                        {"constant", constant},
                        {"floor", floor}});
      }
    }
  }
  e.verdict = all_pass ? "pass" : "fail";
  e.evidence = {{"per_halfplane", rows}};
  e.notes = "truncated Carleson constants; floors shrink with |a|";
  return e;
}

ConditionEntry s_trend_entry(const NodeSequence& seq, const ResolvedGrids& rg) {
  static const Complex kProbes[5] = {{0.37, 0.0}, {-1.13, 0.0}, {0.71, 0.32}, {1.9, 0.24},
                                     {-0.45, -0.18}};
  std::vector<double> radii;
  for (int j = 4; j >= 0; --j) radii.push_back(rg.radius / std::pow(2.0, j));
  std::vector<double> gaps;
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
    double gap = 0.0;
    for (Complex z : kProbes) {
      const Complex lo = eval_S(seq, z, radii[j]);
      const Complex hi = eval_S(seq, z, radii[j + 1]);
      gap = std::max(gap, std::abs(lo - hi) / (1.0 + std::abs(hi)));
    }
    gaps.push_back(gap);
  }
  ConditionEntry e;
  e.name = kEntryTrend;
  const bool pass = gaps.back() <= rg.g.s_trend_tol && gaps.back() <= gaps.front();
  e.verdict = pass ? "pass" : "fail";
  e.evidence = {{"radii", radii}, {"relative_gaps", gaps}, {"tolerance", rg.g.s_trend_tol}};
  e.notes = "relative change of the truncated product under radius doubling";
  return e;
}

std::string ap_verdict_to_entry(ApVerdict v) {
  switch (v) {
    case ApVerdict::bounded:
      return "pass";
    case ApVerdict::growing:
      return "fail";
    default:
      return "inconclusive";
  }
}

// Samples (|S(x)| / dist(x))^p on the core window; grid points landing on a
// node are nudged off it (the weight extends continuously there).
ConditionEntry ap_entry(const NodeSequence& seq, const ResolvedGrids& rg, double p,
                        const std::function<double(double)>& dist) {
  const std::size_t n = static_cast<std::size_t>((rg.ap_x_max - rg.ap_x_min) / rg.step) + 1;
  std::vector<double> samples(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double x = rg.ap_x_min + static_cast<double>(i) * rg.step;
      double d = dist(x);
      if (d < 1e-9 * (1.0 + std::abs(x))) {
        x += rg.step / 8.0;
        d = dist(x);
      }
      const double s = std::abs(eval_S(seq, Complex(x, 0.0), rg.radius));
      samples[i] = std::pow(s / d, p);
    }
  });
  ApReport report = continuous_ap_sampled(samples, p, rg.g.scales, rg.ap_x_min, rg.step);
  ConditionEntry e;
  e.name = kEntryAp;
  e.verdict = ap_verdict_to_entry(report.verdict);
  e.evidence = report.to_json();
  e.notes = "continuous Muckenhoupt profile of (|S|/d)^p on the core window";
  return e;
}

std::vector<Complex> select_gamma(const NodeSequence& seq, double strip_height, double min_gap,
                                  double x_min, double x_max) {
  std::vector<Complex> cands;
  for (Complex z : seq.nodes) {
    if (std::abs(z.imag()) < strip_height && z.real() >= x_min && z.real() <= x_max)
      cands.push_back(z);
  }
  std::sort(cands.begin(), cands.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<Complex> out;
  for (Complex z : cands) {
    if (out.empty() || z.real() - out.back().real() >= min_gap) out.push_back(z);
  }
  return out;
}

ConditionEntry discrete_ap_entry(const ResolvedGrids& rg, double p,
                                 const std::vector<Complex>& gamma,
                                 const std::vector<double>& base_weights) {
  ConditionEntry e;
  e.name = kEntryDiscreteAp;
  if (gamma.size() < 8) {
    e.verdict = "inconclusive";
    e.evidence = {{"gamma_count", gamma.size()}};
    e.notes = "fewer than 8 subsequence points on the core window";
    return e;
  }
  std::vector<double> w;
  w.reserve(base_weights.size());
  for (double v : base_weights) w.push_back(std::pow(v, p));
  const int max_window =
      std::min<int>(rg.g.discrete_max_window, static_cast<int>(gamma.size()));
  ApReport report = discrete_ap(w, p, max_window);
  e.verdict = ap_verdict_to_entry(report.verdict);
  e.evidence = report.to_json();
  e.evidence["gamma_count"] = gamma.size();
  e.notes = "discrete Muckenhoupt profile of the subsequence weights";
  return e;
}

}  // namespace

ConditionReport check_ls(const NodeSequence& seq, const SpaceParams& params,
                         const CheckGrids& grids) {
  if (seq.size() == 0) fail(errc::invalid_sequence, "check_ls: empty sequence");
  const ResolvedGrids rg = resolve_grids(seq, grids);
  ConditionReport report;

  double density_r = 0.0;
  report.entries.push_back(density_entry(seq, rg, &density_r));
  const double eps = params.epsilon > 0.0 ? params.epsilon : std::max(density_r, 1e-6);

  report.entries.push_back(carleson_entry({seq}, rg));
  report.entries.push_back(s_trend_entry(seq, rg));

  report.entries.push_back(ap_entry(seq, rg, params.p, [&](double x) {
    double d = std::numeric_limits<double>::infinity();
    for (Complex lam : seq.nodes) d = std::min(d, std::abs(Complex(x, 0.0) - lam));
    return d;
  }));

  const std::vector<Complex> gamma =
      select_gamma(seq, 3.0 * eps, eps / 2.0, rg.ap_x_min, rg.ap_x_max);
  std::vector<double> s_prime;
  s_prime.reserve(gamma.size());
  for (Complex g : gamma) s_prime.push_back(std::abs(eval_S_prime(seq, g, rg.radius)));
  report.entries.push_back(discrete_ap_entry(rg, params.p, gamma, s_prime));
  return report;
}

ConditionReport check_hn(const NodeSequence& seq, const SpaceParams& params,
                         const CheckGrids& grids) {
  if (seq.size() == 0) fail(errc::invalid_sequence, "check_hn: empty sequence");
  const ResolvedGrids rg = resolve_grids(seq, grids);
  ConditionReport report;

  double density_r = 0.0;
  report.entries.push_back(density_entry(seq, rg, &density_r));
  const double eps = params.epsilon > 0.0 ? params.epsilon : std::max(density_r, 1e-6);

  Partition partition;
  try {
    partition = adapted_partition(seq, eps, params.capacity);
  } catch (const Error& err) {
    fail(errc::partition_failed, std::string("check_hn: adapted partition failed: ") + err.what());
  }

  // Greedy N-coloring: the k-th point of every cluster, canonical order.
  std::vector<NodeSequence> classes;
  for (int k = 0; k < params.capacity; ++k) {
    NodeSequence cls;
    for (const Cluster& c : partition.clusters)
      if (static_cast<std::size_t>(k) < c.size()) cls.nodes.push_back(c.points[k]);
    if (!cls.nodes.empty()) classes.push_back(std::move(cls));
  }
  report.entries.push_back(carleson_entry(classes, rg));
  report.entries.push_back(s_trend_entry(seq, rg));

  report.entries.push_back(ap_entry(seq, rg, params.p, [&](double x) {
    return d_N_eval(partition, x).value;
  }));

  const std::vector<Complex> gamma =
      select_gamma(seq, 3.0 * eps, eps / 2.0, rg.ap_x_min, rg.ap_x_max);
  const std::vector<double> omegas = weights_omega(seq, gamma, partition, rg.radius);
  report.entries.push_back(discrete_ap_entry(rg, params.p, gamma, omegas));
  return report;
}

}  // namespace pwtrace
