#include "pwtrace/divided_differences.hpp"

#include <algorithm>
#include <cmath>

#include "pwtrace/errors.hpp"
#include "pwtrace/halfplane_geometry.hpp"

namespace pwtrace {

namespace {
constexpr double kZeroGuard = 1e-300;

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}
}  // namespace

Cluster make_cluster(std::vector<Complex> points, Flavor flavor, HalfPlane hp, ExpSign sign,
                     std::vector<std::size_t> node_indices) {
  if (points.empty()) fail(errc::invalid_argument, "make_cluster: empty point set");
  if (!node_indices.empty() && node_indices.size() != points.size())
    fail(errc::invalid_argument, "make_cluster: node_indices size mismatch");

  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });

  Cluster c;
  c.points.reserve(points.size());
  for (std::size_t i : order) c.points.push_back(points[i]);
  if (!node_indices.empty()) {
    c.node_indices.reserve(points.size());
    for (std::size_t i : order) c.node_indices.push_back(node_indices[i]);
  }
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (c.points[i] == c.points[i - 1])
      fail(errc::duplicate_points, "make_cluster: points must be pairwise distinct");
  }
  c.flavor = flavor;
  c.half_plane = hp;
  c.exp_sign = sign;
  c.base_index = c.points.size() - 1;
  if (flavor == Flavor::pseudohyperbolic) {
    for (Complex z : c.points) {
      if (!hp.contains(z))
        fail(errc::invalid_argument,
             "make_cluster: pseudohyperbolic cluster point not strictly inside the half-plane");
    }
  }
  return c;
}

Complex dd_denominator(const Cluster& cluster, std::size_t i, std::size_t j) {
  if (cluster.flavor == Flavor::euclidean) return cluster.points[j] - cluster.points[i];
  return blaschke_factor(cluster.points[j], cluster.points[i], cluster.half_plane);
}

// Shared table recursion. After step m, table[m] holds the order-m divided
// difference of the first m+1 values; table[j], j > m, holds the difference
// over (points[0..m-1], points[j]).
static void dd_table_step(const Cluster& cluster, std::vector<Complex>& table, std::size_t m) {
  for (std::size_t j = m; j < table.size(); ++j) {
    const Complex den = dd_denominator(cluster, m - 1, j);
    if (std::abs(den) < kZeroGuard)
      fail(errc::duplicate_points, "divided_difference: zero denominator (coincident points)");
    table[j] = (table[j] - table[m - 1]) / den;
  }
}

Complex divided_difference(const Cluster& cluster, std::span<const Complex> values,
                           std::size_t order) {
  if (order >= cluster.size())
    fail(errc::order_out_of_range, "divided_difference: order exceeds cluster size - 1");
  if (values.size() != order + 1)
    fail(errc::invalid_argument, "divided_difference: need exactly order+1 values");
  std::vector<Complex> table(values.begin(), values.end());
  for (std::size_t m = 1; m <= order; ++m) dd_table_step(cluster, table, m);
  return table[order];
}

std::vector<Complex> prefix_divided_differences(const Cluster& cluster,
                                                std::span<const Complex> values) {
  if (values.empty() || values.size() > cluster.size())
    fail(errc::invalid_argument, "prefix_divided_differences: bad value count");
  std::vector<Complex> table(values.begin(), values.end());
  std::vector<Complex> out(values.size());
  out[0] = table[0];
  for (std::size_t m = 1; m < values.size(); ++m) {
    dd_table_step(cluster, table, m);
    out[m] = table[m];
  }
  return out;
}

Complex newton_eval(const Cluster& cluster, std::span<const Complex> values, Complex z) {
  if (values.size() != cluster.size())
    fail(errc::invalid_argument, "newton_eval: one value per cluster point required");
  const std::vector<Complex> coeff = prefix_divided_differences(cluster, values);
  Complex acc = 0.0;
  Complex basis = 1.0;
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    acc += coeff[k] * basis;
    basis *= cluster.flavor == Flavor::euclidean
                 ? z - cluster.points[k]
                 : blaschke_factor(z, cluster.points[k], cluster.half_plane);
  }
  return acc;
}

double dd_bound(const Cluster& cluster, double eta, double sup_norm, std::size_t order) {
  if (eta <= 0.0) fail(errc::eta_non_positive, "dd_bound: eta must be positive");
  if (order >= cluster.size())
    fail(errc::order_out_of_range, "dd_bound: order exceeds cluster size - 1");
  const double m = static_cast<double>(cluster.size());
  double factor = std::pow(2.0 / eta, static_cast<double>(order));
  for (std::size_t k = 0; k <= order; ++k) {
    const double t = 1.0 - static_cast<double>(k) / (2.0 * m);
    if (t <= 0.0) fail(errc::bound_degenerate, "dd_bound: 1 - k/(2M) not positive");
    factor /= t;
  }
  return factor * sup_norm;
}

std::vector<Complex> slice_values(const TraceData& trace, const Cluster& cluster) {
  std::vector<Complex> out;
  out.reserve(cluster.size());
  if (!cluster.node_indices.empty()) {
    for (std::size_t idx : cluster.node_indices) {
      if (idx >= trace.values.size())
        fail(errc::missing_trace_value, "slice_values: node index outside the trace");
      out.push_back(trace.values[idx]);
    }
    return out;
  }
  for (Complex p : cluster.points) {
    bool found = false;
    for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
      if (trace.nodes[i] == p) {
        out.push_back(trace.values[i]);
        found = true;
        break;
      }
    }
    if (!found) fail(errc::missing_trace_value, "slice_values: cluster point is not in the trace");
  }
  return out;
}

}  // namespace pwtrace
