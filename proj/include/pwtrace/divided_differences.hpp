#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pwtrace/types.hpp"

namespace pwtrace {

/// One group of nodes carrying everything divided differences need: the
/// points in canonical order, the metric flavor, the base point lambda_{n,0}
/// and the sign used in the e^{+-i tau lambda} modification.
struct Cluster {
  std::vector<Complex> points;
  std::vector<std::size_t> node_indices;  // positions in the source sequence; may be empty
  Flavor flavor = Flavor::euclidean;
  HalfPlane half_plane{};  // meaningful only for the pseudohyperbolic flavor
  std::size_t base_index = 0;
  ExpSign exp_sign = ExpSign::plus;

  std::size_t size() const { return points.size(); }
  Complex base_point() const { return points[base_index]; }
  double sign_value() const { return exp_sign == ExpSign::plus ? 1.0 : -1.0; }
};

/// Builds a cluster in canonical order: points sorted by (Re, Im) ascending,
/// base point = last point in that order. Validates distinctness and, for the
/// pseudohyperbolic flavor, strict half-plane membership.
Cluster make_cluster(std::vector<Complex> points, Flavor flavor, HalfPlane hp = {},
                     ExpSign sign = ExpSign::plus,
                     std::vector<std::size_t> node_indices = {});

/// Denominator of one recursion step: b_{p_i}(p_j) for the pseudohyperbolic
/// flavor, p_j - p_i for the Euclidean one.
Complex dd_denominator(const Cluster& cluster, std::size_t i, std::size_t j);

/// Divided difference of the given order over the first order+1 points of the
/// cluster; values are bound to points by position.
Complex divided_difference(const Cluster& cluster, std::span<const Complex> values,
                           std::size_t order);

/// All prefix divided differences at once: result[k] is the order-k divided
/// difference of values[0..k]. values.size() must be in [1, cluster.size()].
std::vector<Complex> prefix_divided_differences(const Cluster& cluster,
                                                std::span<const Complex> values);

/// Newton-type interpolant P(z) = sum_k DD^k * prod_{l<k} factor_l(z), where
/// factor_l is the Blaschke factor b_{p_l}(z) or (z - p_l) per flavor.
/// Satisfies P(p_i) = values[i] for every cluster point.
Complex newton_eval(const Cluster& cluster, std::span<const Complex> values, Complex z);

/// Certified bound (2/eta)^j * prod_{k=0..j} 1/(1 - k/(2M)) * sup_norm with
/// M = cluster size, valid for order-j divided differences of a function
/// bounded by sup_norm on a compact set at pseudohyperbolic distance >= eta
/// from the cluster.
double dd_bound(const Cluster& cluster, double eta, double sup_norm, std::size_t order);

/// Trace values paired with the node set they live on.
struct TraceData {
  std::vector<Complex> nodes;
  std::vector<Complex> values;
};

/// Values of a trace restricted to a cluster, in cluster point order. Uses
/// node_indices when present, otherwise matches points exactly.
std::vector<Complex> slice_values(const TraceData& trace, const Cluster& cluster);

}  // namespace pwtrace
