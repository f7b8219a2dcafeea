#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "pwtrace/divided_differences.hpp"
#include "pwtrace/types.hpp"

namespace pwtrace {

/// Finite node set Lambda. Nodes are pairwise distinct, finite and nonzero.
struct NodeSequence {
  std::vector<Complex> nodes;

  /// Validates the invariants (no zero node, no duplicates, finite entries).
  static NodeSequence from_nodes(std::vector<Complex> nodes);

  std::size_t size() const { return nodes.size(); }
};

/// Nodes of seq strictly inside the half-plane, original order kept.
NodeSequence restrict_to_halfplane(const NodeSequence& seq, const HalfPlane& hp);

/// Full decomposition of a node sequence into capacity-bounded groups.
struct Partition {
  std::vector<Cluster> clusters;
  double epsilon = 0.0;
  int capacity = 1;
  double rho0 = 0.0;        // sup pseudohyperbolic diameter over half-plane clusters
  double rho0_strip = 0.0;  // sup Euclidean diameter over strip clusters
  double delta0_prime = std::numeric_limits<double>::infinity();  // min gap between strip clusters
  std::vector<std::size_t> membership;  // node index -> cluster index

  std::size_t size() const { return clusters.size(); }
};

/// Enclosing rectangles for the half-plane clusters of a partition, with the
/// realized comparability and separation statistics.
struct RectangleCover {
  struct Entry {
    std::size_t cluster_index = 0;
    Rect rect;
    double rho_to_boundary_min = 0.0;  // min over cluster points of rho(point, boundary)
    double rho_to_boundary_max = 0.0;
    double side_over_height = 1.0;  // L_n / |Im z_n - a|
  };
  std::vector<Entry> entries;
  double min_pair_separation = std::numeric_limits<double>::infinity();  // min rho between rects
};

/// Truncated Carleson constant inf_lambda prod_{mu != lambda} |b_mu(lambda)|.
/// All nodes must lie strictly inside the half-plane.
double carleson_constant(const NodeSequence& seq, const HalfPlane& hp);

/// Grid lower estimate of the Generalized Carleson margin: the minimum over
/// interior grid points of |B(z)| / min_n |B_n(z)|, evaluated as the product
/// of the non-minimal per-cluster Blaschke moduli.
double generalized_carleson_margin(const Partition& partition, const HalfPlane& hp,
                                   const GridSpec& grid);

/// The adapted partition: per-half-plane pseudohyperbolic grouping, strip
/// groups re-clustered in the Euclidean metric, capacity and diameter checks,
/// signs per the upper/lower rule. Grouping is single-linkage with threshold
/// epsilon/4. Throws capacity_exceeded when the sequence cannot be grouped
/// within the capacity at diameters < epsilon/2.
Partition adapted_partition(const NodeSequence& seq, double epsilon, int capacity);

/// Per-node neighbor groups sigma_lambda: the <= capacity delta-nearest
/// neighbors of each node within delta-distance eta. Result is parallel to
/// seq.nodes. Requires 0 < eta < 1/2.
std::vector<Cluster> neighbor_groups(const NodeSequence& seq, int capacity, double eta);

/// Rectangles around the pseudohyperbolic clusters of the given half-plane;
/// Euclidean (strip) clusters and clusters of the other half-plane are
/// skipped. Throws clusters_too_close when two rectangles touch or overlap.
RectangleCover enclosing_rectangles(const Partition& partition, const HalfPlane& hp);

/// Empirical relative-density radius: max over the real grid of d(x, Lambda).
double empirical_density_radius(const NodeSequence& seq, double x_min, double x_max, double step);

/// Structural validation shared by the estimators: clusters disjoint, cover
/// equal to the node set, sizes within capacity.
void validate_partition(const Partition& partition, const NodeSequence& seq);

}  // namespace pwtrace
