#include "pwtrace/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pwtrace/errors.hpp"
#include "pwtrace/halfplane_geometry.hpp"

namespace pwtrace {

namespace {

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Groups the given node indices by single linkage under the Euclidean metric.
// Pairs further apart than threshold in Re alone cannot link, so a sorted
// sweep keeps this near-linear for spread-out sequences.
std::vector<std::vector<std::size_t>> single_linkage_euclid(const std::vector<Complex>& nodes,
                                                            std::vector<std::size_t> idx,
                                                            double threshold) {
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(nodes[a], nodes[b]); });
  UnionFind uf(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (nodes[idx[j]].real() - nodes[idx[i]].real() > threshold) break;
      if (std::abs(nodes[idx[j]] - nodes[idx[i]]) <= threshold) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) groups[uf.find(i)].push_back(idx[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

std::vector<std::vector<std::size_t>> single_linkage_pseudo(const std::vector<Complex>& nodes,
                                                            const std::vector<std::size_t>& idx,
                                                            const HalfPlane& hp,
                                                            double threshold) {
  UnionFind uf(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (pseudo_distance(nodes[idx[i]], nodes[idx[j]], hp) <= threshold) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) groups[uf.find(i)].push_back(idx[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

double euclid_diameter(const std::vector<Complex>& nodes, const std::vector<std::size_t>& group) {
  double d = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j)
      d = std::max(d, std::abs(nodes[group[i]] - nodes[group[j]]));
  return d;
}

double pseudo_diameter(const std::vector<Complex>& nodes, const std::vector<std::size_t>& group,
                       const HalfPlane& hp) {
  double d = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i)
    for (std::size_t j = i + 1; j < group.size(); ++j)
      d = std::max(d, pseudo_distance(nodes[group[i]], nodes[group[j]], hp));
  return d;
}

double set_distance_euclid(const Cluster& a, const Cluster& b) {
  double d = std::numeric_limits<double>::infinity();
  for (Complex z : a.points)
    for (Complex w : b.points) d = std::min(d, std::abs(z - w));
  return d;
}

std::string point_str(Complex z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

}  // namespace

NodeSequence NodeSequence::from_nodes(std::vector<Complex> nodes) {
  for (Complex z : nodes) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(errc::invalid_sequence, "node sequence: non-finite node");
    if (z == Complex(0.0, 0.0)) fail(errc::invalid_sequence, "node sequence: 0 is not allowed");
  }
  std::vector<Complex> sorted = nodes;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1])
      fail(errc::invalid_sequence, "node sequence: duplicate node " + point_str(sorted[i]));
  }
  return NodeSequence{std::move(nodes)};
}

NodeSequence restrict_to_halfplane(const NodeSequence& seq, const HalfPlane& hp) {
  NodeSequence out;
  for (Complex z : seq.nodes)
    if (hp.contains(z)) out.nodes.push_back(z);
  return out;
}

double carleson_constant(const NodeSequence& seq, const HalfPlane& hp) {
  for (Complex z : seq.nodes) {
    if (!hp.contains(z))
      fail(errc::node_on_boundary,
           "carleson_constant: node " + point_str(z) + " is not strictly inside the half-plane");
  }
  if (seq.size() <= 1) return 1.0;
  double min_log = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    double log_prod = 0.0;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j == i) continue;
      log_prod += std::log(pseudo_distance(seq.nodes[i], seq.nodes[j], hp));
    }
    if (first || log_prod < min_log) {
      min_log = log_prod;
      first = false;
    }
  }
  return std::exp(min_log);
}

double generalized_carleson_margin(const Partition& partition, const HalfPlane& hp,
                                   const GridSpec& grid) {
  if (partition.clusters.empty())
    fail(errc::invalid_argument, "generalized_carleson_margin: empty partition");
  for (const Cluster& c : partition.clusters)
    for (Complex z : c.points)
      if (!hp.contains(z))
        fail(errc::node_on_boundary, "generalized_carleson_margin: cluster point outside half-plane");
  // Disjointness across clusters.
  {
    std::vector<Complex> all;
    for (const Cluster& c : partition.clusters)
      all.insert(all.end(), c.points.begin(), c.points.end());
    std::sort(all.begin(), all.end(), lex_less);
    for (std::size_t i = 1; i < all.size(); ++i)
      if (all[i] == all[i - 1])
        fail(errc::duplicate_points, "generalized_carleson_margin: clusters share a point");
  }
  if (grid.step <= 0.0 || grid.x_max < grid.x_min || grid.y_max < grid.y_min)
    fail(errc::empty_grid, "generalized_carleson_margin: empty grid");

  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  const std::size_t nx = static_cast<std::size_t>((grid.x_max - grid.x_min) / grid.step) + 1;
  const std::size_t ny = static_cast<std::size_t>((grid.y_max - grid.y_min) / grid.step) + 1;
  std::vector<double> cluster_log(partition.clusters.size());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Complex z(grid.x_min + static_cast<double>(ix) * grid.step,
                      grid.y_min + static_cast<double>(iy) * grid.step);
      if (!hp.contains(z)) continue;
      std::size_t argmin = 0;
      for (std::size_t n = 0; n < partition.clusters.size(); ++n) {
        double lg = 0.0;
        for (Complex mu : partition.clusters[n].points)
          lg += std::log(pseudo_distance(z, mu, hp));
        cluster_log[n] = lg;
        if (lg < cluster_log[argmin]) argmin = n;
      }
      double others = 0.0;
      for (std::size_t n = 0; n < partition.clusters.size(); ++n)
        if (n != argmin) others += cluster_log[n];
      best = std::min(best, std::exp(others));
      any = true;
    }
  }
  if (!any) fail(errc::empty_grid, "generalized_carleson_margin: no grid point inside half-plane");
  return best;
}

Partition adapted_partition(const NodeSequence& seq, double epsilon, int capacity) {
  if (epsilon <= 0.0) fail(errc::invalid_argument, "adapted_partition: epsilon must be positive");
  if (capacity < 1) fail(errc::invalid_argument, "adapted_partition: capacity must be >= 1");

  const auto& nodes = seq.nodes;
  const double threshold = epsilon / 4.0;
  const HalfPlane upper = HalfPlane::upper(0.0);
  const HalfPlane lower = HalfPlane::lower(0.0);

  std::vector<std::size_t> idx_upper, idx_lower, idx_strip;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].imag() > 0.0)
      idx_upper.push_back(i);
    else if (nodes[i].imag() < 0.0)
      idx_lower.push_back(i);
    else
      idx_strip.push_back(i);  // real nodes always belong to the strip part
  }

  struct FarGroup {
    std::vector<std::size_t> members;
    HalfPlane hp;
  };
  std::vector<FarGroup> far;
  auto sift = [&](const std::vector<std::size_t>& idx, const HalfPlane& hp) {
    for (auto& group : single_linkage_pseudo(nodes, idx, hp, threshold)) {
      const bool meets_strip = std::any_of(group.begin(), group.end(), [&](std::size_t i) {
        return std::abs(nodes[i].imag()) < epsilon;
      });
      if (meets_strip)
        idx_strip.insert(idx_strip.end(), group.begin(), group.end());
      else
        far.push_back({std::move(group), hp});
    }
  };
  sift(idx_upper, upper);
  sift(idx_lower, lower);

  auto strip_groups = single_linkage_euclid(nodes, idx_strip, threshold);

  auto check_group = [&](const std::vector<std::size_t>& g, double diam, const char* kind) {
    if (static_cast<int>(g.size()) > capacity) {
      std::string msg = std::string("adapted_partition: ") + kind + " group of size " +
                        std::to_string(g.size()) + " exceeds capacity " +
                        std::to_string(capacity) + " { ";
      for (std::size_t i : g) msg += point_str(nodes[i]) + " ";
      fail(errc::capacity_exceeded, msg + "}");
    }
    if (diam >= epsilon / 2.0) {
      fail(errc::capacity_exceeded, std::string("adapted_partition: ") + kind +
                                        " group diameter " + std::to_string(diam) +
                                        " is not below epsilon/2");
    }
  };

  Partition out;
  out.epsilon = epsilon;
  out.capacity = capacity;

  auto exp_sign_of = [&](const std::vector<std::size_t>& g) {
    for (std::size_t i : g)
      if (nodes[i].imag() >= 0.0) return ExpSign::plus;
    return ExpSign::minus;
  };

  for (const FarGroup& fg : far) {
    const double diam = pseudo_diameter(nodes, fg.members, fg.hp);
    check_group(fg.members, diam, "half-plane");
    out.rho0 = std::max(out.rho0, diam);
    std::vector<Complex> pts;
    for (std::size_t i : fg.members) pts.push_back(nodes[i]);
    out.clusters.push_back(make_cluster(std::move(pts), Flavor::pseudohyperbolic, fg.hp,
                                        exp_sign_of(fg.members), fg.members));
  }
  for (const auto& g : strip_groups) {
    const double diam = euclid_diameter(nodes, g);
    check_group(g, diam, "strip");
    out.rho0_strip = std::max(out.rho0_strip, diam);
    std::vector<Complex> pts;
    for (std::size_t i : g) pts.push_back(nodes[i]);
    out.clusters.push_back(
        make_cluster(std::move(pts), Flavor::euclidean, HalfPlane{}, exp_sign_of(g), g));
  }

  // Deterministic cluster order: by leading point.
  std::sort(out.clusters.begin(), out.clusters.end(), [](const Cluster& a, const Cluster& b) {
    return lex_less(a.points.front(), b.points.front());
  });

  out.membership.assign(nodes.size(), 0);
  for (std::size_t ci = 0; ci < out.clusters.size(); ++ci)
    for (std::size_t ni : out.clusters[ci].node_indices) out.membership[ni] = ci;

  // Minimal Euclidean gap between strip clusters, pruned by the x-extent.
  std::vector<const Cluster*> strip;
  for (const Cluster& c : out.clusters)
    if (c.flavor == Flavor::euclidean) strip.push_back(&c);
  std::sort(strip.begin(), strip.end(), [](const Cluster* a, const Cluster* b) {
    return lex_less(a->points.front(), b->points.front());
  });
  for (std::size_t i = 0; i < strip.size(); ++i) {
    const double x_max_i = strip[i]->points.back().real();
    for (std::size_t j = i + 1; j < strip.size(); ++j) {
      if (strip[j]->points.front().real() - x_max_i >= out.delta0_prime) break;
      out.delta0_prime = std::min(out.delta0_prime, set_distance_euclid(*strip[i], *strip[j]));
    }
  }
  return out;
}

std::vector<Cluster> neighbor_groups(const NodeSequence& seq, int capacity, double eta) {
  if (!(eta > 0.0 && eta < 0.5))
    fail(errc::eta_out_of_range, "neighbor_groups: eta must lie in (0, 1/2)");
  if (capacity < 1) fail(errc::invalid_argument, "neighbor_groups: capacity must be >= 1");

  std::vector<Cluster> out;
  out.reserve(seq.size());
  std::vector<std::size_t> order(seq.size());
  for (std::size_t center = 0; center < seq.size(); ++center) {
    std::iota(order.begin(), order.end(), 0);
    const Complex lam = seq.nodes[center];
    std::vector<double> dist(seq.size());
    for (std::size_t j = 0; j < seq.size(); ++j) dist[j] = delta_distance(lam, seq.nodes[j]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return lex_less(seq.nodes[a], seq.nodes[b]);  // ties: lower (Re, Im) wins
    });
    std::vector<Complex> pts;
    std::vector<std::size_t> idx;
    for (std::size_t r = 0; r < order.size() && static_cast<int>(pts.size()) < capacity; ++r) {
      if (dist[order[r]] >= eta) break;  // sorted: nothing closer follows
      pts.push_back(seq.nodes[order[r]]);
      idx.push_back(order[r]);
    }
    const bool near_axis = std::any_of(pts.begin(), pts.end(),
                                       [](Complex z) { return std::abs(z.imag()) < 1.0; });
    const bool touches_upper = std::any_of(pts.begin(), pts.end(),
                                           [](Complex z) { return z.imag() >= 0.0; });
    Flavor flavor = near_axis ? Flavor::euclidean : Flavor::pseudohyperbolic;
    HalfPlane hp = pts.front().imag() > 0.0 ? HalfPlane::upper(0.0) : HalfPlane::lower(0.0);
    out.push_back(make_cluster(std::move(pts), flavor, hp,
                               touches_upper ? ExpSign::plus : ExpSign::minus, std::move(idx)));
  }
  return out;
}

RectangleCover enclosing_rectangles(const Partition& partition, const HalfPlane& hp) {
  RectangleCover cover;
  const double a = hp.offset;
  for (std::size_t ci = 0; ci < partition.clusters.size(); ++ci) {
    const Cluster& c = partition.clusters[ci];
    if (c.flavor != Flavor::pseudohyperbolic) continue;
    if (c.half_plane.sign != hp.sign || c.half_plane.offset != hp.offset) continue;

    Complex centroid = 0.0;
    for (Complex z : c.points) centroid += z;
    centroid /= static_cast<double>(c.size());
    const double height = std::abs(centroid.imag() - a);
    double spread = 0.0;
    for (Complex z : c.points) spread = std::max(spread, std::abs(z - centroid));
    // Equal sides |Im z_n - a|, enlarged when a wide cluster would escape.
    // Vertical extent stays capped at 1.5 * height so the rectangle is
    // strictly inside the half-plane.
    const double side = std::max(height, 2.5 * spread);
    const double rect_h = std::min(side, 1.5 * height);

    RectangleCover::Entry e;
    e.cluster_index = ci;
    e.rect = Rect{centroid, side, rect_h};
    e.side_over_height = side / height;

    // rho distance from the cluster to the rectangle boundary, sampled.
    constexpr int kBoundarySamples = 64;
    const double hw = e.rect.width / 2.0, hh = e.rect.height / 2.0;
    auto boundary_at = [&](double t) {  // t in [0, 4), one unit per side
      if (t < 1.0) return e.rect.center + Complex(-hw + 2.0 * hw * t, -hh);
      if (t < 2.0) return e.rect.center + Complex(hw, -hh + 2.0 * hh * (t - 1.0));
      if (t < 3.0) return e.rect.center + Complex(hw - 2.0 * hw * (t - 2.0), hh);
      return e.rect.center + Complex(-hw, hh - 2.0 * hh * (t - 3.0));
    };
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Complex z : c.points) {
      if (!e.rect.contains(z))
        fail(errc::invalid_argument, "enclosing_rectangles: cluster point escapes its rectangle");
      double nearest = std::numeric_limits<double>::infinity();
      for (int s = 0; s < kBoundarySamples; ++s) {
        const double t = (s + 0.5) / kBoundarySamples * 4.0;
        nearest = std::min(nearest, pseudo_distance(z, boundary_at(t), hp));
      }
      lo = std::min(lo, nearest);
      hi = std::max(hi, nearest);
    }
    e.rho_to_boundary_min = lo;
    e.rho_to_boundary_max = hi;
    cover.entries.push_back(e);
  }

  // Pairwise separation, sampled on boundaries; overlap is an error.
  auto boundary_points = [](const Rect& r) {
    std::vector<Complex> pts;
    constexpr int kSamples = 64;
    const double hw = r.width / 2.0, hh = r.height / 2.0;
    for (int s = 0; s < kSamples; ++s) {
      const double t = static_cast<double>(s) / kSamples * 4.0;
      if (t < 1.0)
        pts.push_back(r.center + Complex(-hw + 2.0 * hw * t, -hh));
      else if (t < 2.0)
        pts.push_back(r.center + Complex(hw, -hh + 2.0 * hh * (t - 1.0)));
      else if (t < 3.0)
        pts.push_back(r.center + Complex(hw - 2.0 * hw * (t - 2.0), hh));
      else
        pts.push_back(r.center + Complex(-hw, hh - 2.0 * hh * (t - 3.0)));
    }
    return pts;
  };
  for (std::size_t i = 0; i < cover.entries.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.entries.size(); ++j) {
      const Rect& ri = cover.entries[i].rect;
      const Rect& rj = cover.entries[j].rect;
      const bool overlap =
          std::abs(ri.center.real() - rj.center.real()) <= (ri.width + rj.width) / 2.0 &&
          std::abs(ri.center.imag() - rj.center.imag()) <= (ri.height + rj.height) / 2.0;
      if (overlap)
        fail(errc::clusters_too_close, "enclosing_rectangles: rectangles of clusters " +
                                           std::to_string(cover.entries[i].cluster_index) +
                                           " and " +
                                           std::to_string(cover.entries[j].cluster_index) +
                                           " intersect");
      double sep = std::numeric_limits<double>::infinity();
      for (Complex zi : boundary_points(ri))
        for (Complex zj : boundary_points(rj)) sep = std::min(sep, pseudo_distance(zi, zj, hp));
      cover.min_pair_separation = std::min(cover.min_pair_separation, sep);
    }
  }
  return cover;
}

double empirical_density_radius(const NodeSequence& seq, double x_min, double x_max, double step) {
  if (step <= 0.0 || x_max < x_min)
    fail(errc::invalid_argument, "empirical_density_radius: bad grid");
  if (seq.size() == 0) fail(errc::invalid_sequence, "empirical_density_radius: empty sequence");
  double radius = 0.0;
  const std::size_t n = static_cast<std::size_t>((x_max - x_min) / step) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_min + static_cast<double>(i) * step;
    double d = std::numeric_limits<double>::infinity();
    for (Complex lam : seq.nodes) d = std::min(d, std::abs(Complex(x, 0.0) - lam));
    radius = std::max(radius, d);
  }
  return radius;
}

void validate_partition(const Partition& partition, const NodeSequence& seq) {
  std::vector<Complex> all;
  for (const Cluster& c : partition.clusters) {
    if (static_cast<int>(c.size()) > partition.capacity)
      fail(errc::capacity_exceeded, "validate_partition: cluster exceeds capacity");
    all.insert(all.end(), c.points.begin(), c.points.end());
  }
  if (all.size() != seq.size())
    fail(errc::invalid_argument, "validate_partition: cluster union differs from the node set");
  std::vector<Complex> expected = seq.nodes;
  std::sort(all.begin(), all.end(), lex_less);
  std::sort(expected.begin(), expected.end(), lex_less);
  if (all != expected)
    fail(errc::invalid_argument, "validate_partition: cluster union differs from the node set");
}

}  // namespace pwtrace
