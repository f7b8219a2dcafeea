#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwtrace/clustering.hpp"
#include "pwtrace/divided_differences.hpp"
#include "pwtrace/generating_function.hpp"
#include "pwtrace/muckenhoupt.hpp"
#include "pwtrace/types.hpp"

namespace pwtrace {

/// An entire function handed around as an evaluator plus its declared
/// exponential type.
struct BandlimitedFunction {
  std::function<Complex(Complex)> evaluator;
  double declared_type = 0.0;
  std::string description;

  Complex operator()(Complex z) const { return evaluator(z); }
};

/// Restriction operator: samples f on the node set.
TraceData restrict_trace(const BandlimitedFunction& f, const NodeSequence& seq);

/// Adapted-partition trace norm: sum_n (1 + |Im lambda_{n,0}|) sum_k
/// |DD^{k-1}(a e^{+-i tau .})|^p, all to the power 1/p. Divided-difference
/// flavor and exponential sign follow each cluster.
double trace_norm_partition(const TraceData& trace, const Partition& partition,
                            const SpaceParams& params);

/// Neighbor-group trace norm: the same sum ranging over the per-node groups
/// sigma_lambda built from capacity and eta.
double trace_norm_neighbors(const TraceData& trace, const NodeSequence& seq,
                            const SpaceParams& params, double eta);

/// Hardy-space trace norm sum_n |Im(lambda_{n,0}) - a| sum_k |DD^{k-1}(a)|^p
/// for a partition whose clusters are all pseudohyperbolic in hp.
double trace_norm_halfplane(const TraceData& trace, const Partition& partition,
                            const HalfPlane& hp, double p);

/// Per-cluster norm contributions, for report output.
struct ClusterNormTerms {
  std::size_t cluster_index = 0;
  double weight = 0.0;
  std::vector<double> term_p;  // |DD^{k-1}|^p, k = 1..|cluster|
  double contribution = 0.0;   // weight * sum(term_p)
};
std::vector<ClusterNormTerms> partition_norm_terms(const TraceData& trace,
                                                   const std::vector<Cluster>& clusters,
                                                   double tau, double p, bool modify_by_exp,
                                                   const std::vector<double>& weights);

/// Cardinal series f(z) = sum_lambda a(lambda) S(z) / (S'(lambda)(z-lambda)).
/// Evaluation within 1e-8 (1+|lambda|) of a support node switches the
/// lambda-term to its limit a(lambda).
BandlimitedFunction cardinal_interpolant(const TraceData& trace, const NodeSequence& seq,
                                         double radius);

/// sin(tau (z - x0)) / (tau (z - x0)) with the removable singularity filled.
BandlimitedFunction sinc_kernel(double x0, double tau);

/// Trapezoid estimate of (integral_{-T}^{T} |f(x)|^p dx)^{1/p}.
double pw_lp_norm(const BandlimitedFunction& f, double p, double window, double step);

struct PlancherelResult {
  double ratio = 0.0;
  bool flagged = false;  // zero-norm input
};

/// integral |f(x+ia)|^p dx divided by e^{tau p |a|} ||f||_p^p; equals 1
/// exactly at a = 0 and must not exceed 1 + quadrature tolerance.
PlancherelResult plancherel_polya_ratio(const BandlimitedFunction& f, double p, double a,
                                        double tau, double window, double step);

/// |f(z)| (1 + |Im z|)^{1/p} e^{-tau |Im z|} / norm.
double pointwise_bound_ratio(const BandlimitedFunction& f, double p, double tau, Complex z,
                             double norm);

/// Relative gap between the contour integral of numerator/denominator over
/// the rectangle boundary and 2 pi i times the sum of residues at the cluster
/// nodes (simple poles). Contour: composite 4-point Gauss per panel;
/// residues: small-circle means around each node.
double residue_identity_gap(const Rect& rect, const std::function<Complex(Complex)>& numerator,
                            const std::function<Complex(Complex)>& denominator,
                            const Cluster& cluster, int panels_per_side = 1024);

struct ConditionEntry {
  std::string name;
  std::string verdict;  // "pass" | "fail" | "inconclusive"
  nlohmann::json evidence;
  std::string notes;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;

  const ConditionEntry* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Grid and threshold choices for the condition checks. Zero window bounds
/// mean: derive from the node range.
struct CheckGrids {
  std::vector<double> a_values{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  double x_min = 0.0;
  double x_max = 0.0;
  double step = 0.25;
  std::vector<double> scales{0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  int discrete_max_window = 128;
  double radius = 0.0;  // 0: cover every node
  double density_threshold = 5.0;
  double carleson_floor = 0.01;
  double s_trend_tol = 0.05;
};

/// Condition set with per-half-plane Carleson constants, relative density,
/// S-truncation trend, the continuous A_p profile of (|S|/d(.,Lambda))^p and
/// the discrete A_p profile of |S'(gamma_n)|^p on a thinned subsequence.
ConditionReport check_ls(const NodeSequence& seq, const SpaceParams& params,
                         const CheckGrids& grids);

/// Capacity-N analogue: same entries with d_N in the continuous weight,
/// omega_n in the discrete weight and a greedy N-coloring behind the
/// per-half-plane Carleson evidence. At capacity 1 the computed numbers
/// coincide with check_ls. Throws partition_failed when the adapted
/// partition cannot be built.
ConditionReport check_hn(const NodeSequence& seq, const SpaceParams& params,
                         const CheckGrids& grids);

}  // namespace pwtrace
