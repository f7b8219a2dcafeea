#pragma once

#include <iosfwd>
#include <vector>

#include "pwtrace/clustering.hpp"
#include "pwtrace/types.hpp"

namespace pwtrace {

/// Symmetric truncation of S(z) = prod_{|lambda| < R} (1 - z/lambda).
/// Exact zero when z hits a node inside the radius. Products over more than
/// 64 factors are accumulated as log-modulus plus argument.
Complex eval_S(const NodeSequence& seq, Complex z, double radius);

/// Truncated S'(lambda) = -(1/lambda) prod_{mu != lambda, |mu| < R} (1 - lambda/mu)
/// at a node of the sequence.
Complex eval_S_prime(const NodeSequence& seq, Complex node, double radius);

struct DnValue {
  double value = 0.0;
  std::size_t cluster_index = 0;
};

/// d_N(x) = min_n prod_{lambda in tau_n} |x - lambda| with the attaining
/// cluster index; ties resolve to the lowest index.
DnValue d_N_eval(const Partition& partition, double x);

/// Group weights omega_n = |S'(gamma_n)| / prod_{lambda in sigma_{gamma_n},
/// lambda != gamma_n} |gamma_n - lambda| for a subsequence of nodes.
std::vector<double> weights_omega(const NodeSequence& seq, const std::vector<Complex>& gamma,
                                  const Partition& partition, double radius);

struct AlphaRatio {
  double alpha = 0.0;
  double ratio = 0.0;
  bool flagged = false;  // set when x had to be nudged off a node
};

/// Finds alpha in [0,1] minimizing |log(omega_n^alpha omega_{n+1}^{1-alpha}
/// d_N(x) / |S(x)|)| by ternary search and reports the achieved ratio.
/// Requires Re(gamma[n]) <= x <= Re(gamma[n+1]).
AlphaRatio weight_ratio_alpha(double x, std::size_t n, const std::vector<double>& omegas,
                              const std::vector<Complex>& gamma, const Partition& partition,
                              const NodeSequence& seq, double radius);

/// Sampled weight profile x -> (|S(x)| / d_N(x))^p along a real grid.
struct WeightProfile {
  std::vector<double> x;
  std::vector<double> abs_s;
  std::vector<double> d_n;
  std::vector<double> weight;  // +inf at node hits

  /// CSV columns exactly "x,abs_S,d_N,weight"; node hits write "inf".
  void write_csv(std::ostream& os) const;
};

WeightProfile build_weight_profile(const NodeSequence& seq, const Partition& partition, double p,
                                   double x_min, double x_max, double step, double radius);

}  // namespace pwtrace
