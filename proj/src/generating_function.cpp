#include "pwtrace/generating_function.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pwtrace/errors.hpp"
#include "pwtrace/parallel.hpp"

namespace pwtrace {

namespace {

// Complex product that switches to log-modulus + argument accumulation for
// long factor lists. A single zero factor short-circuits to an exact zero.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(std::size_t expected_factors)
      : log_mode_(expected_factors > 64) {}

  void multiply(Complex t) {
    if (zero_) return;
    if (t == Complex(0.0, 0.0)) {
      zero_ = true;
      return;
    }
    if (log_mode_) {
      log_modulus_ += std::log(std::abs(t));
      argument_ += std::arg(t);
    } else {
      direct_ *= t;
    }
  }

  Complex value() const {
    if (zero_) return {0.0, 0.0};
    if (log_mode_) return std::polar(std::exp(log_modulus_), argument_);
    return direct_;
  }

 private:
  bool log_mode_;
  bool zero_ = false;
  double log_modulus_ = 0.0;
  double argument_ = 0.0;
  Complex direct_{1.0, 0.0};
};

}  // namespace

Complex eval_S(const NodeSequence& seq, Complex z, double radius) {
  if (radius <= 0.0) fail(errc::invalid_argument, "eval_S: radius must be positive");
  std::size_t count = 0;
  for (Complex lam : seq.nodes)
    if (std::abs(lam) < radius) ++count;
  ProductAccumulator prod(count);
  for (Complex lam : seq.nodes) {
    if (std::abs(lam) < radius) prod.multiply(1.0 - z / lam);
  }
  return prod.value();
}

Complex eval_S_prime(const NodeSequence& seq, Complex node, double radius) {
  if (radius <= 0.0) fail(errc::invalid_argument, "eval_S_prime: radius must be positive");
  bool found = false;
  for (Complex lam : seq.nodes)
    if (lam == node) {
      found = true;
      break;
    }
  if (!found) fail(errc::node_not_in_sequence, "eval_S_prime: lambda is not a node");

  std::size_t count = 0;
  for (Complex mu : seq.nodes)
    if (mu != node && std::abs(mu) < radius) ++count;
  ProductAccumulator prod(count);
  for (Complex mu : seq.nodes) {
    if (mu == node || std::abs(mu) >= radius) continue;
    prod.multiply(1.0 - node / mu);
  }
  return -prod.value() / node;
}

DnValue d_N_eval(const Partition& partition, double x) {
  if (partition.clusters.empty()) fail(errc::invalid_argument, "d_N_eval: empty partition");
  DnValue best{std::numeric_limits<double>::infinity(), 0};
  const Complex zx(x, 0.0);
  for (std::size_t n = 0; n < partition.clusters.size(); ++n) {
    double p = 1.0;
    for (Complex lam : partition.clusters[n].points) p *= std::abs(zx - lam);
    if (p < best.value) best = {p, n};
  }
  return best;
}

std::vector<double> weights_omega(const NodeSequence& seq, const std::vector<Complex>& gamma,
                                  const Partition& partition, double radius) {
  std::vector<double> out;
  out.reserve(gamma.size());
  for (Complex g : gamma) {
    std::size_t node_index = seq.size();
    for (std::size_t i = 0; i < seq.size(); ++i)
      if (seq.nodes[i] == g) {
        node_index = i;
        break;
      }
    if (node_index == seq.size())
      fail(errc::node_not_in_sequence, "weights_omega: gamma entry is not a node");
    const Cluster& cluster = partition.clusters.at(partition.membership.at(node_index));
    double denom = 1.0;
    for (Complex lam : cluster.points)
      if (lam != g) denom *= std::abs(g - lam);
    out.push_back(std::abs(eval_S_prime(seq, g, radius)) / denom);
  }
  return out;
}

AlphaRatio weight_ratio_alpha(double x, std::size_t n, const std::vector<double>& omegas,
                              const std::vector<Complex>& gamma, const Partition& partition,
                              const NodeSequence& seq, double radius) {
  if (n + 1 >= omegas.size() || omegas.size() != gamma.size())
    fail(errc::invalid_argument, "weight_ratio_alpha: need weights for gamma_n and gamma_{n+1}");
  if (!(gamma[n].real() <= x && x <= gamma[n + 1].real()))
    fail(errc::invalid_argument, "weight_ratio_alpha: x outside [Re gamma_n, Re gamma_{n+1}]");

  AlphaRatio result;
  double xe = x;
  const double s_floor = 1e-12 * (1.0 + std::abs(x));
  double abs_s = std::abs(eval_S(seq, Complex(xe, 0.0), radius));
  if (abs_s < s_floor) {
    double node_dist = std::numeric_limits<double>::infinity();
    for (Complex lam : seq.nodes) node_dist = std::min(node_dist, std::abs(Complex(x, 0.0) - lam));
    const double nudge = 1e-6 * (1.0 + std::abs(x));
    if (node_dist > nudge)
      fail(errc::s_zero, "weight_ratio_alpha: |S(x)| vanishes away from the nodes");
    result.flagged = true;
    xe = x + nudge;
    abs_s = std::abs(eval_S(seq, Complex(xe, 0.0), radius));
    if (abs_s < s_floor) fail(errc::s_zero, "weight_ratio_alpha: |S| vanishes near x");
  }
  const double d = d_N_eval(partition, xe).value;
  const double log_wn = std::log(omegas[n]);
  const double log_wn1 = std::log(omegas[n + 1]);
  const double offset = std::log(d) - std::log(abs_s);
  const auto objective = [&](double a) {
    return std::abs(a * log_wn + (1.0 - a) * log_wn1 + offset);
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  result.alpha = (lo + hi) / 2.0;
  result.ratio = std::exp(result.alpha * log_wn + (1.0 - result.alpha) * log_wn1 + offset);
  return result;
}

void WeightProfile::write_csv(std::ostream& os) const {
  os << "x,abs_S,d_N,weight\n";
  char buf[160];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isfinite(weight[i])) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", x[i], abs_s[i], d_n[i],
                    weight[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,inf\n", x[i], abs_s[i], d_n[i]);
    }
    os << buf;
  }
}

WeightProfile build_weight_profile(const NodeSequence& seq, const Partition& partition, double p,
                                   double x_min, double x_max, double step, double radius) {
  if (step <= 0.0 || x_max < x_min) fail(errc::empty_grid, "build_weight_profile: empty grid");
  const std::size_t count = static_cast<std::size_t>((x_max - x_min) / step) + 1;
  WeightProfile prof;
  prof.x.resize(count);
  prof.abs_s.resize(count);
  prof.d_n.resize(count);
  prof.weight.resize(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = x_min + static_cast<double>(i) * step;
      const double abs_s = std::abs(eval_S(seq, Complex(x, 0.0), radius));
      const double d = d_N_eval(partition, x).value;
      prof.x[i] = x;
      prof.abs_s[i] = abs_s;
      prof.d_n[i] = d;
      prof.weight[i] = d == 0.0 ? std::numeric_limits<double>::infinity()
                                : std::pow(abs_s / d, p);
    }
  });
  return prof;
}

}  // namespace pwtrace
