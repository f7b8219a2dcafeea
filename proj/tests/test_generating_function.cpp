#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pwtrace/clustering.hpp"
#include "pwtrace/errors.hpp"
#include "pwtrace/generating_function.hpp"

using namespace pwtrace;

namespace {

constexpr double kPi = std::numbers::pi;

NodeSequence half_integer_lattice(int k_max) {
  std::vector<Complex> nodes;
  for (int k = 1; k <= k_max; ++k) {
    nodes.emplace_back(k - 0.5, 0.0);
    nodes.emplace_back(-(k - 0.5), 0.0);
  }
  return NodeSequence::from_nodes(std::move(nodes));
}

NodeSequence paired_lattice(int k_max) {
  std::vector<Complex> nodes;
  for (int k = -k_max; k <= k_max; ++k) {
    const double base = k + 0.5;
    nodes.emplace_back(base, 0.0);
    nodes.emplace_back(base + 0.5 / (1.0 + std::abs(k)), 0.0);
  }
  return NodeSequence::from_nodes(std::move(nodes));
}

}  // namespace

TEST_CASE("eval_S against the cosine product") {
  const NodeSequence seq = half_integer_lattice(10000);
  const double radius = 10000.0;
  CHECK(eval_S(seq, Complex(0.0, 0.0), radius) == Complex(1.0, 0.0));
  CHECK(eval_S(seq, Complex(0.5, 0.0), radius) == Complex(0.0, 0.0));
  const Complex at_one = eval_S(seq, Complex(1.0, 0.0), radius);
  CHECK(std::abs(at_one - Complex(-1.0, 0.0)) < 1e-3);
}

TEST_CASE("eval_S vanishes exactly on nodes inside the radius") {
  const NodeSequence seq = half_integer_lattice(100);
  for (double x : {0.5, -2.5, 17.5}) {
    CHECK(eval_S(seq, Complex(x, 0.0), 200.0) == Complex(0.0, 0.0));
  }
}

TEST_CASE("eval_S truncation gaps shrink as the radius doubles") {
  const NodeSequence seq = half_integer_lattice(2000);
  const Complex probes[4] = {{0.3, 0.0}, {1.1, 0.4}, {-0.7, 0.2}, {1.9, 0.0}};
  std::vector<double> gaps;
  double radius = 100.0;
  for (int j = 0; j < 4; ++j) {
    double gap = 0.0;
    for (Complex z : probes) {
      const Complex lo = eval_S(seq, z, radius);
      const Complex hi = eval_S(seq, z, 2.0 * radius);
      gap = std::max(gap, std::abs(lo - hi) / (1.0 + std::abs(hi)));
    }
    gaps.push_back(gap);
    radius *= 2.0;
  }
  for (std::size_t j = 1; j < gaps.size(); ++j) CHECK(gaps[j] < gaps[j - 1]);
}

TEST_CASE("eval_S_prime at a half-integer node approaches -pi") {
  const NodeSequence seq = half_integer_lattice(10000);
  const Complex sp = eval_S_prime(seq, Complex(0.5, 0.0), 10000.0);
  CHECK(std::abs(sp - Complex(-kPi, 0.0)) < 1e-3);
}

TEST_CASE("eval_S_prime single-factor product is exact") {
  const NodeSequence seq = NodeSequence::from_nodes({Complex(1.0, 0.0)});
  CHECK(eval_S_prime(seq, Complex(1.0, 0.0), 5.0) == Complex(-1.0, 0.0));
  CHECK_THROWS_AS(eval_S_prime(seq, Complex(2.0, 0.0), 5.0), Error);
}

TEST_CASE("eval_S_prime matches a central difference of eval_S") {
  const NodeSequence seq = half_integer_lattice(500);
  const double radius = 500.0;
  const double h = 1e-5;
  for (double x : {0.5, 1.5, -3.5}) {
    const Complex lam(x, 0.0);
    const Complex sp = eval_S_prime(seq, lam, radius);
    const Complex fd =
        (eval_S(seq, lam + Complex(h, 0.0), radius) - eval_S(seq, lam - Complex(h, 0.0), radius)) /
        (2.0 * h);
    CHECK(std::abs(sp - fd) < 1e-6 * (1.0 + std::abs(sp)));
  }
}

TEST_CASE("d_N on the half-integer singleton partition") {
  const NodeSequence seq = half_integer_lattice(50);
  const Partition p = adapted_partition(seq, 1.0, 1);
  const auto at_node = d_N_eval(p, 0.5);
  CHECK(at_node.value == 0.0);
  CHECK(p.clusters[at_node.cluster_index].points[0] == Complex(0.5, 0.0));
  CHECK(d_N_eval(p, 0.75).value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d_N_eval(p, 0.0).value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("d_N obeys the density and separation bounds") {
  const NodeSequence seq = paired_lattice(100);
  const Partition p = adapted_partition(seq, 1.6, 2);
  const double r = empirical_density_radius(seq, -90.0, 90.0, 0.13);
  const int capacity = 2;

  double sup_dn = 0.0;
  double min_off = std::numeric_limits<double>::infinity();
  for (double x = -90.0; x <= 90.0; x += 0.13) {
    const auto dn = d_N_eval(p, x);
    sup_dn = std::max(sup_dn, dn.value);
    // smallest product among the non-attaining clusters
    for (std::size_t m = 0; m < p.clusters.size(); ++m) {
      if (m == dn.cluster_index) continue;
      double prod = 1.0;
      for (Complex lam : p.clusters[m].points) prod *= std::abs(Complex(x, 0.0) - lam);
      min_off = std::min(min_off, prod);
    }
  }
  CHECK(sup_dn <= std::pow(r + p.delta0_prime, capacity) * (1.0 + 1e-12));
  CHECK(min_off >= std::pow(p.delta0_prime / 2.0, capacity) * (1.0 - 1e-12));
}

TEST_CASE("d_N from two admissible partitions agrees within a constant band") {
  // A mixed sequence whose grouping changes with epsilon.
  std::vector<Complex> nodes;
  for (int k = -30; k <= 30; ++k) {
    nodes.emplace_back(2.0 * k + 0.5, 0.0);
    nodes.emplace_back(2.0 * k + 0.5 + 0.3, 0.0);  // between the two linkage thresholds
  }
  const NodeSequence seq = NodeSequence::from_nodes(std::move(nodes));
  const Partition p1 = adapted_partition(seq, 0.8, 2);
  const Partition p2 = adapted_partition(seq, 1.6, 2);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.0917) {
    const double a = d_N_eval(p1, x).value;
    const double b = d_N_eval(p2, x).value;
    if (a == 0.0 || b == 0.0) continue;
    const double q = a / b;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  MESSAGE("d_N partition-robustness band: [", lo, ", ", hi, "]");
  CHECK(hi / lo < 100.0);
}

TEST_CASE("weights_omega") {
  SUBCASE("singleton clusters reduce to |S'|") {
    const NodeSequence seq = half_integer_lattice(100);
    const Partition p = adapted_partition(seq, 1.0, 1);
    const std::vector<Complex> gamma = {Complex(0.5, 0.0), Complex(-1.5, 0.0)};
    const auto w = weights_omega(seq, gamma, p, 100.0);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == std::abs(eval_S_prime(seq, gamma[0], 100.0)));
    CHECK(w[1] == std::abs(eval_S_prime(seq, gamma[1], 100.0)));
  }
  SUBCASE("half-integer weights approach pi as the lattice grows") {
    const NodeSequence seq = half_integer_lattice(2000);
    const Partition p = adapted_partition(seq, 1.0, 1);
    const std::vector<Complex> gamma = {Complex(0.5, 0.0), Complex(1.5, 0.0),
                                        Complex(-2.5, 0.0)};
    for (double w : weights_omega(seq, gamma, p, 2000.0)) {
      CHECK(w == doctest::Approx(kPi).epsilon(5e-3));
    }
    // the deviation from pi shrinks as the truncation radius grows
    double prev = std::numeric_limits<double>::infinity();
    for (double radius : {250.0, 500.0, 1000.0, 2000.0}) {
      const auto w = weights_omega(seq, {Complex(2.5, 0.0)}, p, radius);
      const double dev = std::abs(w[0] - kPi);
      CHECK(dev < prev);
      prev = dev;
    }
  }
  SUBCASE("pair cluster divides by the within-cluster gap") {
    const NodeSequence seq = NodeSequence::from_nodes({Complex(0.5, 0.0), Complex(0.6, 0.0)});
    const Partition p = adapted_partition(seq, 1.0, 2);
    const std::vector<Complex> gamma = {Complex(0.5, 0.0)};
    const auto w = weights_omega(seq, gamma, p, 10.0);
    const double sp = std::abs(eval_S_prime(seq, gamma[0], 10.0));
    CHECK(w[0] == doctest::Approx(10.0 * sp).epsilon(1e-12));
  }
}

TEST_CASE("weight_ratio_alpha") {
  const NodeSequence seq = half_integer_lattice(2000);
  const Partition p = adapted_partition(seq, 1.0, 1);
  std::vector<Complex> gamma;
  for (double x = 0.5; x <= 10.5; x += 1.0) gamma.emplace_back(x, 0.0);
  const auto omegas = weights_omega(seq, gamma, p, 2000.0);

  SUBCASE("midpoint of the cosine lattice gives ratio pi/2") {
    const auto res = weight_ratio_alpha(1.0, 0, omegas, gamma, p, seq, 2000.0);
    CHECK_FALSE(res.flagged);
    CHECK(res.alpha >= 0.0);
    CHECK(res.alpha <= 1.0);
    CHECK(res.ratio == doctest::Approx(kPi / 2.0).epsilon(1e-2));
  }
  SUBCASE("x on a real node is flagged and finite") {
    const auto res = weight_ratio_alpha(0.5, 0, omegas, gamma, p, seq, 2000.0);
    CHECK(res.flagged);
    CHECK(std::isfinite(res.ratio));
    CHECK(res.ratio > 0.0);
  }
  SUBCASE("perturbed lattice keeps the ratio in a stable band") {
    std::mt19937 rng(8080);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::vector<Complex> nodes;
    for (int k = 1; k <= 400; ++k) {
      nodes.emplace_back(k - 0.5 + jitter(rng), 0.0);
      nodes.emplace_back(-(k - 0.5) + jitter(rng), 0.0);
    }
    const NodeSequence pseq = NodeSequence::from_nodes(std::move(nodes));
    const Partition pp = adapted_partition(pseq, 1.4, 2);
    std::vector<Complex> pg;
    for (const Cluster& c : pp.clusters) {
      const Complex base = c.base_point();
      if (std::abs(base.real()) < 8.0) pg.push_back(base);
    }
    std::sort(pg.begin(), pg.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    const auto pw = weights_omega(pseq, pg, pp, 400.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t n = 0; n + 1 < pg.size(); ++n) {
      const double x = (pg[n].real() + pg[n + 1].real()) / 2.0;
      const auto res = weight_ratio_alpha(x, n, pw, pg, pp, pseq, 400.0);
      lo = std::min(lo, res.ratio);
      hi = std::max(hi, res.ratio);
    }
    MESSAGE("alpha-interpolation ratio band: [", lo, ", ", hi, "]");
    CHECK(lo > 0.0);
    CHECK(std::isfinite(hi));
  }
  SUBCASE("precondition violations throw") {
    CHECK_THROWS_AS(weight_ratio_alpha(99.0, 0, omegas, gamma, p, seq, 2000.0), Error);
  }
}

TEST_CASE("weight profile emits the CSV sentinel on node hits") {
  const NodeSequence seq = half_integer_lattice(5);
  const Partition p = adapted_partition(seq, 1.0, 1);
  const WeightProfile prof = build_weight_profile(seq, p, 2.0, 0.0, 1.0, 0.25, 10.0);
  REQUIRE(prof.x.size() == 5);
  CHECK(prof.d_n[2] == 0.0);  // x = 0.5 is a node
  CHECK(!std::isfinite(prof.weight[2]));
  std::ostringstream csv;
  prof.write_csv(csv);
  CHECK(csv.str().find("x,abs_S,d_N,weight") == 0);
  CHECK(csv.str().find("inf") != std::string::npos);
  CHECK_THROWS_AS(build_weight_profile(seq, p, 2.0, 1.0, 0.0, 0.25, 10.0), Error);
}
