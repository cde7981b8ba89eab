#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "aodep/analysis.hpp"
#include "aodep/geometry.hpp"
#include "aodep/sampling.hpp"

using namespace aodep;
using namespace aodep::testing;

TEST_CASE("histograms") {
  SUBCASE("single snapshot") {
    const std::vector<PointSet> stream = {points(2, {0, 0, 2.37, 0})};
    const Histogram h = pair_distance_histogram(stream, 0, 1, Histogram::uniform(2.0, 3.0, 0.1).edges);
    CHECK(h.total == 1);
    for (std::size_t b = 0; b < h.bins(); ++b) {
      const bool holds = h.edges[b] <= 2.37 && 2.37 < h.edges[b + 1];
      CHECK(h.counts[b] == (holds ? 1u : 0u));
    }
  }
  SUBCASE("hard core leaves the bins below contact empty") {
    const ModelParams p = params2();
    MCMCParams m;
    m.n_sweeps = 3000;
    m.burn_in = 100;
    std::vector<PointSet> stream;
    sample_hard_spheres(2, p, PotentialSpec::sphere_confinement(2, 1.0, 1.0), m, 3.0 / max_overlap(p), 1,
                        [&](const PointSet& s) { stream.push_back(s); });
    const Histogram h = pair_distance_histogram(stream, 0, 1, Histogram::uniform(0.0, 12.0, 0.01).edges);
    for (std::size_t b = 0; b < h.bins(); ++b)
      if (h.edges[b + 1] <= 2.0 * (1 - kDefaultOverlapTolerance)) CHECK(h.counts[b] == 0);
    std::uint64_t sum = 0;
    for (auto c : h.counts) sum += c;
    CHECK(sum == h.total);
    CHECK(h.total + h.overflow + h.underflow == stream.size());
  }
  SUBCASE("rebinning conserves mass") {
    CounterRng rng(1);
    Histogram h = Histogram::uniform(0.0, 1.0, 0.01);
    for (int k = 0; k < 5000; ++k) h.add(1.2 * rng.uniform() - 0.1);
    std::vector<double> coarse;
    for (std::size_t k = 0; k < h.edges.size(); k += 10) coarse.push_back(h.edges[k]);
    const Histogram c = h.rebinned(coarse);
    CHECK(c.total == h.total);
    CHECK(c.underflow == h.underflow);
    CHECK(c.overflow == h.overflow);
    std::vector<double> inner(h.edges.begin() + 20, h.edges.begin() + 71);
    const Histogram part = h.rebinned(inner);
    CHECK(part.total + part.underflow + part.overflow == h.total + h.underflow + h.overflow);
    CHECK_THROWS_AS(h.rebinned({0.0, 0.005, 1.0}), ParameterError);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(Histogram({1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(pair_distance_histogram(std::vector<PointSet>{}, 0, 1, {0.0, 1.0}), ParameterError);
    const std::vector<PointSet> one = {points(2, {0, 0, 1, 0})};
    CHECK_THROWS_AS(pair_distance_histogram(one, 0, 0, {0.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(pair_distance_histogram(one, 0, 2, {0.0, 1.0}), ParameterError);
  }
}

TEST_CASE("two-sample KS on bins") {
  Histogram a = Histogram::uniform(0.0, 4.0, 1.0), b = a, c = a;
  a.add(0.5);
  a.add(1.5);
  b.add(0.5);
  b.add(1.5);
  c.add(3.5);
  CHECK(ks_statistic(a, b) == 0.0);
  CHECK(ks_statistic(a, c) == 1.0);
  CHECK(ks_statistic(a, c) == ks_statistic(c, a));
  CHECK_THROWS_AS(ks_statistic(a, Histogram::uniform(0.0, 4.0, 0.5)), ParameterError);
  CHECK(ks_critical_value(0.01, 1e4, 1e4) == doctest::Approx(1.6276 * std::sqrt(2.0 / 1e4)).epsilon(1e-3));

  SUBCASE("independent chains of one target") {
    const ModelParams p = params2();
    const auto psi = PotentialSpec::sphere_confinement(2, 0.0, 2.0);
    MCMCParams m;
    m.n_sweeps = 201000;
    m.burn_in = 1000;
    m.thinning = 20;
    const Histogram base = Histogram::uniform(2.0, 10.0, default_bin_width(p));
    Histogram h1(base.edges), h2(base.edges);
    std::vector<double> s1;
    sample_hard_spheres(2, p, psi, m, 0.0, 11, [&](const PointSet& s) {
      s1.push_back(distance(s[0], s[1]));
      h1.add(s1.back());
    });
    sample_hard_spheres(2, p, psi, m, 0.0, 12, [&](const PointSet& s) { h2.add(distance(s[0], s[1])); });
    CHECK(h1.total == 10000);
    CHECK(effective_sample_size(s1) > 5000);
    CHECK(ks_statistic(h1, h2) < 1.63 * std::sqrt(2.0 / 1e4));
    CHECK(ks_statistic(h1, h2) == ks_statistic(h2, h1));
  }
}

TEST_CASE("autocorrelation time") {
  CounterRng rng(3);
  std::vector<double> iid(100000);
  for (auto& v : iid) v = rng.normal();
  CHECK(integrated_autocorrelation_time(iid) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(effective_sample_size(iid) == doctest::Approx(1e5).epsilon(0.1));

  // AR(1) with coefficient phi has tau = (1 + phi) / (1 - phi).
  const double phi = 0.9;
  std::vector<double> ar(400000);
  double x = 0.0;
  for (auto& v : ar) {
    x = phi * x + std::sqrt(1 - phi * phi) * rng.normal();
    v = x;
  }
  CHECK(integrated_autocorrelation_time(ar) == doctest::Approx(19.0).epsilon(0.1));
  std::vector<double> flat(100, 2.0);
  CHECK(integrated_autocorrelation_time(flat) == 1.0);
}

TEST_CASE("modulus of continuity") {
  const double h = 1e-3;
  PointSet constant(2), line(2);
  for (int k = 0; k <= 1000; ++k) {
    constant.push_back(std::vector<double>{1.0, -2.0});
    line.push_back(std::vector<double>{3.0 * k * h, 0.0});
  }
  CHECK(modulus_of_continuity(constant, h, 0.05) == 0.0);
  const double w = modulus_of_continuity(line, h, 0.05);
  CHECK(w <= 3.0 * 0.05);
  CHECK(w >= 3.0 * (0.05 - h));
  CHECK_THROWS_AS(modulus_of_continuity(line, h, h), ParameterError);

  SUBCASE("monotone in delta") {
    CounterRng rng(5);
    PointSet path(1);
    double b = 0.0;
    for (int k = 0; k < 2000; ++k) {
      b += std::sqrt(h) * rng.normal();
      path.push_back(std::vector<double>{b});
    }
    double prev = 0.0;
    for (double delta : {0.002, 0.005, 0.01, 0.02, 0.1, 0.5}) {
      const double v = modulus_of_continuity(path, h, delta);
      CHECK(v >= prev);
      prev = v;
    }
  }
  SUBCASE("Brownian paths sit near the Levy modulus") {
    const double step = 2e-4;
    const int n = 5000;
    std::vector<double> w(1000);
    for (std::size_t r = 0; r < w.size(); ++r) {
      CounterRng rng(derive_seed(6, r));
      PointSet path(1);
      double b = 0.0;
      path.push_back(std::vector<double>{b});
      for (int k = 0; k < n; ++k) {
        b += std::sqrt(step) * rng.normal();
        path.push_back(std::vector<double>{b});
      }
      w[r] = modulus_of_continuity(path, step, 0.01);
    }
    std::nth_element(w.begin(), w.begin() + 500, w.end());
    CHECK(w[500] >= 0.1);
    CHECK(w[500] <= 0.5);
  }
}

TEST_CASE("energy traces") {
  const ModelParams p = params2();
  const double ball = std::numbers::pi * p.r_depletion() * p.r_depletion();
  const std::vector<PointSet> isolated = {points(2, {0, 0, 5, 0}), points(2, {1, 1, -9, 3})};
  for (double e : energy_trace(isolated, p)) CHECK(e == doctest::Approx(2 * ball).epsilon(1e-15));

  std::vector<PointSet> stream;
  AnnealSchedule s = AnnealSchedule::defaults(p);
  s.n_levels = 4;
  s.sweeps_per_level = 500;
  MCMCParams m;
  m.burn_in = 100;
  anneal_packing(3, p, s, m, 9, [&](const PointSet& x) { stream.push_back(x); });
  REQUIRE(stream.size() > 100);
  const auto trace = energy_trace(stream, p);
  const auto run = running_minimum(trace);
  for (std::size_t k = 1; k < run.size(); ++k) {
    CHECK(run[k] <= run[k - 1]);
    CHECK(run[k] <= trace[k]);
  }
}
