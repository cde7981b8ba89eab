#include <benchmark/benchmark.h>

#include "aodep/dynamics.hpp"
#include "aodep/geometry.hpp"
#include "aodep/potentials.hpp"
#include "aodep/projection.hpp"
#include "aodep/sampling.hpp"

using namespace aodep;

namespace {

ModelParams plane(int d = 2) {
  ModelParams p;
  p.d = d;
  p.r_sphere = 1.0;
  p.r_particle = 0.1;
  return p;
}

// Spheres on a loose grid, close enough that neighbouring shells overlap.
PointSet grid(std::size_t n, int d) {
  PointSet s(d);
  std::vector<double> x(static_cast<std::size_t>(d));
  const auto side = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / d)));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    for (auto& v : x) {
      v = 2.1 * static_cast<double>(rest % side);
      rest /= side;
    }
    s.push_back(x);
  }
  return s;
}

void BM_OverlapClosed(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  double u = 0.95;
  for (auto _ : state) {
    benchmark::DoNotOptimize(overlap_volume(u, d, 1.1));
    u = u < 0.999 ? u + 1e-6 : 0.95;
  }
}
BENCHMARK(BM_OverlapClosed)->Arg(2)->Arg(3);

void BM_OverlapQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(overlap_quadrature(0.95, 4, 1.1));
}
BENCHMARK(BM_OverlapQuadrature);

void BM_EnergyGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ModelParams p = plane();
  const PointSet s = grid(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(s, p));
}
BENCHMARK(BM_EnergyGradient)->Arg(6)->Arg(64);

void BM_Projection(benchmark::State& state) {
  ModelParams p = plane();
  p.z_dot = static_cast<double>(state.range(0));
  const PointSet spheres = grid(3, 2);
  const PointSet bath = sample_bath_given_spheres(spheres, p, 8.0, 1);
  // Nudge one sphere into its neighbours' baths so a few pairs need fixing.
  Configuration cfg(spheres, bath);
  cfg.spheres[0][0] += 0.05;
  cfg.spheres[0][1] += 0.05;
  for (auto _ : state)
    benchmark::DoNotOptimize(resolve_constraints(cfg, p, Mobility::from_params(p)));
}
BENCHMARK(BM_Projection)->Arg(0)->Arg(1);

void BM_DepletionStep(benchmark::State& state) {
  ModelParams p = plane();
  p.z_dot = 3.0 / max_overlap(p);
  const auto psi = PotentialSpec::sphere_confinement(2, 1.0, 2.0);
  auto s = IntegratorState::start(Configuration(initial_cluster(static_cast<std::size_t>(state.range(0)), p), PointSet(2)), 1);
  const double dt = default_time_step(p);
  for (auto _ : state) s = step_depletion(std::move(s), p, psi, dt);
}
BENCHMARK(BM_DepletionStep)->Arg(2)->Arg(6);

void BM_TwoTypeStep(benchmark::State& state) {
  ModelParams p = plane();
  p.z_dot = 1.0;
  const PotentialPair pots{PotentialSpec::sphere_confinement(2, 2.0, 1.0),
                           PotentialSpec::particle_confinement(2, 8.0, 1.0)};
  const PointSet spheres = initial_cluster(3, p);
  const PointSet bath = sample_bath_given_spheres(spheres, p, bath_window_radius(pots.particle), 2, &pots.particle);
  auto s = IntegratorState::start(Configuration(spheres, bath), 3);
  const double dt = default_time_step(p);
  for (auto _ : state) s = step_two_type(std::move(s), p, pots, dt);
}
BENCHMARK(BM_TwoTypeStep);

void BM_MetropolisSweeps(benchmark::State& state) {
  const ModelParams p = plane();
  MCMCParams m;
  m.n_sweeps = 1000;
  m.burn_in = 100;
  const auto psi = PotentialSpec::sphere_confinement(2, 2.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_hard_spheres(static_cast<std::size_t>(state.range(0)), p, psi, m,
                                                 5.0 / max_overlap(p), 4, {}));
}
BENCHMARK(BM_MetropolisSweeps)->Arg(6);

}  // namespace
BENCHMARK_MAIN();
