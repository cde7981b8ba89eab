#include "aodep/dynamics.hpp"

#include <cmath>

#include "aodep/geometry.hpp"

namespace aodep {

namespace {

void ensure_accumulators(IntegratorState& s) {
  const std::size_t n = s.cfg.spheres.size();
  const std::size_t m = s.cfg.particles.size();
  if (s.local_time_spheres.size() != n) s.local_time_spheres = SymmetricMatrix(n);
  if (s.local_time_particles.rows() != n || s.local_time_particles.cols() != m)
    s.local_time_particles = RectMatrix(n, m);
}

void credit_ledger(IntegratorState& s, std::vector<LedgerEntry> ledger) {
  for (const auto& e : ledger) {
    if (e.pair.kind == BodyPair::Kind::sphere_sphere)
      s.local_time_spheres.add(e.pair.first, e.pair.second, e.local_time);
    else
      s.local_time_particles.add(e.pair.first, e.pair.second, e.local_time);
  }
  s.last_ledger = std::move(ledger);
}

double sphere_psi_coefficient(const ModelParams& params, const IntegratorSettings& st,
                              DynamicsMode mode) {
  const double sigma = params.sigma_sphere;
  if (st.sphere_drift == DriftConvention::reversible) return 0.5 * sigma * sigma;
  return mode == DynamicsMode::two_type ? 0.5 * sigma : 0.5;
}

void check_step(double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
}

}  // namespace

IntegratorState IntegratorState::start(Configuration cfg, std::uint64_t seed) {
  IntegratorState s;
  s.cfg = std::move(cfg);
  s.rng = CounterRng(seed);
  ensure_accumulators(s);
  return s;
}

double default_time_step(const ModelParams& params) {
  const double diameter = 2.0 * params.r_sphere;
  const double sigma = params.sigma_sphere > 0.0 ? params.sigma_sphere : 1.0;
  return 1e-4 * diameter * diameter / (sigma * sigma);
}

namespace {

void advance_two_type(IntegratorState& state, const ModelParams& params,
                      const PotentialPair& potentials, double dt,
                      const IntegratorSettings& settings) {
  check_step(dt);
  require_dimension(state.cfg, params);
  ensure_accumulators(state);
  const auto d = static_cast<std::size_t>(params.d);
  const double sqdt = std::sqrt(dt) * settings.noise_scale;
  const double cs = sphere_psi_coefficient(params, settings, DynamicsMode::two_type);
  double cp = 0.5 * params.sigma_particle * params.sigma_particle;
  if (settings.particle_drift_sigma_sphere) cp *= params.sigma_sphere;

  std::vector<double> grad(d);
  auto& spheres = state.cfg.spheres;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    auto x = spheres[i];
    psi_value_and_grad(potentials.sphere, x, grad);
    for (std::size_t k = 0; k < d; ++k)
      x[k] += params.sigma_sphere * sqdt * state.rng.normal() - cs * grad[k] * dt;
  }
  auto& particles = state.cfg.particles;
  for (std::size_t p = 0; p < particles.size(); ++p) {
    auto x = particles[p];
    psi_value_and_grad(potentials.particle, x, grad);
    for (std::size_t k = 0; k < d; ++k)
      x[k] += params.sigma_particle * sqdt * state.rng.normal() - cp * grad[k] * dt;
  }

  ProjectionSettings ps;
  ps.max_iters = settings.max_proj_iters;
  auto projected = resolve_constraints(std::move(state.cfg), params,
                                       Mobility::from_params(params), ps);
  state.cfg = std::move(projected.cfg);
  credit_ledger(state, std::move(projected.ledger));
  state.t += dt;
  ++state.step;
}

// Drift per unit time, flat n * d, written into `out`.
void depletion_drift_into(const PointSet& spheres, const ModelParams& params,
                          const PotentialSpec& sphere_potential,
                          const IntegratorSettings& settings, std::vector<double>& out) {
  const auto d = static_cast<std::size_t>(params.d);
  const double cpsi = sphere_psi_coefficient(params, settings, DynamicsMode::depletion);
  double cenergy = 0.5 * params.z_dot;
  if (settings.sphere_drift == DriftConvention::reversible)
    cenergy *= params.sigma_sphere * params.sigma_sphere;

  out.assign(spheres.size() * d, 0.0);
  if (params.z_dot > 0.0) {
    energy_gradient_into(spheres, params, out);
    for (double& v : out) v *= -cenergy;
  }
  thread_local std::vector<double> grad;
  grad.resize(d);
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    psi_value_and_grad(sphere_potential, spheres[i], grad);
    for (std::size_t k = 0; k < d; ++k) out[i * d + k] -= cpsi * grad[k];
  }
}

bool spheres_overlap(const PointSet& spheres, double min2) {
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (std::size_t j = i + 1; j < spheres.size(); ++j)
      if (squared_distance(spheres[i], spheres[j]) < min2) return true;
  return false;
}

void advance_depletion(IntegratorState& state, const ModelParams& params,
                       const PotentialSpec& sphere_potential, double dt,
                       const IntegratorSettings& settings) {
  check_step(dt);
  require_dimension(state.cfg, params);
  ensure_accumulators(state);
  const auto d = static_cast<std::size_t>(params.d);
  const double sqdt = std::sqrt(dt) * settings.noise_scale;

  thread_local std::vector<double> drift;
  depletion_drift_into(state.cfg.spheres, params, sphere_potential, settings, drift);
  auto& spheres = state.cfg.spheres;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    auto x = spheres[i];
    for (std::size_t k = 0; k < d; ++k)
      x[k] += params.sigma_sphere * sqdt * state.rng.normal() + drift[i * d + k] * dt;
  }

  ProjectionSettings ps;
  ps.max_iters = settings.max_proj_iters;
  ps.particles = false;
  const double min = 2.0 * params.r_sphere * (1.0 - ps.slack);
  if (spheres_overlap(spheres, min * min)) {
    auto projected = resolve_constraints(std::move(state.cfg), params,
                                         Mobility::from_params(params), ps);
    state.cfg = std::move(projected.cfg);
    credit_ledger(state, std::move(projected.ledger));
  } else {
    // Nothing violated: the projection would be the identity with an empty ledger.
    state.last_ledger.clear();
  }
  state.t += dt;
  ++state.step;
}

}  // namespace

PointSet depletion_drift(const PointSet& spheres, const ModelParams& params,
                         const PotentialSpec& sphere_potential,
                         const IntegratorSettings& settings) {
  require_dimension(spheres, params);
  std::vector<double> flat;
  depletion_drift_into(spheres, params, sphere_potential, settings, flat);
  return PointSet(params.d, std::move(flat));
}

IntegratorState step_two_type(IntegratorState state, const ModelParams& params,
                              const PotentialPair& potentials, double dt,
                              const IntegratorSettings& settings) {
  advance_two_type(state, params, potentials, dt, settings);
  return state;
}

IntegratorState step_depletion(IntegratorState state, const ModelParams& params,
                               const PotentialSpec& sphere_potential, double dt,
                               const IntegratorSettings& settings) {
  advance_depletion(state, params, sphere_potential, dt, settings);
  return state;
}

SimulationSummary simulate(const Configuration& initial, const ModelParams& params,
                           const PotentialPair& potentials,
                           const SimulationSettings& settings, const SnapshotSink& sink) {
  params.validate();
  require_dimension(initial, params);
  if (settings.record_every == 0) throw ParameterError("record_every must be >= 1");
  const double dt = settings.dt > 0.0 ? settings.dt : default_time_step(params);

  SimulationSummary summary;
  IntegratorState state = IntegratorState::start(initial, settings.seed);

  auto emit = [&](const IntegratorState& s) {
    Snapshot snap;
    snap.step = s.step;
    snap.time = s.t;
    snap.cfg = s.cfg;
    if (settings.local_time_every_snapshot) {
      snap.local_time_spheres = s.local_time_spheres;
      snap.local_time_particles = s.local_time_particles;
    }
    if (!is_admissible(s.cfg, params, settings.integrator.tol_overlap)) ++summary.violations;
    ++summary.snapshots;
    if (sink) sink(snap);
  };

  emit(state);
  for (std::size_t k = 1; k <= settings.n_steps; ++k) {
    try {
      if (settings.mode == DynamicsMode::two_type)
        advance_two_type(state, params, potentials, dt, settings.integrator);
      else
        advance_depletion(state, params, potentials.sphere, dt, settings.integrator);
    } catch (const Error& e) {
      throw RuntimeFailure("step " + std::to_string(k) + ": " + e.what(), k);
    }
    if (k % settings.record_every == 0) emit(state);
  }
  summary.final_state = std::move(state);
  return summary;
}

std::vector<Snapshot> simulate_to_vector(const Configuration& initial,
                                         const ModelParams& params,
                                         const PotentialPair& potentials,
                                         const SimulationSettings& settings) {
  std::vector<Snapshot> out;
  simulate(initial, params, potentials, settings,
           [&](const Snapshot& s) { out.push_back(s); });
  return out;
}

}  // namespace aodep
