#include "aodep/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "aodep/analysis.hpp"
#include "aodep/contacts.hpp"
#include "aodep/geometry.hpp"
#include "aodep/random.hpp"
#include "aodep/snapshot_io.hpp"

#ifndef AODEP_VERSION
#define AODEP_VERSION "0.0.0"
#endif

namespace aodep {

std::string_view version() { return AODEP_VERSION; }

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write '" + p.string() + "'", 0);
  return out;
}

Snapshot sphere_snapshot(std::size_t step, double time, const PointSet& spheres) {
  Snapshot s;
  s.step = step;
  s.time = time;
  s.cfg = Configuration(spheres, PointSet(spheres.dim()));
  return s;
}

// Fills `result` with mode-specific entries; throws on failure.
void run_dynamics(const RunConfig& c, std::uint64_t seed, const fs::path& dir,
                  MetadataSection& result) {
  const PotentialPair pots = c.potentials();
  SimulationSettings settings = c.simulation_settings();
  settings.seed = seed;

  Configuration initial(initial_cluster(c.n_spheres, c.model), PointSet(c.model.d));
  if (c.mode == RunMode::two_type) {
    const double horizon = static_cast<double>(c.n_steps) * settings.dt;
    const double window = c.particle_radius + 4.0 * c.model.sigma_particle * std::sqrt(horizon);
    initial.particles = sample_bath_given_spheres(initial.spheres, c.model, window,
                                                  derive_seed(seed, 0xba7));
    result.emplace_back("bath_window_radius", num(window));
    result.emplace_back("particles", std::to_string(initial.particles.size()));
  }

  auto snaps = open_out(dir / "snapshots.csv");
  write_snapshot_header(snaps, c.model.d);
  std::ofstream lt;
  if (c.local_time_every_snapshot) lt = open_out(dir / "local_times.csv");
  const SimulationSummary summary =
      simulate(initial, c.model, pots, settings, [&](const Snapshot& s) {
        write_snapshot(snaps, s);
        if (c.local_time_every_snapshot && s.local_time_spheres)
          write_local_times(lt, s.step, *s.local_time_spheres,
                            s.local_time_particles ? *s.local_time_particles : RectMatrix());
      });
  if (!c.local_time_every_snapshot) {
    lt = open_out(dir / "local_times.csv");
    write_local_times(lt, summary.final_state.step, summary.final_state.local_time_spheres,
                      summary.final_state.local_time_particles);
  }
  result.emplace_back("snapshots", std::to_string(summary.snapshots));
  result.emplace_back("invariant_violations", std::to_string(summary.violations));
  result.emplace_back("final_time", num(summary.final_state.t));
  result.emplace_back("final_contact_number",
                      std::to_string(contact_number(summary.final_state.cfg.spheres, c.model,
                                                    kAnnealContactTolerance)));
}

void run_sampler(const RunConfig& c, std::uint64_t seed, const fs::path& dir,
                 MetadataSection& result) {
  const PotentialPair pots = c.potentials();
  auto snaps = open_out(dir / "snapshots.csv");
  write_snapshot_header(snaps, c.model.d);
  std::size_t k = 0, violations = 0;
  auto index_time = [&](std::size_t i) {
    return static_cast<double>(c.mcmc.burn_in + (i + 1) * c.mcmc.thinning);
  };
  ChainStats stats;
  if (c.sampler == SamplerKind::hard_spheres) {
    stats = sample_hard_spheres(c.n_spheres, c.model, pots.sphere, c.mcmc, c.model.z_dot, seed,
                                [&](const PointSet& s) {
                                  if (!is_admissible(s, c.model, c.tol_overlap)) ++violations;
                                  write_snapshot(snaps, sphere_snapshot(k, index_time(k), s));
                                  ++k;
                                });
  } else {
    stats = sample_two_type(c.n_spheres, c.model, pots, c.mcmc, seed,
                            [&](const Configuration& cfg) {
                              if (!is_admissible(cfg, c.model, c.tol_overlap)) ++violations;
                              Snapshot s;
                              s.step = k;
                              s.time = index_time(k);
                              s.cfg = cfg;
                              write_snapshot(snaps, s);
                              ++k;
                            });
  }
  result.emplace_back("samples", std::to_string(k));
  result.emplace_back("acceptance_rate", num(stats.acceptance_rate()));
  result.emplace_back("proposal_halvings", std::to_string(stats.halvings));
  result.emplace_back("invariant_violations", std::to_string(violations));
}

void run_anneal(const RunConfig& c, std::uint64_t seed, const fs::path& dir,
                MetadataSection& result) {
  const AnnealResult a = anneal_packing(c.n_spheres, c.model, c.schedule, c.mcmc, seed);
  auto snaps = open_out(dir / "snapshots.csv");
  write_snapshot_header(snaps, c.model.d);
  write_snapshot(snaps, sphere_snapshot(0, 0.0, a.best));

  auto levels = open_out(dir / "anneal_levels.csv");
  levels << "# level,z,best_energy,best_psi,contacts,running_max_contacts,acceptance\n";
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    const auto& l = a.levels[i];
    levels << i << ',' << num(l.z) << ',' << num(l.best_energy) << ',' << num(l.best_psi) << ','
           << l.contacts << ',' << l.running_max_contacts << ',' << num(l.acceptance) << '\n';
  }
  result.emplace_back("final_contact_number", std::to_string(a.best_contacts));
  try {
    result.emplace_back("max_contact_number",
                        std::to_string(max_contact_number(static_cast<long>(c.n_spheres), c.model.d)));
  } catch (const ParameterError&) {
    result.emplace_back("max_contact_number", "unknown");
  }
  result.emplace_back("best_energy", num(a.best_energy));
  result.emplace_back("invariant_violations",
                      std::to_string(is_admissible(a.best, c.model, c.tol_overlap) ? 0 : 1));
}

void run_analyze(const RunConfig& c, const fs::path& dir, MetadataSection& result) {
  const std::vector<Snapshot> stream = read_snapshots_file(c.input);
  if (stream.empty()) throw ParameterError("no snapshots in '" + c.input + "'");
  const std::size_t n = stream.front().cfg.spheres.size();
  if (c.pair_i >= n || c.pair_j >= n)
    throw ParameterError("analyze.pair_i/pair_j out of range for " + std::to_string(n) + " spheres");

  const Histogram base = Histogram::uniform(2.0 * c.model.r_sphere, c.r_max, c.bin_width);
  const Histogram h = pair_distance_histogram(stream, c.pair_i, c.pair_j, base.edges);
  auto write_hist = [&](const fs::path& p, const Histogram& hist) {
    auto out = open_out(p);
    out << "# lo,hi,count\n";
    for (std::size_t b = 0; b < hist.bins(); ++b)
      out << num(hist.edges[b]) << ',' << num(hist.edges[b + 1]) << ',' << hist.counts[b] << '\n';
    out << "# underflow " << hist.underflow << " overflow " << hist.overflow << '\n';
  };
  write_hist(dir / "histogram.csv", h);

  std::vector<double> dist;
  std::size_t violations = 0;
  dist.reserve(stream.size());
  for (const auto& s : stream) {
    dist.push_back(distance(s.cfg.spheres[c.pair_i], s.cfg.spheres[c.pair_j]));
    if (!is_admissible(s.cfg, c.model, c.tol_overlap)) ++violations;
  }
  result.emplace_back("snapshots", std::to_string(stream.size()));
  result.emplace_back("histogram_total", std::to_string(h.total));
  result.emplace_back("effective_sample_size", num(effective_sample_size(dist)));
  result.emplace_back("invariant_violations", std::to_string(violations));

  if (!c.reference.empty()) {
    const std::vector<Snapshot> ref = read_snapshots_file(c.reference);
    const Histogram hr = pair_distance_histogram(ref, c.pair_i, c.pair_j, base.edges);
    write_hist(dir / "reference_histogram.csv", hr);
    const double ks = ks_statistic(h, hr);
    const double crit = ks_critical_value(0.05, static_cast<double>(h.total),
                                          static_cast<double>(hr.total));
    auto out = open_out(dir / "ks.txt");
    out << "ks_statistic = " << num(ks) << "\ncritical_value_0.05 = " << num(crit) << '\n';
    result.emplace_back("ks_statistic", num(ks));
    result.emplace_back("ks_critical_value_0.05", num(crit));
  }
}

RunOutcome run_one(const RunConfig& c, std::uint64_t seed, const fs::path& dir) {
  RunOutcome outcome;
  MetadataSection result;
  result.emplace_back("version", std::string(version()));
  result.emplace_back("seed", std::to_string(seed));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fs::create_directories(dir);
    switch (c.mode) {
      case RunMode::two_type:
      case RunMode::depletion: run_dynamics(c, seed, dir, result); break;
      case RunMode::sample_equilibrium: run_sampler(c, seed, dir, result); break;
      case RunMode::anneal_pack: run_anneal(c, seed, dir, result); break;
      case RunMode::analyze: run_analyze(c, dir, result); break;
    }
  } catch (const std::exception& e) {
    outcome.exit_code = kExitRuntimeError;
    outcome.message = e.what();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.emplace_back("wall_time_s", num(wall));
  result.emplace_back("status", outcome.exit_code == kExitOk ? "ok" : "error");
  if (!outcome.message.empty()) result.emplace_back("error", outcome.message);
  for (std::size_t i = 0; i < c.warnings.size(); ++i)
    result.emplace_back("warning_" + std::to_string(i), c.warnings[i]);

  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream meta(dir / "metadata.txt", std::ios::binary);
  meta << c.to_text() << '\n';
  write_metadata(meta, {{"result", result}});
  if (!meta && outcome.exit_code == kExitOk) {
    outcome.exit_code = kExitRuntimeError;
    outcome.message = "cannot write metadata in '" + dir.string() + "'";
  }
  return outcome;
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options) {
  if (config.replicas <= 1) return run_one(config, config.seed, options.out_dir);

  const std::size_t k = config.replicas;
  std::vector<RunOutcome> outcomes(k);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r; (r = next.fetch_add(1)) < k;)
      outcomes[r] = run_one(config, derive_seed(config.seed, r),
                            options.out_dir / ("replica_" + std::to_string(r)));
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(k)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Merge in replica order so the summary does not depend on scheduling.
  RunOutcome merged;
  MetadataSection summary;
  for (std::size_t r = 0; r < k; ++r) {
    summary.emplace_back("replica_" + std::to_string(r),
                         outcomes[r].exit_code == kExitOk ? "ok" : "error: " + outcomes[r].message);
    if (outcomes[r].exit_code != kExitOk && merged.exit_code == kExitOk) merged = outcomes[r];
  }
  std::ofstream meta(options.out_dir / "metadata.txt", std::ios::binary);
  meta << config.to_text() << '\n';
  write_metadata(meta, {{"replicas", summary}});
  return merged;
}

}  // namespace aodep
