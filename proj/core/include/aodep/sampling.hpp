#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aodep/model.hpp"
#include "aodep/potentials.hpp"

namespace aodep {

struct MCMCParams {
  double proposal_sigma = 0.5;  // initial per-sphere proposal scale
  std::size_t n_sweeps = 10'000;  // total sweeps, burn-in included
  std::size_t burn_in = 1'000;
  std::size_t thinning = 1;
  bool adapt = true;  // tune proposal scales during burn-in
  /// Keep tuning after burn-in as well. The chain is then not homogeneous;
  /// meant for optimisation only.
  bool adapt_throughout = false;
  /// With this probability a proposal uses the fixed scale jump_sigma
  /// instead of the sphere's tuned scale. The mixture stays symmetric.
  double jump_probability = 0.0;
  double jump_sigma = 0.0;
  /// Probability of a pivot proposal instead: sphere i is reflected across
  /// the line through two other random spheres (d = 2) or rotated about
  /// that line by a uniform angle (d = 3). Distances to the two pivots are
  /// kept, so hinged clusters can fold. Symmetric; ignored for n < 3 or d > 3.
  double pivot_probability = 0.0;
  /// Probability of translating the whole interacting cluster of sphere i
  /// (spheres closer than 2 r_depletion, transitively) by a Gaussian step
  /// of scale jump_sigma. Moves that would bring the cluster within
  /// interaction range of another sphere are rejected, which keeps the
  /// proposal symmetric. Not used by the two-type sampler.
  double cluster_probability = 0.0;
  double target_acceptance = 0.3;
  /// Keep every proposal's log acceptance ratio in ChainStats.
  bool record_log_ratios = false;

  void validate() const;
};

struct ChainStats {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  std::size_t halvings = 0;
  std::vector<double> proposal_sigma;  // final per-sphere scales
  std::vector<double> log_ratios;      // filled when record_log_ratios is set

  double acceptance_rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

/// min(1, exp(log_ratio)), with -inf mapping to 0.
double metropolis_accept_probability(double log_ratio) noexcept;

/// Transition matrix of a Metropolis chain on a finite state space with
/// symmetric proposal matrix `proposal` (rows sum to <= 1, rest stays put).
std::vector<std::vector<double>> metropolis_kernel(
    std::span<const double> log_target, const std::vector<std::vector<double>>& proposal);

/// Log acceptance ratio for moving sphere i of `spheres` to `proposal` under
/// the density exp(-z E) 1_D prod exp(-psi). Only pair terms involving i are
/// evaluated; returns -inf when the move breaks the hard-core constraint.
double log_acceptance_ratio(const PointSet& spheres, std::size_t i,
                            std::span<const double> proposal, const ModelParams& params,
                            const PotentialSpec& sphere_potential, double z);

/// Full log density -z E - sum psi, -inf outside the admissible set.
double log_density(const PointSet& spheres, const ModelParams& params,
                   const PotentialSpec& sphere_potential, double z);

/// Admissible starting cluster: spheres on a square grid of spacing
/// 2.5 r_sphere centred on the origin.
PointSet initial_cluster(std::size_t n, const ModelParams& params);

using SphereSink = std::function<void(const PointSet&)>;
using ConfigurationSink = std::function<void(const Configuration&)>;

/// Metropolis chain on n sphere centers with stationary density
/// exp(-z E) 1_D prod exp(-psi(x_i)). Emits the post-burn-in state after
/// every `thinning`-th sweep. `initial` defaults to initial_cluster.
ChainStats sample_hard_spheres(std::size_t n, const ModelParams& params,
                               const PotentialSpec& sphere_potential,
                               const MCMCParams& mcmc, double z, std::uint64_t seed,
                               const SphereSink& sink,
                               const std::optional<PointSet>& initial = std::nullopt);

/// Poisson bath of activity params.z_dot in the ball B(0, window_radius),
/// thinned by the depletion balls of `spheres` and, when given, by
/// exp(-psi_particle).
PointSet sample_bath_given_spheres(const PointSet& spheres, const ModelParams& params,
                                   double window_radius, std::uint64_t seed,
                                   const PotentialSpec* particle_potential = nullptr);

/// Radius beyond which exp(-psi_particle) < e^{-40}.
double bath_window_radius(const PotentialSpec& particle_potential);

/// Gibbs sampler of the two-type measure: a Metropolis sweep of the spheres
/// with the particles frozen, then an exact redraw of the bath. One Gibbs
/// iteration counts as one sweep.
ChainStats sample_two_type(std::size_t n, const ModelParams& params,
                           const PotentialPair& potentials, const MCMCParams& mcmc,
                           std::uint64_t seed, const ConfigurationSink& sink,
                           const std::optional<PointSet>& initial = std::nullopt);

struct AnnealSchedule {
  double z_initial = 1.0;
  double growth = 3.0;
  std::size_t n_levels = 8;
  std::size_t sweeps_per_level = 50'000;
  // Move mix of the level chains. Scales keep adapting for the whole level.
  double jump_probability = 0.1;
  double jump_sigma_factor = 2.0;  // in units of r_sphere; also the cluster step
  double pivot_probability = 0.1;
  double cluster_probability = 0.1;

  double z_at(std::size_t level) const;
  void validate() const;

  /// z_initial = 1 / V*, growth 3, 8 levels.
  static AnnealSchedule defaults(const ModelParams& params);
};

/// Weakly confining sphere potential used while annealing: hinge at the
/// origin, slope 0.1 / r_sphere.
PotentialSpec anneal_confinement(const ModelParams& params);

struct AnnealLevel {
  double z = 0.0;
  double best_energy = 0.0;   // E (pairwise) of the level's best state
  double best_psi = 0.0;      // sum psi of that state, reported separately
  std::size_t contacts = 0;   // contact number of the level's best state
  std::size_t running_max_contacts = 0;
  double acceptance = 0.0;
};

struct AnnealResult {
  PointSet best;
  double best_energy = 0.0;
  std::size_t best_contacts = 0;
  std::vector<AnnealLevel> levels;
};

/// Runs the sphere Metropolis chain at each activity of the schedule,
/// warm-starting each level from the previous level's lowest-energy state.
/// The level chains add the schedule's jump, pivot and cluster moves to the
/// Gaussian steps of `mcmc`. Contacts are counted at eps_c = 1e-2.
AnnealResult anneal_packing(std::size_t n, const ModelParams& params,
                            const AnnealSchedule& schedule, const MCMCParams& mcmc,
                            std::uint64_t seed, const SphereSink& sink = {});

/// Per-activity fraction of post-burn-in samples with E <= E_* + eta.
/// Activities are visited in the given order, each chain warm-started from
/// the previous chain's final state.
std::vector<double> concentration_estimate(std::size_t n, const ModelParams& params,
                                           std::span<const double> z_list, double eta,
                                           const MCMCParams& mcmc, std::uint64_t seed,
                                           const std::optional<PotentialSpec>& sphere_potential =
                                               std::nullopt);

}  // namespace aodep
