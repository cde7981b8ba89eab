#include "aodep/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aodep/cell_list.hpp"
#include "aodep/contacts.hpp"
#include "aodep/geometry.hpp"
#include "aodep/random.hpp"

namespace aodep {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kAdaptWindow = 50;  // sweeps between scale updates
constexpr double kMaxScaleFactor = 100.0;  // proposal cap, in units of r_sphere
constexpr double kMinScaleFactor = 1e-12;

// Frozen particles that sphere moves must avoid (two-type Gibbs step).
struct FrozenBath {
  const PointSet* particles = nullptr;
  CellList cells;
};

bool hits_bath(const FrozenBath& bath, std::span<const double> x, double r_dep) {
  if (bath.particles == nullptr || bath.particles->empty()) return false;
  const double r2 = r_dep * r_dep;
  bool hit = false;
  bath.cells.for_each_candidate(x, r_dep, [&](std::size_t k) {
    if (!hit && squared_distance(x, (*bath.particles)[k]) < r2) hit = true;
  });
  return hit;
}

std::size_t uniform_index(CounterRng& rng, std::size_t m) {
  return std::min(m - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(m)));
}

struct ChainHooks {
  // Called after every sweep with the current state; `post_burn` marks
  // sweeps past burn-in.
  std::function<void(const PointSet&, std::size_t sweep, bool post_burn)> on_sweep;
};

class SphereMetropolis {
 public:
  SphereMetropolis(PointSet spheres, const ModelParams& params, const PotentialSpec& psi,
                   double z, std::vector<double> sigma, std::uint64_t seed,
                   double jump_probability = 0.0, double jump_sigma = 0.0,
                   double pivot_probability = 0.0, double cluster_probability = 0.0)
      : spheres_(std::move(spheres)),
        params_(params),
        psi_(psi),
        z_(z),
        sigma_(std::move(sigma)),
        rng_(seed),
        window_accepts_(spheres_.size(), 0),
        window_local_(spheres_.size(), 0),
        jump_probability_(jump_probability),
        jump_sigma_(jump_sigma),
        cluster_probability_(cluster_probability),
        pivot_probability_(spheres_.size() >= 3 && params.d <= 3 ? pivot_probability : 0.0),
        proposal_(static_cast<std::size_t>(params.d)) {}

  const PointSet& spheres() const noexcept { return spheres_; }
  CounterRng& rng() noexcept { return rng_; }
  ChainStats& stats() noexcept { return stats_; }

  void sweep(const FrozenBath* bath, bool record) {
    const auto d = static_cast<std::size_t>(params_.d);
    for (std::size_t i = 0; i < spheres_.size(); ++i) {
      const auto x = spheres_[i];
      if (bath == nullptr && cluster_probability_ > 0.0 && rng_.uniform() < cluster_probability_) {
        cluster_move(i, record);
        continue;
      }
      bool jump = false;
      if (pivot_probability_ > 0.0 && rng_.uniform() < pivot_probability_) {
        jump = true;
        pivot_proposal(i);
      } else {
        jump = jump_probability_ > 0.0 && rng_.uniform() < jump_probability_;
        const double scale = jump ? jump_sigma_ : sigma_[i];
        for (std::size_t k = 0; k < d; ++k) proposal_[k] = x[k] + scale * rng_.normal();
      }
      double lr = log_acceptance_ratio(spheres_, i, proposal_, params_, psi_, z_);
      if (bath != nullptr && lr != kNegInf && hits_bath(*bath, proposal_, params_.r_depletion()))
        lr = kNegInf;
      if (record) stats_.log_ratios.push_back(lr);
      ++stats_.proposed;
      const double u = rng_.uniform();
      if (u < metropolis_accept_probability(lr)) {
        std::copy(proposal_.begin(), proposal_.end(), x.begin());
        ++stats_.accepted;
        if (!jump) ++window_accepts_[i];
      }
      if (!jump) ++window_local_[i];
    }
    ++window_sweeps_;
  }

  // Per-sphere scale update at the end of each adaptation window. Tuning
  // toward the target only while adapting; zero acceptance always halves.
  void end_of_sweep(bool adapting, double target) {
    if (window_sweeps_ < kAdaptWindow) return;
    const double max_sigma = kMaxScaleFactor * params_.r_sphere;
    for (std::size_t i = 0; i < sigma_.size(); ++i) {
      if (window_local_[i] == 0) continue;
      const double rate = static_cast<double>(window_accepts_[i]) / static_cast<double>(window_local_[i]);
      if (window_accepts_[i] == 0) {
        sigma_[i] *= 0.5;
        ++stats_.halvings;
        if (sigma_[i] < kMinScaleFactor * params_.r_sphere)
          throw Error("proposal scale underflow: no accepted move at scale below 1e-12 r_sphere");
      } else if (adapting) {
        sigma_[i] = std::min(max_sigma, sigma_[i] * std::exp(rate - target));
      }
      window_accepts_[i] = 0;
      window_local_[i] = 0;
    }
    window_sweeps_ = 0;
  }

  std::vector<double> sigma() const { return sigma_; }

 private:
  void cluster_move(std::size_t i, bool record) {
    const std::size_t n = spheres_.size();
    const auto d = static_cast<std::size_t>(params_.d);
    const double reach2 = 4.0 * params_.r_depletion() * params_.r_depletion();
    std::vector<char> in(n, 0);
    std::vector<std::size_t> members{i};
    in[i] = 1;
    for (std::size_t q = 0; q < members.size(); ++q)
      for (std::size_t j = 0; j < n; ++j)
        if (!in[j] && squared_distance(spheres_[members[q]], spheres_[j]) < reach2) {
          in[j] = 1;
          members.push_back(j);
        }
    shift_.resize(d);
    for (std::size_t k = 0; k < d; ++k) shift_[k] = jump_sigma_ * rng_.normal();

    double lr = 0.0;
    moved_.clear();
    for (std::size_t m : members) {
      for (std::size_t k = 0; k < d; ++k) proposal_[k] = spheres_[m][k] + shift_[k];
      for (std::size_t j = 0; j < n && lr != kNegInf; ++j)
        if (!in[j] && squared_distance(proposal_, spheres_[j]) < reach2) lr = kNegInf;
      if (lr == kNegInf) break;
      lr += psi_value(psi_, spheres_[m]) - psi_value(psi_, proposal_);
      moved_.insert(moved_.end(), proposal_.begin(), proposal_.end());
    }
    if (record) stats_.log_ratios.push_back(lr);
    ++stats_.proposed;
    if (rng_.uniform() < metropolis_accept_probability(lr)) {
      for (std::size_t q = 0; q < members.size(); ++q)
        std::copy_n(moved_.begin() + static_cast<std::ptrdiff_t>(q * d), d,
                    spheres_[members[q]].begin());
      ++stats_.accepted;
    }
  }

  void pivot_proposal(std::size_t i) {
    const std::size_t n = spheres_.size();
    std::size_t j = uniform_index(rng_, n - 1);
    if (j >= i) ++j;
    std::size_t k = uniform_index(rng_, n - 2);
    for (std::size_t skip : {std::min(i, j), std::max(i, j)})
      if (k >= skip) ++k;
    const auto x = spheres_[i], a = spheres_[j], b = spheres_[k];
    const auto d = static_cast<std::size_t>(params_.d);
    std::array<double, 3> axis{}, rel{};
    double len2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      axis[c] = b[c] - a[c];
      rel[c] = x[c] - a[c];
      len2 += axis[c] * axis[c];
    }
    const double len = std::sqrt(len2);
    for (std::size_t c = 0; c < d; ++c) axis[c] /= len;
    double along = 0.0;
    for (std::size_t c = 0; c < d; ++c) along += rel[c] * axis[c];
    std::array<double, 3> perp{};
    for (std::size_t c = 0; c < d; ++c) perp[c] = rel[c] - along * axis[c];
    if (d == 2) {
      for (std::size_t c = 0; c < d; ++c) proposal_[c] = a[c] + along * axis[c] - perp[c];
      return;
    }
    // Rodrigues rotation of perp about axis.
    const double theta = std::numbers::pi * (2.0 * rng_.uniform() - 1.0);
    const std::array<double, 3> cross{axis[1] * perp[2] - axis[2] * perp[1],
                                      axis[2] * perp[0] - axis[0] * perp[2],
                                      axis[0] * perp[1] - axis[1] * perp[0]};
    for (std::size_t c = 0; c < 3; ++c)
      proposal_[c] = a[c] + along * axis[c] + std::cos(theta) * perp[c] +
                     std::sin(theta) * cross[c];
  }

  PointSet spheres_;
  const ModelParams& params_;
  const PotentialSpec& psi_;
  double z_;
  std::vector<double> sigma_;
  CounterRng rng_;
  ChainStats stats_;
  std::vector<std::size_t> window_accepts_;
  std::vector<std::size_t> window_local_;  // tuned-scale proposals this window
  std::size_t window_sweeps_ = 0;
  double jump_probability_;
  double jump_sigma_;
  double cluster_probability_;
  double pivot_probability_;
  std::vector<double> shift_;
  std::vector<double> moved_;
  std::vector<double> proposal_;
};

std::vector<double> initial_scales(std::size_t n, const MCMCParams& mcmc) {
  return std::vector<double>(n, mcmc.proposal_sigma);
}

// Runs burn-in plus sampling sweeps, calling hooks.on_sweep after each.
ChainStats run_sphere_chain(PointSet start, const ModelParams& params, const PotentialSpec& psi,
                            double z, const MCMCParams& mcmc, std::vector<double> sigma,
                            std::uint64_t seed, const ChainHooks& hooks) {
  mcmc.validate();
  SphereMetropolis chain(std::move(start), params, psi, z, std::move(sigma), seed,
                         mcmc.jump_probability, mcmc.jump_sigma, mcmc.pivot_probability,
                         mcmc.cluster_probability);
  for (std::size_t s = 0; s < mcmc.n_sweeps; ++s) {
    const bool post_burn = s >= mcmc.burn_in;
    chain.sweep(nullptr, mcmc.record_log_ratios);
    chain.end_of_sweep(mcmc.adapt && (!post_burn || mcmc.adapt_throughout),
                       mcmc.target_acceptance);
    if (hooks.on_sweep) hooks.on_sweep(chain.spheres(), s, post_burn);
  }
  ChainStats stats = std::move(chain.stats());
  stats.proposal_sigma = chain.sigma();
  return stats;
}

bool emits(const MCMCParams& mcmc, std::size_t sweep) {
  return sweep >= mcmc.burn_in && (sweep - mcmc.burn_in) % mcmc.thinning == 0;
}

double psi_sum(const PointSet& spheres, const PotentialSpec& psi) {
  double s = 0.0;
  for (std::size_t i = 0; i < spheres.size(); ++i) s += psi_value(psi, spheres[i]);
  return s;
}

}  // namespace

void MCMCParams::validate() const {
  if (!(proposal_sigma > 0.0)) throw ParameterError("proposal_sigma must be > 0");
  if (n_sweeps == 0) throw ParameterError("n_sweeps must be > 0");
  if (burn_in >= n_sweeps) throw ParameterError("burn_in must be < n_sweeps");
  if (thinning == 0) throw ParameterError("thinning must be >= 1");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw ParameterError("target_acceptance must lie in (0, 1)");
  if (!(jump_probability >= 0.0 && jump_probability < 1.0))
    throw ParameterError("jump_probability must lie in [0, 1)");
  if (jump_probability > 0.0 && !(jump_sigma > 0.0))
    throw ParameterError("jump_sigma must be > 0 when jump_probability > 0");
  if (!(pivot_probability >= 0.0 && pivot_probability < 1.0))
    throw ParameterError("pivot_probability must lie in [0, 1)");
  if (!(cluster_probability >= 0.0 && cluster_probability < 1.0))
    throw ParameterError("cluster_probability must lie in [0, 1)");
  if (cluster_probability > 0.0 && !(jump_sigma > 0.0))
    throw ParameterError("jump_sigma must be > 0 when cluster_probability > 0");
}

double metropolis_accept_probability(double log_ratio) noexcept {
  if (log_ratio >= 0.0) return 1.0;
  if (log_ratio == kNegInf) return 0.0;
  return std::exp(log_ratio);
}

std::vector<std::vector<double>> metropolis_kernel(
    std::span<const double> log_target, const std::vector<std::vector<double>>& proposal) {
  const std::size_t n = log_target.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    double stay = 1.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      p[a][b] = proposal[a][b] * metropolis_accept_probability(log_target[b] - log_target[a]);
      stay -= p[a][b];
    }
    p[a][a] = stay;
  }
  return p;
}

double log_acceptance_ratio(const PointSet& spheres, std::size_t i,
                            std::span<const double> proposal, const ModelParams& params,
                            const PotentialSpec& sphere_potential, double z) {
  const double min2 = 4.0 * params.r_sphere * params.r_sphere;
  for (std::size_t j = 0; j < spheres.size(); ++j)
    if (j != i && squared_distance(proposal, spheres[j]) < min2) return kNegInf;
  double lr = psi_value(sphere_potential, spheres[i]) - psi_value(sphere_potential, proposal);
  if (z != 0.0) {
    const OverlapPotential overlap(params);
    // E = n v_d r^d - sum V, so -z dE = z (sum V_new - sum V_old).
    lr += z * (pair_overlap_sum(spheres, i, proposal, overlap) -
               pair_overlap_sum(spheres, i, spheres[i], overlap));
  }
  return lr;
}

double log_density(const PointSet& spheres, const ModelParams& params,
                   const PotentialSpec& sphere_potential, double z) {
  if (!is_admissible(spheres, params, 0.0)) return kNegInf;
  return -z * energy_pairwise(spheres, params) - psi_sum(spheres, sphere_potential);
}

PointSet initial_cluster(std::size_t n, const ModelParams& params) {
  PointSet out(params.d);
  if (n == 0) return out;
  const double spacing = 2.5 * params.r_sphere;
  const auto side = static_cast<std::size_t>(
      std::ceil(std::pow(static_cast<double>(n), 1.0 / params.d) - 1e-12));
  const double offset = 0.5 * spacing * static_cast<double>(side - 1);
  std::vector<double> p(static_cast<std::size_t>(params.d));
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx;
    for (int k = 0; k < params.d; ++k) {
      p[k] = spacing * static_cast<double>(rest % side) - offset;
      rest /= side;
    }
    out.push_back(p);
  }
  return out;
}

ChainStats sample_hard_spheres(std::size_t n, const ModelParams& params,
                               const PotentialSpec& sphere_potential, const MCMCParams& mcmc,
                               double z, std::uint64_t seed, const SphereSink& sink,
                               const std::optional<PointSet>& initial) {
  params.validate();
  PointSet start = initial ? *initial : initial_cluster(n, params);
  if (start.size() != n) throw ParameterError("initial configuration has the wrong size");
  require_dimension(start, params);
  if (!is_admissible(start, params))
    throw ParameterError("initial sphere configuration is not admissible");
  ChainHooks hooks;
  hooks.on_sweep = [&](const PointSet& s, std::size_t sweep, bool) {
    if (sink && emits(mcmc, sweep)) sink(s);
  };
  return run_sphere_chain(std::move(start), params, sphere_potential, z, mcmc,
                          initial_scales(n, mcmc), seed, hooks);
}

double bath_window_radius(const PotentialSpec& particle_potential) {
  return particle_potential.hinge_radius + 41.0 / particle_potential.radial_scale();
}

PointSet sample_bath_given_spheres(const PointSet& spheres, const ModelParams& params,
                                   double window_radius, std::uint64_t seed,
                                   const PotentialSpec* particle_potential) {
  require_dimension(spheres, params);
  PointSet bath(params.d);
  if (params.z_dot <= 0.0 || window_radius <= 0.0) return bath;
  const int d = params.d;
  const double volume = unit_ball_volume(d) * std::pow(window_radius, d);
  CounterRng rng(seed);
  const auto count = std::poisson_distribution<long long>(params.z_dot * volume)(rng);
  const double r2 = params.r_depletion() * params.r_depletion();
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long long c = 0; c < count; ++c) {
    double len2 = 0.0;
    do {
      len2 = 0.0;
      for (int k = 0; k < d; ++k) {
        x[k] = rng.normal();
        len2 += x[k] * x[k];
      }
    } while (len2 == 0.0);
    const double radius = window_radius * std::pow(rng.uniform(), 1.0 / d);
    const double scale = radius / std::sqrt(len2);
    for (int k = 0; k < d; ++k) x[k] *= scale;
    const double keep_u = rng.uniform();
    if (particle_potential != nullptr &&
        keep_u >= std::exp(-psi_value(*particle_potential, x)))
      continue;
    bool excluded = false;
    for (std::size_t i = 0; i < spheres.size() && !excluded; ++i)
      excluded = squared_distance(x, spheres[i]) < r2;
    if (!excluded) bath.push_back(x);
  }
  return bath;
}

ChainStats sample_two_type(std::size_t n, const ModelParams& params,
                           const PotentialPair& potentials, const MCMCParams& mcmc,
                           std::uint64_t seed, const ConfigurationSink& sink,
                           const std::optional<PointSet>& initial) {
  params.validate();
  mcmc.validate();
  PointSet start = initial ? *initial : initial_cluster(n, params);
  if (start.size() != n) throw ParameterError("initial configuration has the wrong size");
  require_dimension(start, params);
  if (!is_admissible(start, params))
    throw ParameterError("initial sphere configuration is not admissible");

  const double window = bath_window_radius(potentials.particle);
  SphereMetropolis chain(std::move(start), params, potentials.sphere, 0.0,
                         initial_scales(n, mcmc), seed, mcmc.jump_probability, mcmc.jump_sigma,
                         mcmc.pivot_probability);
  PointSet bath = sample_bath_given_spheres(chain.spheres(), params, window,
                                            chain.rng()(), &potentials.particle);
  FrozenBath frozen;
  for (std::size_t s = 0; s < mcmc.n_sweeps; ++s) {
    const bool post_burn = s >= mcmc.burn_in;
    frozen.particles = &bath;
    frozen.cells.rebuild(bath, params.r_depletion());
    chain.sweep(&frozen, mcmc.record_log_ratios);
    chain.end_of_sweep(mcmc.adapt && !post_burn, mcmc.target_acceptance);
    bath = sample_bath_given_spheres(chain.spheres(), params, window, chain.rng()(),
                                     &potentials.particle);
    if (sink && emits(mcmc, s)) sink(Configuration(chain.spheres(), bath));
  }
  ChainStats stats = std::move(chain.stats());
  stats.proposal_sigma = chain.sigma();
  return stats;
}

double AnnealSchedule::z_at(std::size_t level) const {
  return z_initial * std::pow(growth, static_cast<double>(level));
}

void AnnealSchedule::validate() const {
  if (!(z_initial > 0.0)) throw ParameterError("z_initial must be > 0");
  if (!(growth > 1.0)) throw ParameterError("anneal growth factor must be > 1");
  if (n_levels == 0) throw ParameterError("n_levels must be >= 1");
  if (sweeps_per_level == 0) throw ParameterError("sweeps_per_level must be >= 1");
  if (!(jump_sigma_factor > 0.0)) throw ParameterError("jump_sigma_factor must be > 0");
  for (double q : {jump_probability, pivot_probability, cluster_probability})
    if (!(q >= 0.0 && q < 1.0)) throw ParameterError("anneal move probabilities must lie in [0, 1)");
}

AnnealSchedule AnnealSchedule::defaults(const ModelParams& params) {
  AnnealSchedule s;
  s.z_initial = 1.0 / max_overlap(params);
  return s;
}

PotentialSpec anneal_confinement(const ModelParams& params) {
  return PotentialSpec::sphere_confinement(params.d, 0.0, 0.1 / params.r_sphere);
}

AnnealResult anneal_packing(std::size_t n, const ModelParams& params,
                            const AnnealSchedule& schedule, const MCMCParams& mcmc,
                            std::uint64_t seed, const SphereSink& sink) {
  params.validate();
  schedule.validate();
  if (params.d != 2 && params.d != 3)
    throw ParameterError("anneal_packing supports d = 2 and d = 3");
  const PotentialSpec psi = anneal_confinement(params);

  MCMCParams level_mcmc = mcmc;
  level_mcmc.n_sweeps = schedule.sweeps_per_level;
  level_mcmc.burn_in = std::min(mcmc.burn_in, schedule.sweeps_per_level / 2);
  level_mcmc.adapt_throughout = true;
  level_mcmc.jump_probability = schedule.jump_probability;
  level_mcmc.jump_sigma = schedule.jump_sigma_factor * params.r_sphere;
  level_mcmc.pivot_probability = schedule.pivot_probability;
  level_mcmc.cluster_probability = schedule.cluster_probability;
  level_mcmc.validate();

  AnnealResult result;
  PointSet current = initial_cluster(n, params);
  std::vector<double> sigma = initial_scales(n, mcmc);
  result.best = current;
  result.best_energy = energy_pairwise(current, params);
  std::size_t running_max = 0;

  for (std::size_t level = 0; level < schedule.n_levels; ++level) {
    const double z = schedule.z_at(level);
    PointSet level_best = current;
    double level_best_energy = energy_pairwise(current, params);
    ChainHooks hooks;
    hooks.on_sweep = [&](const PointSet& s, std::size_t sweep, bool) {
      const double e = energy_pairwise(s, params);
      if (e < level_best_energy) {
        level_best_energy = e;
        level_best = s;
      }
      if (sink && emits(level_mcmc, sweep)) sink(s);
    };
    const ChainStats stats = run_sphere_chain(current, params, psi, z, level_mcmc, sigma,
                                              derive_seed(seed, level), hooks);
    sigma = stats.proposal_sigma;

    AnnealLevel rec;
    rec.z = z;
    rec.best_energy = level_best_energy;
    rec.best_psi = psi_sum(level_best, psi);
    rec.contacts = contact_number(level_best, params, kAnnealContactTolerance);
    running_max = std::max(running_max, rec.contacts);
    rec.running_max_contacts = running_max;
    rec.acceptance = stats.acceptance_rate();
    result.levels.push_back(rec);

    if (level_best_energy < result.best_energy) {
      result.best_energy = level_best_energy;
      result.best = level_best;
    }
    current = std::move(level_best);
  }
  result.best_contacts = contact_number(result.best, params, kAnnealContactTolerance);
  return result;
}

std::vector<double> concentration_estimate(std::size_t n, const ModelParams& params,
                                           std::span<const double> z_list, double eta,
                                           const MCMCParams& mcmc, std::uint64_t seed,
                                           const std::optional<PotentialSpec>& sphere_potential) {
  params.validate();
  const PotentialSpec psi = sphere_potential ? *sphere_potential : anneal_confinement(params);
  const double e_star = minimal_energy(static_cast<long>(n), params);
  const double threshold = e_star + eta;

  std::vector<double> fractions;
  PointSet current = initial_cluster(n, params);
  std::vector<double> sigma = initial_scales(n, mcmc);
  for (std::size_t level = 0; level < z_list.size(); ++level) {
    std::size_t hits = 0, total = 0;
    ChainHooks hooks;
    hooks.on_sweep = [&](const PointSet& s, std::size_t sweep, bool) {
      current = s;
      if (!emits(mcmc, sweep)) return;
      ++total;
      if (energy_pairwise(s, params) <= threshold) ++hits;
    };
    const ChainStats stats = run_sphere_chain(current, params, psi, z_list[level], mcmc, sigma,
                                              derive_seed(seed, level), hooks);
    sigma = stats.proposal_sigma;
    fractions.push_back(total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total));
  }
  return fractions;
}

}  // namespace aodep
