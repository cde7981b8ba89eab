#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aodep/dynamics.hpp"
#include "aodep/model.hpp"
#include "aodep/potentials.hpp"
#include "aodep/sampling.hpp"

namespace aodep {

/// Syntax or semantic error in a run configuration. `line()` is 0 for
/// semantic errors, which name the offending field instead.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class RunMode { two_type, depletion, sample_equilibrium, anneal_pack, analyze };

std::string_view to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view text);

enum class SamplerKind { hard_spheres, two_type };

/// Fully resolved run description. Every field carries its default; the
/// parser only overrides what the text sets.
struct RunConfig {
  RunMode mode = RunMode::depletion;
  std::uint64_t seed = 0;
  std::size_t n_spheres = 2;
  std::size_t replicas = 1;

  ModelParams model;

  // Confinement potentials.
  double sphere_hinge_radius = 2.0;
  double sphere_slope = 1.0;
  double particle_radius = 8.0;
  double particle_slope = 1.0;
  DriftConvention sphere_drift = DriftConvention::as_printed;
  bool particle_drift_sigma_sphere = false;

  // Integrator.
  double dt = 0.0;  // resolved to default_time_step when absent
  std::size_t n_steps = 1000;
  std::size_t record_every = 10;
  int max_proj_iters = 100;
  double tol_overlap = kDefaultOverlapTolerance;
  bool local_time_every_snapshot = false;

  // Sampler.
  SamplerKind sampler = SamplerKind::hard_spheres;
  MCMCParams mcmc;

  // Annealing.
  AnnealSchedule schedule;

  // Analysis.
  std::string input;
  std::string reference;
  std::size_t pair_i = 0;
  std::size_t pair_j = 1;
  double bin_width = 0.0;  // resolved to default_bin_width when absent
  double r_max = 0.0;      // resolved to 2 r_dep + 10 r_sphere when absent

  std::vector<std::string> warnings;

  PotentialPair potentials() const;
  SimulationSettings simulation_settings() const;

  /// Canonical key = value text of every field; parse_config(to_text())
  /// reproduces this config.
  std::string to_text() const;
};

/// Strict parse of `[section]` / `key = value` text. Unknown sections or keys,
/// duplicate keys and malformed values are rejected with their line number;
/// out-of-domain values are rejected naming the field. `mode_override`
/// supplies the mode when the text has none and must agree when it has one.
RunConfig parse_config(std::string_view text,
                       std::optional<RunMode> mode_override = std::nullopt);

}  // namespace aodep
