#include "aodep/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "aodep/analysis.hpp"
#include "aodep/geometry.hpp"

namespace aodep {

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::two_type: return "two-type";
    case RunMode::depletion: return "depletion";
    case RunMode::sample_equilibrium: return "sample-equilibrium";
    case RunMode::anneal_pack: return "anneal-pack";
    case RunMode::analyze: return "analyze";
  }
  return "?";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
  for (auto m : {RunMode::two_type, RunMode::depletion, RunMode::sample_equilibrium,
                 RunMode::anneal_pack, RunMode::analyze})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

PotentialPair RunConfig::potentials() const {
  return {PotentialSpec::sphere_confinement(model.d, sphere_hinge_radius, sphere_slope),
          PotentialSpec::particle_confinement(model.d, particle_radius, particle_slope)};
}

SimulationSettings RunConfig::simulation_settings() const {
  SimulationSettings s;
  s.mode = mode == RunMode::two_type ? DynamicsMode::two_type : DynamicsMode::depletion;
  s.dt = dt;
  s.n_steps = n_steps;
  s.record_every = record_every;
  s.seed = seed;
  s.local_time_every_snapshot = local_time_every_snapshot;
  s.integrator.tol_overlap = tol_overlap;
  s.integrator.max_proj_iters = max_proj_iters;
  s.integrator.sphere_drift = sphere_drift;
  s.integrator.particle_drift_sigma_sphere = particle_drift_sigma_sphere;
  return s;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::string_view drift_text(DriftConvention c) {
  return c == DriftConvention::as_printed ? "as-printed" : "reversible";
}

std::string_view sampler_text(SamplerKind k) {
  return k == SamplerKind::hard_spheres ? "hard-spheres" : "two-type";
}

class Parser {
 public:
  explicit Parser(RunConfig& cfg) : cfg_(cfg) { register_keys(); }

  void feed(std::string_view text) {
    std::size_t line_no = 0;
    std::string section;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line = trim(text.substr(pos, nl - pos));
      pos = nl + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header",
                            line_no);
        section = trim(std::string_view(line).substr(1, line.size() - 2));
        if (!sections_.contains(section))
          throw ConfigError(
              "line " + std::to_string(line_no) + ": unknown section [" + section + "]", line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected key = value", line_no);
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty key", line_no);
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' outside any section",
                          line_no);
      const std::string full = section + "." + key;
      const auto it = setters_.find(full);
      if (it == setters_.end())
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + full + "'",
                          line_no);
      if (!seen_.emplace(full, line_no).second)
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full + "'",
                          line_no);
      line_ = line_no;
      field_ = full;
      it->second(value);
    }
  }

  bool has(const std::string& key) const { return seen_.contains(key); }

 private:
  [[noreturn]] void bad(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + field_ + ": " + what, line_);
  }

  double as_double(const std::string& v) const {
    const char* b = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(b, &end);
    if (v.empty() || end != b + v.size() || !std::isfinite(x)) bad("expected a number, got '" + v + "'");
    return x;
  }

  std::uint64_t as_u64(const std::string& v) const {
    std::uint64_t x = 0;
    int base = 10;
    std::string_view s = v;
    if (s.starts_with("0x") || s.starts_with("0X")) {
      s.remove_prefix(2);
      base = 16;
    }
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x, base);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
      bad("expected a non-negative integer, got '" + v + "'");
    return x;
  }

  std::size_t as_size(const std::string& v) const { return static_cast<std::size_t>(as_u64(v)); }

  bool as_bool(const std::string& v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad("expected true or false, got '" + v + "'");
  }

  void key(const std::string& name, std::function<void(const std::string&)> fn) {
    sections_.insert(name.substr(0, name.find('.')));
    setters_.emplace(name, std::move(fn));
  }

  void register_keys() {
    auto& c = cfg_;
    key("run.mode", [&](const std::string& v) {
      const auto m = parse_run_mode(v);
      if (!m) bad("unknown mode '" + v + "'");
      c.mode = *m;
    });
    key("run.seed", [&](const std::string& v) { c.seed = as_u64(v); });
    key("run.n_spheres", [&](const std::string& v) { c.n_spheres = as_size(v); });
    key("run.replicas", [&](const std::string& v) { c.replicas = as_size(v); });

    key("model.d", [&](const std::string& v) { c.model.d = static_cast<int>(as_u64(v)); });
    key("model.r_sphere", [&](const std::string& v) { c.model.r_sphere = as_double(v); });
    key("model.r_particle", [&](const std::string& v) { c.model.r_particle = as_double(v); });
    key("model.z_dot", [&](const std::string& v) { c.model.z_dot = as_double(v); });
    key("model.z_dot_vstar", [&](const std::string& v) { z_vstar = as_double(v); });
    key("model.sigma_sphere", [&](const std::string& v) { c.model.sigma_sphere = as_double(v); });
    key("model.sigma_particle",
        [&](const std::string& v) { c.model.sigma_particle = as_double(v); });

    key("potentials.sphere_hinge_radius",
        [&](const std::string& v) { c.sphere_hinge_radius = as_double(v); });
    key("potentials.sphere_slope", [&](const std::string& v) { c.sphere_slope = as_double(v); });
    key("potentials.particle_radius",
        [&](const std::string& v) { c.particle_radius = as_double(v); });
    key("potentials.particle_slope",
        [&](const std::string& v) { c.particle_slope = as_double(v); });
    key("potentials.sphere_drift", [&](const std::string& v) {
      if (v == "as-printed") c.sphere_drift = DriftConvention::as_printed;
      else if (v == "reversible") c.sphere_drift = DriftConvention::reversible;
      else bad("expected as-printed or reversible, got '" + v + "'");
    });
    key("potentials.particle_drift_sigma_sphere",
        [&](const std::string& v) { c.particle_drift_sigma_sphere = as_bool(v); });

    key("integrator.dt", [&](const std::string& v) { c.dt = as_double(v); });
    key("integrator.n_steps", [&](const std::string& v) { c.n_steps = as_size(v); });
    key("integrator.record_every", [&](const std::string& v) { c.record_every = as_size(v); });
    key("integrator.max_proj_iters",
        [&](const std::string& v) { c.max_proj_iters = static_cast<int>(as_u64(v)); });
    key("integrator.tol_overlap", [&](const std::string& v) { c.tol_overlap = as_double(v); });
    key("integrator.local_time_every_snapshot",
        [&](const std::string& v) { c.local_time_every_snapshot = as_bool(v); });

    key("sampler.kind", [&](const std::string& v) {
      if (v == "hard-spheres") c.sampler = SamplerKind::hard_spheres;
      else if (v == "two-type") c.sampler = SamplerKind::two_type;
      else bad("expected hard-spheres or two-type, got '" + v + "'");
    });
    key("sampler.proposal_sigma", [&](const std::string& v) { c.mcmc.proposal_sigma = as_double(v); });
    key("sampler.n_sweeps", [&](const std::string& v) { c.mcmc.n_sweeps = as_size(v); });
    key("sampler.burn_in", [&](const std::string& v) { c.mcmc.burn_in = as_size(v); });
    key("sampler.thinning", [&](const std::string& v) { c.mcmc.thinning = as_size(v); });
    key("sampler.adapt", [&](const std::string& v) { c.mcmc.adapt = as_bool(v); });
    key("sampler.target_acceptance",
        [&](const std::string& v) { c.mcmc.target_acceptance = as_double(v); });

    key("anneal.z_initial", [&](const std::string& v) { c.schedule.z_initial = as_double(v); });
    key("anneal.growth", [&](const std::string& v) { c.schedule.growth = as_double(v); });
    key("anneal.n_levels", [&](const std::string& v) { c.schedule.n_levels = as_size(v); });
    key("anneal.sweeps_per_level",
        [&](const std::string& v) { c.schedule.sweeps_per_level = as_size(v); });

    key("analyze.input", [&](const std::string& v) { c.input = v; });
    key("analyze.reference", [&](const std::string& v) { c.reference = v; });
    key("analyze.pair_i", [&](const std::string& v) { c.pair_i = as_size(v); });
    key("analyze.pair_j", [&](const std::string& v) { c.pair_j = as_size(v); });
    key("analyze.bin_width", [&](const std::string& v) { c.bin_width = as_double(v); });
    key("analyze.r_max", [&](const std::string& v) { c.r_max = as_double(v); });
  }

 public:
  std::optional<double> z_vstar;

 private:
  RunConfig& cfg_;
  std::map<std::string, std::function<void(const std::string&)>> setters_;
  std::set<std::string> sections_;
  std::map<std::string, std::size_t> seen_;
  std::size_t line_ = 0;
  std::string field_;
};

[[noreturn]] void semantic(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0.0)) semantic(field, "must be positive, got " + fmt(v));
}

}  // namespace

RunConfig parse_config(std::string_view text, std::optional<RunMode> mode_override) {
  RunConfig c;
  Parser p(c);
  p.feed(text);

  if (p.has("run.mode")) {
    if (mode_override && *mode_override != c.mode)
      semantic("run.mode", "config says '" + std::string(to_string(c.mode)) +
                               "' but the command asks for '" +
                               std::string(to_string(*mode_override)) + "'");
  } else if (mode_override) {
    c.mode = *mode_override;
  } else {
    semantic("run.mode", "missing");
  }

  const int d = c.model.d;
  if (d < 2) semantic("model.d", "must be at least 2, got " + std::to_string(d));
  require_positive("model.r_sphere", c.model.r_sphere);
  require_positive("model.r_particle", c.model.r_particle);
  if (!(c.model.r_particle < c.model.r_sphere))
    semantic("model.r_particle",
             "size ratio rho = r_particle / r_sphere must lie in [0, 1), got " +
                 fmt(c.model.rho()));
  require_positive("model.sigma_sphere", c.model.sigma_sphere);
  require_positive("model.sigma_particle", c.model.sigma_particle);
  if (p.z_vstar) {
    if (p.has("model.z_dot")) semantic("model.z_dot_vstar", "conflicts with model.z_dot");
    if (*p.z_vstar < 0.0) semantic("model.z_dot_vstar", "must be non-negative");
    c.model.z_dot = *p.z_vstar / max_overlap(c.model);
  }
  if (c.model.z_dot < 0.0) semantic("model.z_dot", "must be non-negative, got " + fmt(c.model.z_dot));

  if (c.mode != RunMode::analyze && c.n_spheres == 0)
    semantic("run.n_spheres", "must be at least 1");
  if (c.replicas == 0) semantic("run.replicas", "must be at least 1");

  if (!p.has("potentials.sphere_hinge_radius")) c.sphere_hinge_radius = 2.0 * c.model.r_sphere;
  if (!p.has("potentials.sphere_slope")) c.sphere_slope = 1.0 / c.model.r_sphere;
  if (!p.has("potentials.particle_radius")) c.particle_radius = 8.0 * c.model.r_sphere;
  if (c.sphere_hinge_radius < 0.0) semantic("potentials.sphere_hinge_radius", "must be non-negative");
  require_positive("potentials.sphere_slope", c.sphere_slope);
  require_positive("potentials.particle_radius", c.particle_radius);
  require_positive("potentials.particle_slope", c.particle_slope);

  if (!p.has("integrator.dt")) c.dt = default_time_step(c.model);
  require_positive("integrator.dt", c.dt);
  if (c.record_every == 0) semantic("integrator.record_every", "must be at least 1");
  if (c.max_proj_iters < 1) semantic("integrator.max_proj_iters", "must be at least 1");
  if (!(c.tol_overlap >= 0.0 && c.tol_overlap < 1.0))
    semantic("integrator.tol_overlap", "must lie in [0, 1)");

  require_positive("sampler.proposal_sigma", c.mcmc.proposal_sigma);
  if (c.mcmc.thinning == 0) semantic("sampler.thinning", "must be at least 1");
  if (c.mcmc.burn_in >= c.mcmc.n_sweeps)
    semantic("sampler.burn_in", "must be smaller than sampler.n_sweeps");
  if (!(c.mcmc.target_acceptance > 0.0 && c.mcmc.target_acceptance < 1.0))
    semantic("sampler.target_acceptance", "must lie in (0, 1)");

  if (!p.has("anneal.z_initial")) c.schedule.z_initial = 1.0 / max_overlap(c.model);
  require_positive("anneal.z_initial", c.schedule.z_initial);
  if (!(c.schedule.growth >= 1.0)) semantic("anneal.growth", "must be at least 1");
  if (c.schedule.n_levels == 0) semantic("anneal.n_levels", "must be at least 1");
  if (c.schedule.sweeps_per_level == 0) semantic("anneal.sweeps_per_level", "must be at least 1");

  if (c.mode == RunMode::analyze && c.input.empty()) semantic("analyze.input", "required in analyze mode");
  if (c.pair_i == c.pair_j) semantic("analyze.pair_j", "must differ from analyze.pair_i");
  if (!p.has("analyze.bin_width")) c.bin_width = default_bin_width(c.model);
  require_positive("analyze.bin_width", c.bin_width);
  if (!p.has("analyze.r_max")) c.r_max = 2.0 * c.model.r_depletion() + 10.0 * c.model.r_sphere;
  if (!(c.r_max > 2.0 * c.model.r_sphere)) semantic("analyze.r_max", "must exceed 2 r_sphere");

  if (c.mode == RunMode::anneal_pack && d != 2 && d != 3)
    semantic("model.d", "anneal-pack supports d = 2 or 3");

  if (c.mode == RunMode::depletion || (c.mode == RunMode::sample_equilibrium &&
                                       c.sampler == SamplerKind::hard_spheres)) {
    const auto th = rho_thresholds(d);
    if (c.model.rho() > th.rho2)
      c.warnings.push_back("pairwise energy is approximate: rho = " + fmt(c.model.rho()) +
                           " exceeds rho_2 = " + fmt(th.rho2) +
                           ", above which the depletion energy no longer reduces to a pair "
                           "interaction");
  }
  return c;
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "[run]\n"
     << "mode = " << to_string(mode) << "\n"
     << "seed = " << seed << "\n"
     << "n_spheres = " << n_spheres << "\n"
     << "replicas = " << replicas << "\n\n"
     << "[model]\n"
     << "d = " << model.d << "\n"
     << "r_sphere = " << fmt(model.r_sphere) << "\n"
     << "r_particle = " << fmt(model.r_particle) << "\n"
     << "z_dot = " << fmt(model.z_dot) << "\n"
     << "sigma_sphere = " << fmt(model.sigma_sphere) << "\n"
     << "sigma_particle = " << fmt(model.sigma_particle) << "\n\n"
     << "[potentials]\n"
     << "sphere_hinge_radius = " << fmt(sphere_hinge_radius) << "\n"
     << "sphere_slope = " << fmt(sphere_slope) << "\n"
     << "particle_radius = " << fmt(particle_radius) << "\n"
     << "particle_slope = " << fmt(particle_slope) << "\n"
     << "sphere_drift = " << drift_text(sphere_drift) << "\n"
     << "particle_drift_sigma_sphere = " << bool_text(particle_drift_sigma_sphere) << "\n\n"
     << "[integrator]\n"
     << "dt = " << fmt(dt) << "\n"
     << "n_steps = " << n_steps << "\n"
     << "record_every = " << record_every << "\n"
     << "max_proj_iters = " << max_proj_iters << "\n"
     << "tol_overlap = " << fmt(tol_overlap) << "\n"
     << "local_time_every_snapshot = " << bool_text(local_time_every_snapshot) << "\n\n"
     << "[sampler]\n"
     << "kind = " << sampler_text(sampler) << "\n"
     << "proposal_sigma = " << fmt(mcmc.proposal_sigma) << "\n"
     << "n_sweeps = " << mcmc.n_sweeps << "\n"
     << "burn_in = " << mcmc.burn_in << "\n"
     << "thinning = " << mcmc.thinning << "\n"
     << "adapt = " << bool_text(mcmc.adapt) << "\n"
     << "target_acceptance = " << fmt(mcmc.target_acceptance) << "\n\n"
     << "[anneal]\n"
     << "z_initial = " << fmt(schedule.z_initial) << "\n"
     << "growth = " << fmt(schedule.growth) << "\n"
     << "n_levels = " << schedule.n_levels << "\n"
     << "sweeps_per_level = " << schedule.sweeps_per_level << "\n\n"
     << "[analyze]\n";
  if (!input.empty()) os << "input = " << input << "\n";
  if (!reference.empty()) os << "reference = " << reference << "\n";
  os << "pair_i = " << pair_i << "\n"
     << "pair_j = " << pair_j << "\n"
     << "bin_width = " << fmt(bin_width) << "\n"
     << "r_max = " << fmt(r_max) << "\n";
  return os.str();
}

}  // namespace aodep
