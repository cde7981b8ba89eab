#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aodep/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "aodep_out";
  std::optional<std::size_t> replicas;
  unsigned threads = 1;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "Master seed, overrides the config");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--replicas", f.replicas, "Independent replicas, overrides the config")
      ->check(CLI::PositiveNumber);
  sub->add_option("--threads", f.threads, "Worker threads for replicas")->check(CLI::PositiveNumber);
}

int execute(aodep::RunMode mode, const Flags& f) {
  std::ifstream in(f.config);
  if (!in) {
    std::cerr << "aodep: cannot read " << f.config << "\n";
    return aodep::kExitConfigError;
  }
  std::stringstream text;
  text << in.rdbuf();

  aodep::RunConfig cfg;
  try {
    cfg = aodep::parse_config(text.str(), mode);
  } catch (const aodep::ConfigError& e) {
    std::cerr << "aodep: " << f.config << ": " << e.what() << "\n";
    return aodep::kExitConfigError;
  } catch (const aodep::Error& e) {
    std::cerr << "aodep: " << f.config << ": " << e.what() << "\n";
    return aodep::kExitConfigError;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.replicas) cfg.replicas = *f.replicas;
  for (const auto& w : cfg.warnings) std::cerr << "aodep: warning: " << w << "\n";

  const auto outcome = aodep::run(cfg, {f.out, f.threads});
  if (outcome.exit_code != aodep::kExitOk)
    std::cerr << "aodep: " << outcome.message << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-size hard-sphere depletion simulator"};
  app.set_version_flag("--version", std::string(aodep::version()));
  app.require_subcommand(1);

  Flags flags;
  std::optional<aodep::RunMode> chosen;
  for (auto mode : {aodep::RunMode::two_type, aodep::RunMode::depletion,
                    aodep::RunMode::sample_equilibrium, aodep::RunMode::anneal_pack,
                    aodep::RunMode::analyze}) {
    auto* sub = app.add_subcommand(std::string(aodep::to_string(mode)));
    add_flags(sub, flags);
    sub->callback([&chosen, mode] { chosen = mode; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aodep::kExitConfigError;
  }
  return execute(*chosen, flags);
}
