#pragma once

#include <filesystem>
#include <string>

#include "aodep/config.hpp"

namespace aodep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;  // first error, empty on success
};

/// Executes one configured run and writes its artifacts under
/// `options.out_dir`. With several replicas each one gets its own
/// `replica_<k>` directory and the seed derive_seed(seed, k); a single
/// replica uses the master seed as is. Every output directory holds a
/// metadata.txt with the resolved config and a [result] section.
RunOutcome run(const RunConfig& config, const RunOptions& options = {});

/// Library version string.
std::string_view version();

}  // namespace aodep
