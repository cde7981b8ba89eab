#pragma once

#include <vector>

#include "aodep/error.hpp"
#include "aodep/model.hpp"

namespace aodep {

/// Relative mobilities used to split a pair correction. Sphere-sphere
/// corrections split 1:1 and sphere-particle corrections 1:sigma_dot^2,
/// matching the local-time coefficients of the reflected SDE.
struct Mobility {
  double sphere = 1.0;
  double particle = 1.0;

  static Mobility from_params(const ModelParams& params) {
    return {1.0, params.sigma_particle * params.sigma_particle};
  }
};

/// Accumulated correction applied to one pair during a projection.
struct LedgerEntry {
  BodyPair pair;
  double separation = 0.0;  // total length by which the pair was pushed apart
  double local_time = 0.0;  // dimensionless local-time increment
};

struct ProjectionResult {
  Configuration cfg;
  std::vector<LedgerEntry> ledger;  // sorted by (kind, first, second)
  int sweeps = 0;
};

struct ProjectionSettings {
  int max_iters = 100;
  /// Pairs closer than target * (1 - slack) count as violated.
  double slack = 1e-12;
  /// Project sphere-particle pairs; off for the sphere-only dynamics.
  bool particles = true;
};

/// Gauss-Seidel projection onto the admissible set: each violated pair is
/// pushed apart along its center axis to exact contact distance, sweeping
/// until no pair is violated. Throws ProjectionError listing the violated
/// pairs after settings.max_iters sweeps.
ProjectionResult resolve_constraints(Configuration cfg, const ModelParams& params,
                                     const Mobility& weights,
                                     const ProjectionSettings& settings = {});

}  // namespace aodep
