#include "aodep/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "aodep/cell_list.hpp"

namespace aodep {

namespace {

using PairKey = std::tuple<int, std::size_t, std::size_t>;

struct Ledger {
  std::map<PairKey, LedgerEntry> entries;

  void credit(BodyPair pair, double separation, double local_time) {
    const PairKey key{static_cast<int>(pair.kind), pair.first, pair.second};
    auto [it, inserted] = entries.try_emplace(key, LedgerEntry{pair, 0.0, 0.0});
    it->second.separation += separation;
    it->second.local_time += local_time;
  }

  std::vector<LedgerEntry> flatten() const {
    std::vector<LedgerEntry> out;
    out.reserve(entries.size());
    for (const auto& [key, e] : entries) out.push_back(e);
    return out;
  }
};

// Pushes a and b apart to distance `target`, moving them by fractions
// wa/(wa+wb) and wb/(wa+wb) of the deficit. Returns the deficit.
double separate(std::span<double> a, std::span<double> b, double target,
                double wa, double wb) {
  const std::size_t d = a.size();
  double s2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) s2 += (a[k] - b[k]) * (a[k] - b[k]);
  const double s = std::sqrt(s2);
  const double deficit = target - s;
  double fa = 0.5, fb = 0.5;
  if (wa + wb > 0.0) {
    fa = wa / (wa + wb);
    fb = wb / (wa + wb);
  }
  for (std::size_t k = 0; k < d; ++k) {
    // Coincident centers separate along the first axis.
    const double axis = s > 0.0 ? (a[k] - b[k]) / s : (k == 0 ? 1.0 : 0.0);
    a[k] += fa * deficit * axis;
    b[k] -= fb * deficit * axis;
  }
  return deficit;
}

}  // namespace

ProjectionResult resolve_constraints(Configuration cfg, const ModelParams& params,
                                     const Mobility& weights,
                                     const ProjectionSettings& settings) {
  require_dimension(cfg, params);
  const double ss_target = 2.0 * params.r_sphere;
  const double sp_target = params.r_depletion();
  const double ss_min = ss_target * (1.0 - settings.slack);
  const double sp_min = sp_target * (1.0 - settings.slack);
  const double ss_min2 = ss_min * ss_min;
  const double sp_min2 = sp_min * sp_min;
  const double wsum = weights.sphere + weights.particle;
  const bool with_particles = settings.particles && !cfg.particles.empty();

  Ledger ledger;
  CellList cells;
  std::vector<std::size_t> candidates;
  auto& spheres = cfg.spheres;
  auto& particles = cfg.particles;

  for (int sweep = 1; sweep <= settings.max_iters; ++sweep) {
    bool violated = false;
    for (std::size_t i = 0; i < spheres.size(); ++i)
      for (std::size_t j = i + 1; j < spheres.size(); ++j) {
        if (squared_distance(spheres[i], spheres[j]) >= ss_min2) continue;
        violated = true;
        const double deficit = separate(spheres[i], spheres[j], ss_target,
                                        weights.sphere, weights.sphere);
        ledger.credit({BodyPair::Kind::sphere_sphere, i, j}, deficit,
                      0.5 * deficit / ss_target);
      }
    if (with_particles) {
      cells.rebuild(particles, sp_target);
      for (std::size_t i = 0; i < spheres.size(); ++i) {
        candidates.clear();
        cells.for_each_candidate(spheres[i], sp_target,
                                 [&](std::size_t k) { candidates.push_back(k); });
        std::sort(candidates.begin(), candidates.end());
        for (std::size_t k : candidates) {
          if (squared_distance(spheres[i], particles[k]) >= sp_min2) continue;
          violated = true;
          const double deficit = separate(spheres[i], particles[k], sp_target,
                                          weights.sphere, weights.particle);
          const double share = wsum > 0.0 ? weights.sphere / wsum : 0.5;
          ledger.credit({BodyPair::Kind::sphere_particle, i, k}, deficit,
                        share * deficit / sp_target);
        }
      }
    }
    if (!violated) {
      return {std::move(cfg), ledger.flatten(), sweep};
    }
  }

  std::vector<BodyPair> offending;
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    for (std::size_t j = i + 1; j < spheres.size(); ++j)
      if (squared_distance(spheres[i], spheres[j]) < ss_min2)
        offending.push_back({BodyPair::Kind::sphere_sphere, i, j});
    if (with_particles)
      for (std::size_t k = 0; k < particles.size(); ++k)
        if (squared_distance(spheres[i], particles[k]) < sp_min2)
          offending.push_back({BodyPair::Kind::sphere_particle, i, k});
  }
  throw ProjectionError("constraint projection did not converge after " +
                            std::to_string(settings.max_iters) + " sweeps",
                        std::move(offending));
}

}  // namespace aodep
