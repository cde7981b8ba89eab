#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aodep/model.hpp"
#include "aodep/potentials.hpp"
#include "aodep/projection.hpp"
#include "aodep/random.hpp"

namespace aodep {

/// Which coefficient multiplies the gradient drifts of the spheres.
enum class DriftConvention {
  /// Coefficients as written for the reflected SDEs: -(sigma/2) grad psi in the
  /// two-type system, -(1/2) grad psi - (z/2) grad E in the depletion system.
  as_printed,
  /// -(sigma^2/2) on every gradient term, the choice for which
  /// exp(-psi - z E) is reversible at any sigma.
  reversible,
};

struct IntegratorSettings {
  double tol_overlap = kDefaultOverlapTolerance;
  int max_proj_iters = 100;
  DriftConvention sphere_drift = DriftConvention::as_printed;
  /// Multiply the particle drift by sigma_sphere as well.
  bool particle_drift_sigma_sphere = false;
  /// Scales every Gaussian increment; 0 turns the noise off.
  double noise_scale = 1.0;
};

/// Dense symmetric n x n matrix with zero diagonal.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void add(std::size_t i, std::size_t j, double v) {
    if (i == j) return;
    data_[i * n_ + j] += v;
    data_[j * n_ + i] += v;
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Dense n x m matrix.
class RectMatrix {
 public:
  RectMatrix() = default;
  RectMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * cols_ + k]; }
  void add(std::size_t i, std::size_t k, double v) { data_[i * cols_ + k] += v; }

  friend bool operator==(const RectMatrix&, const RectMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

struct IntegratorState {
  Configuration cfg;
  double t = 0.0;
  std::size_t step = 0;
  SymmetricMatrix local_time_spheres;  // L_ij
  RectMatrix local_time_particles;     // l_ik
  CounterRng rng;
  /// Ledger of the most recent step's projection.
  std::vector<LedgerEntry> last_ledger;

  static IntegratorState start(Configuration cfg, std::uint64_t seed);
};

/// One Euler-Maruyama step of the finite two-type reflected SDE followed by
/// projection onto the admissible set; projection corrections are credited
/// to the local-time accumulators.
IntegratorState step_two_type(IntegratorState state, const ModelParams& params,
                              const PotentialPair& potentials, double dt,
                              const IntegratorSettings& settings = {});

/// One Euler-Maruyama step of the sphere-only depletion gradient SDE.
IntegratorState step_depletion(IntegratorState state, const ModelParams& params,
                               const PotentialSpec& sphere_potential, double dt,
                               const IntegratorSettings& settings = {});

/// Deterministic part of the depletion step per unit time, one row per sphere.
PointSet depletion_drift(const PointSet& spheres, const ModelParams& params,
                         const PotentialSpec& sphere_potential,
                         const IntegratorSettings& settings = {});

/// dt = 1e-4 (2 r_sphere)^2 / sigma_sphere^2.
double default_time_step(const ModelParams& params);

enum class DynamicsMode { two_type, depletion };

struct Snapshot {
  std::size_t step = 0;
  double time = 0.0;
  Configuration cfg;
  /// Present when local times are recorded per snapshot.
  std::optional<SymmetricMatrix> local_time_spheres;
  std::optional<RectMatrix> local_time_particles;
};

struct SimulationSettings {
  DynamicsMode mode = DynamicsMode::depletion;
  double dt = 0.0;  // 0 selects default_time_step
  std::size_t n_steps = 0;
  std::size_t record_every = 1;
  std::uint64_t seed = 0;
  bool local_time_every_snapshot = false;
  IntegratorSettings integrator;
};

struct SimulationSummary {
  IntegratorState final_state;
  std::size_t snapshots = 0;
  /// Emitted snapshots failing is_admissible at tol_overlap.
  std::size_t violations = 0;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Integrates from `initial`, emitting the initial state and then every
/// record_every-th step. Step failures are rethrown as RuntimeFailure
/// carrying the failing step index.
SimulationSummary simulate(const Configuration& initial, const ModelParams& params,
                           const PotentialPair& potentials,
                           const SimulationSettings& settings, const SnapshotSink& sink);

std::vector<Snapshot> simulate_to_vector(const Configuration& initial,
                                         const ModelParams& params,
                                         const PotentialPair& potentials,
                                         const SimulationSettings& settings);

}  // namespace aodep
