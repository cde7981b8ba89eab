#pragma once

#include <cstdint>

#include "aodep/model.hpp"

namespace aodep {

/// Volume of the unit ball in R^d, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// Overlap volume of two balls of radius r_dep whose centers are 2 r_dep u
/// apart, by adaptive quadrature of 2 v_{d-1} r^d int_0^{acos u} sin^d.
/// Zero for u >= 1.
double overlap_quadrature(double u, int d, double r_dep);

/// Closed forms of the same overlap, valid on all of [0, 1] and zero beyond.
double overlap_closed_2d(double u, double r_dep);
double overlap_closed_3d(double u, double r_dep);

/// Closed form for d = 2, 3; quadrature otherwise.
double overlap_volume(double u, int d, double r_dep);

/// d/du of the overlap volume: -2 v_{d-1} r^d (1 - u^2)^{(d-1)/2} on [0, 1),
/// exactly zero for u >= 1.
double overlap_derivative(double u, int d, double r_dep);

/// Radial pair overlap bound to a model: u = |x_i - x_j| / (2 r_dep).
class OverlapPotential {
 public:
  explicit OverlapPotential(const ModelParams& params)
      : d_(params.d), r_dep_(params.r_depletion()), rho_(params.rho()) {}

  int dim() const noexcept { return d_; }
  double r_depletion() const noexcept { return r_dep_; }
  double rho() const noexcept { return rho_; }

  double value(double u) const { return overlap_volume(u, d_, r_dep_); }
  double derivative(double u) const { return overlap_derivative(u, d_, r_dep_); }
  /// Value at hard contact, u = 1/(1+rho).
  double max_value() const { return value(1.0 / (1.0 + rho_)); }

  /// Overlap of the depletion balls of two centers at distance `dist`.
  double at_distance(double dist) const { return value(dist / (2.0 * r_dep_)); }

 private:
  int d_;
  double r_dep_;
  double rho_;
};

/// Maximal pair overlap V*, evaluated afresh from params.
double max_overlap(const ModelParams& params);

struct RhoThresholds {
  double rho2;  // above: three-body terms appear
  double rho3;  // above: four-body terms appear
};

RhoThresholds rho_thresholds(int d);

/// True when the union volume is exactly the pairwise inclusion-exclusion sum.
bool pairwise_is_exact(const ModelParams& params);

/// Three-body term phi_3 = +area of the common intersection of three discs
/// of radius r_dep; zero when that intersection is empty.
double three_body_2d(std::span<const double> x1, std::span<const double> x2,
                     std::span<const double> x3, double r_dep);

/// n v_d r^d - sum_{i<j} V(|x_i - x_j| / 2r).
double energy_pairwise(const PointSet& spheres, const ModelParams& params);

/// Pair terms involving sphere i placed at `position`: sum_{j != i} V(u_ij).
double pair_overlap_sum(const PointSet& spheres, std::size_t i,
                        std::span<const double> position,
                        const OverlapPotential& overlap);

/// Gradient of energy_pairwise; component i is
/// v_{d-1} r^{d-1} sum_j (1 - |x_i-x_j|^2/4r^2)_+^{(d-1)/2} (x_i-x_j)/|x_i-x_j|.
PointSet energy_gradient(const PointSet& spheres, const ModelParams& params);

/// Same gradient written into `out` (flat, n * d values, overwritten).
void energy_gradient_into(const PointSet& spheres, const ModelParams& params,
                          std::span<double> out);

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Hit-or-miss estimate of the union of depletion balls over its tight
/// bounding box. Deterministic in `seed`; requires samples >= 10^4.
VolumeEstimate monte_carlo_union_volume(const PointSet& spheres,
                                        const ModelParams& params,
                                        std::uint64_t samples,
                                        std::uint64_t seed);

/// E_* = n v_d r^d - c(n, d) V*, for d = 2, 3.
double minimal_energy(long n, const ModelParams& params);

/// Small-rho expansion of E_* with the remainder dropped: O(rho^{5/2}) in
/// d = 2, O(rho^3) in d = 3. Requires rho <= rho_2.
double asymptotic_minimal_energy(long n, int d, double rho,
                                 double r_sphere = 1.0);

enum class BodyOrder { pairwise, pairwise_plus_triple, monte_carlo };

struct EnergyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;  // false: pairwise truncation or a stochastic estimate
};

/// Union-of-balls energy under a chosen truncation of inclusion-exclusion.
class EnergyModel {
 public:
  explicit EnergyModel(ModelParams params,
                       BodyOrder order = BodyOrder::pairwise,
                       std::uint64_t mc_samples = 1'000'000,
                       std::uint64_t mc_seed = 0);

  const ModelParams& params() const noexcept { return params_; }
  BodyOrder body_order() const noexcept { return order_; }

  EnergyEstimate evaluate(const PointSet& spheres) const;

 private:
  ModelParams params_;
  BodyOrder order_;
  std::uint64_t mc_samples_;
  std::uint64_t mc_seed_;
};

}  // namespace aodep
