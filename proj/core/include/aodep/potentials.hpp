#pragma once

#include <span>

#include "aodep/model.hpp"

namespace aodep {

/// Convex C^1 hinge: 0 for t <= 0, t^2/4 on [0, 2], t - 1 for t >= 2.
double hinge_profile(double t) noexcept;
double hinge_profile_derivative(double t) noexcept;

enum class PotentialKind {
  sphere_confinement,    // a + phi(kappa (|x| - rho_0)), normalised to a probability
  particle_confinement,  // phi(kappa R^{d+1} (|x| - R)), zero on B(0, R)
};

/// Radial confinement potential built on the hinge profile.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::sphere_confinement;
  int d = 2;
  double hinge_radius = 0.0;   // rho_0, or R for the particle potential
  double slope = 1.0;          // kappa
  double normalization = 0.0;  // a; only used by the sphere potential

  /// Sphere confinement with `normalization` solved so that exp(-psi) has
  /// unit mass on R^d.
  static PotentialSpec sphere_confinement(int d, double hinge_radius, double slope);
  static PotentialSpec particle_confinement(int d, double radius, double slope = 1.0);

  /// Coefficient multiplying (|x| - hinge_radius) inside the hinge.
  double radial_scale() const;

  /// Largest gradient magnitude, reached in the linear regime.
  double gradient_bound() const { return radial_scale(); }

  void validate() const;
};

/// log of int_{R^d} exp(-phi(kappa (|x| - rho_0))) dx by radial quadrature.
double sphere_confinement_log_mass(int d, double hinge_radius, double slope);

/// Value of the potential at x; writes its gradient into `grad` (size d).
/// The gradient is taken to be zero at x = 0.
double psi_value_and_grad(const PotentialSpec& spec, std::span<const double> x,
                          std::span<double> grad);

double psi_value(const PotentialSpec& spec, std::span<const double> x);

/// The pair of confinement potentials driving the two-type dynamics.
struct PotentialPair {
  PotentialSpec sphere;
  PotentialSpec particle;
};

}  // namespace aodep
