#include "aodep/potentials.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "aodep/geometry.hpp"

namespace aodep {

double hinge_profile(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t <= 2.0) return 0.25 * t * t;
  return t - 1.0;
}

double hinge_profile_derivative(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t <= 2.0) return 0.5 * t;
  return 1.0;
}

void PotentialSpec::validate() const {
  if (d < 1) throw ParameterError("potential dimension must be >= 1");
  if (!(hinge_radius >= 0.0)) throw ParameterError("hinge radius must be >= 0");
  if (!(slope > 0.0)) throw ParameterError("potential slope must be > 0");
}

double PotentialSpec::radial_scale() const {
  if (kind == PotentialKind::sphere_confinement) return slope;
  return slope * std::pow(hinge_radius, d + 1);
}

double sphere_confinement_log_mass(int d, double hinge_radius, double slope) {
  using boost::math::quadrature::gauss_kronrod;
  const double surface = d * unit_ball_volume(d);
  const double dm1 = d - 1;
  // Inside the hinge the integrand is r^{d-1}.
  const double inner = std::pow(hinge_radius, d) / d;
  const double knee = hinge_radius + 2.0 / slope;
  const double middle = gauss_kronrod<double, 61>::integrate(
      [&](double r) {
        return std::pow(r, dm1) * std::exp(-hinge_profile(slope * (r - hinge_radius)));
      },
      hinge_radius, knee, 15, 1e-15);
  boost::math::quadrature::exp_sinh<double> tail_rule;
  const double tail = tail_rule.integrate(
      [&](double s) {
        const double r = knee + s;
        return std::pow(r, dm1) * std::exp(-(slope * (r - hinge_radius) - 1.0));
      },
      1e-15);
  return std::log(surface * (inner + middle + tail));
}

PotentialSpec PotentialSpec::sphere_confinement(int d, double hinge_radius, double slope) {
  PotentialSpec s;
  s.kind = PotentialKind::sphere_confinement;
  s.d = d;
  s.hinge_radius = hinge_radius;
  s.slope = slope;
  s.validate();
  s.normalization = sphere_confinement_log_mass(d, hinge_radius, slope);
  return s;
}

PotentialSpec PotentialSpec::particle_confinement(int d, double radius, double slope) {
  PotentialSpec s;
  s.kind = PotentialKind::particle_confinement;
  s.d = d;
  s.hinge_radius = radius;
  s.slope = slope;
  s.validate();
  return s;
}

double psi_value_and_grad(const PotentialSpec& spec, std::span<const double> x,
                          std::span<double> grad) {
  const double r = norm(x);
  const double scale = spec.radial_scale();
  const double t = scale * (r - spec.hinge_radius);
  const double base = spec.kind == PotentialKind::sphere_confinement ? spec.normalization : 0.0;
  const double dphi = hinge_profile_derivative(t);
  if (r > 0.0 && dphi != 0.0) {
    const double c = scale * dphi / r;
    for (std::size_t k = 0; k < x.size(); ++k) grad[k] = c * x[k];
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) grad[k] = 0.0;
  }
  return base + hinge_profile(t);
}

double psi_value(const PotentialSpec& spec, std::span<const double> x) {
  const double t = spec.radial_scale() * (norm(x) - spec.hinge_radius);
  const double base = spec.kind == PotentialKind::sphere_confinement ? spec.normalization : 0.0;
  return base + hinge_profile(t);
}

}  // namespace aodep
