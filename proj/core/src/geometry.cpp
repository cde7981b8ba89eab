#include "aodep/geometry.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "aodep/contacts.hpp"
#include "aodep/random.hpp"

namespace aodep {

namespace {

constexpr double pi = std::numbers::pi;

void require_u(double u) {
  if (!(u >= 0.0)) throw ParameterError("overlap argument u must be >= 0");
}

// (base)_+^{exponent}, zero for base <= 0 before exponentiation.
double positive_power(double base, double exponent) {
  if (base <= 0.0) return 0.0;
  if (exponent == 0.5) return std::sqrt(base);
  if (exponent == 1.0) return base;
  return std::pow(base, exponent);
}

}  // namespace

double unit_ball_volume(int d) {
  if (d < 1) throw ParameterError("unit_ball_volume requires d >= 1");
  if (d == 1) return 2.0;
  if (d == 2) return pi;
  if (d == 3) return 4.0 * pi / 3.0;
  return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double overlap_quadrature(double u, int d, double r_dep) {
  require_u(u);
  if (d < 2) throw ParameterError("overlap_quadrature requires d >= 2");
  if (u >= 1.0) return 0.0;
  const double upper = std::acos(u);
  const auto integrand = [d](double theta) { return std::pow(std::sin(theta), d); };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 15, 1e-14, &error);
  return 2.0 * unit_ball_volume(d - 1) * std::pow(r_dep, d) * integral;
}

double overlap_closed_2d(double u, double r_dep) {
  require_u(u);
  if (u >= 1.0) return 0.0;
  return 2.0 * r_dep * r_dep * (std::acos(u) - u * std::sqrt(1.0 - u * u));
}

double overlap_closed_3d(double u, double r_dep) {
  require_u(u);
  if (u >= 1.0) return 0.0;
  const double w = 1.0 - u;
  return (4.0 * pi / 3.0) * r_dep * r_dep * r_dep * w * w * (1.0 + 0.5 * u);
}

double overlap_volume(double u, int d, double r_dep) {
  switch (d) {
    case 2: return overlap_closed_2d(u, r_dep);
    case 3: return overlap_closed_3d(u, r_dep);
    default: return overlap_quadrature(u, d, r_dep);
  }
}

double overlap_derivative(double u, int d, double r_dep) {
  require_u(u);
  if (d < 2) throw ParameterError("overlap_derivative requires d >= 2");
  if (u >= 1.0) return 0.0;
  return -2.0 * unit_ball_volume(d - 1) * std::pow(r_dep, d) *
         positive_power(1.0 - u * u, 0.5 * (d - 1));
}

double max_overlap(const ModelParams& params) {
  return OverlapPotential(params).max_value();
}

RhoThresholds rho_thresholds(int d) {
  if (d < 2) throw ParameterError("rho_thresholds requires d >= 2");
  const double rho2 = 2.0 * std::sqrt(3.0) / 3.0 - 1.0;
  const double rho3 = d == 2 ? std::sqrt(2.0) - 1.0 : std::sqrt(1.5) - 1.0;
  return {rho2, rho3};
}

bool pairwise_is_exact(const ModelParams& params) {
  return params.rho() <= rho_thresholds(params.d).rho2;
}

double three_body_2d(std::span<const double> x1, std::span<const double> x2,
                     std::span<const double> x3, double r_dep) {
  if (x1.size() != 2 || x2.size() != 2 || x3.size() != 2)
    throw DimensionError("three_body_2d requires planar points");
  const std::array<std::span<const double>, 3> p = {x1, x2, x3};
  const double a2 = squared_distance(x1, x2);
  const double b2 = squared_distance(x1, x3);
  const double c2 = squared_distance(x2, x3);
  const double r2 = r_dep * r_dep;
  if (a2 == 0.0 && b2 == 0.0) return pi * r2;

  const double longest = std::max({a2, b2, c2});
  if (longest >= 4.0 * r2) return 0.0;

  // 16 area^2 of the center triangle (Heron in squared side lengths).
  const double q = 4.0 * a2 * b2 - (a2 + b2 - c2) * (a2 + b2 - c2);
  if (q <= 1e-12 * longest * longest)
    throw ParameterError("three_body_2d: collinear or coincident centers");

  // Minimal enclosing circle of the centers: half the longest side for a
  // non-acute triangle, the circumradius otherwise.
  const std::array<double, 3> s2 = {c2, b2, a2};  // side opposite vertex k
  double mec2 = 0.0;
  if (2.0 * longest >= a2 + b2 + c2) {
    mec2 = longest / 4.0;
  } else {
    mec2 = (a2 * b2 * c2) / q;  // R^2 = a^2 b^2 c^2 / (16 area^2)
  }
  if (mec2 > r2) return 0.0;

  // Lens case: both corners of the lens of pair (i, j) lie in disc k, so
  // the common intersection is that lens.
  const double tol = 1e-12 * r2;
  for (int k = 0; k < 3; ++k) {
    const auto& pi_ = p[(k + 1) % 3];
    const auto& pj = p[(k + 2) % 3];
    const double dij2 = s2[k];
    const double dij = std::sqrt(dij2);
    const double h = std::sqrt(std::max(0.0, r2 - dij2 / 4.0));
    const double mx = 0.5 * (pi_[0] + pj[0]);
    const double my = 0.5 * (pi_[1] + pj[1]);
    const double ex = -(pj[1] - pi_[1]) / dij;
    const double ey = (pj[0] - pi_[0]) / dij;
    int inside = 0;
    for (double sign : {1.0, -1.0}) {
      const std::array<double, 2> corner = {mx + sign * h * ex, my + sign * h * ey};
      if (squared_distance(corner, p[k]) <= r2 + tol) ++inside;
    }
    if (inside == 2) return overlap_closed_2d(dij / (2.0 * r_dep), r_dep);
  }

  const double pair_sum = overlap_closed_2d(std::sqrt(a2) / (2.0 * r_dep), r_dep) +
                          overlap_closed_2d(std::sqrt(b2) / (2.0 * r_dep), r_dep) +
                          overlap_closed_2d(std::sqrt(c2) / (2.0 * r_dep), r_dep);
  return 0.5 * (pair_sum - pi * r2 + 0.5 * std::sqrt(q));
}

double pair_overlap_sum(const PointSet& spheres, std::size_t i,
                        std::span<const double> position,
                        const OverlapPotential& overlap) {
  const double reach2 = 4.0 * overlap.r_depletion() * overlap.r_depletion();
  double sum = 0.0;
  for (std::size_t j = 0; j < spheres.size(); ++j) {
    if (j == i) continue;
    const double s2 = squared_distance(position, spheres[j]);
    if (s2 >= reach2) continue;
    sum += overlap.at_distance(std::sqrt(s2));
  }
  return sum;
}

double energy_pairwise(const PointSet& spheres, const ModelParams& params) {
  require_dimension(spheres, params);
  const OverlapPotential overlap(params);
  const double r = params.r_depletion();
  const double reach2 = 4.0 * r * r;
  double e = static_cast<double>(spheres.size()) * unit_ball_volume(params.d) *
             std::pow(r, params.d);
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (std::size_t j = i + 1; j < spheres.size(); ++j) {
      const double s2 = squared_distance(spheres[i], spheres[j]);
      if (s2 < reach2) e -= overlap.at_distance(std::sqrt(s2));
    }
  return e;
}

void energy_gradient_into(const PointSet& spheres, const ModelParams& params,
                          std::span<double> out) {
  require_dimension(spheres, params);
  const auto d = static_cast<std::size_t>(params.d);
  if (out.size() != spheres.size() * d)
    throw DimensionError("energy_gradient_into: output has the wrong size");
  const double r = params.r_depletion();
  const double four_r2 = 4.0 * r * r;
  double prefactor = unit_ball_volume(params.d - 1);
  for (int k = 1; k < params.d; ++k) prefactor *= r;
  const double exponent = 0.5 * (params.d - 1);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (std::size_t j = i + 1; j < spheres.size(); ++j) {
      const double s2 = squared_distance(spheres[i], spheres[j]);
      if (s2 >= four_r2) continue;
      if (s2 == 0.0)
        throw ParameterError("energy_gradient: coincident sphere centers " +
                             std::to_string(i) + ", " + std::to_string(j));
      const double mag = prefactor * positive_power(1.0 - s2 / four_r2, exponent) / std::sqrt(s2);
      for (std::size_t k = 0; k < d; ++k) {
        const double c = mag * (spheres[i][k] - spheres[j][k]);
        out[i * d + k] += c;
        out[j * d + k] -= c;
      }
    }
}

PointSet energy_gradient(const PointSet& spheres, const ModelParams& params) {
  PointSet grad(params.d, spheres.size());
  energy_gradient_into(spheres, params, grad.flat());
  return grad;
}

VolumeEstimate monte_carlo_union_volume(const PointSet& spheres,
                                        const ModelParams& params,
                                        std::uint64_t samples,
                                        std::uint64_t seed) {
  if (spheres.empty()) return {};
  require_dimension(spheres, params);
  if (samples < 10'000)
    throw ParameterError("monte_carlo_union_volume requires >= 1e4 samples");
  const int d = params.d;
  const double r = params.r_depletion();
  const double r2 = r * r;
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (std::size_t i = 0; i < spheres.size(); ++i)
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], spheres[i][k] - r);
      hi[k] = std::max(hi[k], spheres[i][k] + r);
    }
  double box = 1.0;
  for (int k = 0; k < d; ++k) box *= hi[k] - lo[k];

  CounterRng rng(seed);
  std::vector<double> x(d);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int k = 0; k < d; ++k) x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    for (std::size_t i = 0; i < spheres.size(); ++i)
      if (squared_distance(x, spheres[i]) <= r2) {
        ++hits;
        break;
      }
  }
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  return {box * p, box * std::sqrt(p * (1.0 - p) / n)};
}

double minimal_energy(long n, const ModelParams& params) {
  if (n < 1) throw ParameterError("minimal_energy requires n >= 1");
  if (params.d != 2 && params.d != 3)
    throw ParameterError("minimal_energy is available for d = 2, 3");
  const double single = unit_ball_volume(params.d) * std::pow(params.r_depletion(), params.d);
  const long c = max_contact_number(n, params.d);
  return static_cast<double>(n) * single - static_cast<double>(c) * max_overlap(params);
}

double asymptotic_minimal_energy(long n, int d, double rho, double r_sphere) {
  if (n < 1) throw ParameterError("asymptotic_minimal_energy requires n >= 1");
  if (d != 2 && d != 3)
    throw ParameterError("asymptotic_minimal_energy is available for d = 2, 3");
  if (rho < 0.0 || rho > rho_thresholds(d).rho2)
    throw ParameterError("asymptotic_minimal_energy requires 0 <= rho <= rho_2");
  const double c = static_cast<double>(max_contact_number(n, d));
  const double nn = static_cast<double>(n);
  if (d == 2) {
    const double coeff = 8.0 * std::numbers::sqrt2 / (3.0 * pi);
    return nn * pi * r_sphere * r_sphere *
           (1.0 + 2.0 * rho + rho * rho - coeff * (c / nn) * std::pow(rho, 1.5));
  }
  return nn * (4.0 / 3.0) * pi * r_sphere * r_sphere * r_sphere *
         (1.0 + 3.0 * rho + 3.0 * (1.0 - c / (2.0 * nn)) * rho * rho);
}

EnergyModel::EnergyModel(ModelParams params, BodyOrder order,
                         std::uint64_t mc_samples, std::uint64_t mc_seed)
    : params_(params), order_(order), mc_samples_(mc_samples), mc_seed_(mc_seed) {
  params_.validate();
  if (order_ == BodyOrder::pairwise_plus_triple && params_.d != 2)
    throw ParameterError("pairwise-plus-triple energy is only available in d = 2");
}

EnergyEstimate EnergyModel::evaluate(const PointSet& spheres) const {
  switch (order_) {
    case BodyOrder::pairwise:
      return {energy_pairwise(spheres, params_), 0.0, pairwise_is_exact(params_)};
    case BodyOrder::pairwise_plus_triple: {
      double e = energy_pairwise(spheres, params_);
      const double r = params_.r_depletion();
      for (std::size_t i = 0; i < spheres.size(); ++i)
        for (std::size_t j = i + 1; j < spheres.size(); ++j)
          for (std::size_t k = j + 1; k < spheres.size(); ++k)
            e += three_body_2d(spheres[i], spheres[j], spheres[k], r);
      return {e, 0.0, params_.rho() <= rho_thresholds(2).rho3};
    }
    case BodyOrder::monte_carlo: {
      const auto est = monte_carlo_union_volume(spheres, params_, mc_samples_, mc_seed_);
      return {est.value, est.std_error, false};
    }
  }
  return {};
}

}  // namespace aodep
