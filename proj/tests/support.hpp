#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "aodep/model.hpp"
#include "aodep/random.hpp"

namespace aodep::testing {

inline ModelParams params2(double rho = 0.1, double r = 1.0) {
  ModelParams p;
  p.d = 2;
  p.r_sphere = r;
  p.r_particle = rho * r;
  return p;
}

inline ModelParams params3(double rho = 0.1, double r = 1.0) {
  ModelParams p = params2(rho, r);
  p.d = 3;
  return p;
}

inline PointSet points(int d, std::vector<double> flat) { return PointSet(d, std::move(flat)); }

/// Random sequential addition of n spheres in a box of side `box`, each new
/// center at least 2 r_sphere from the previous ones. With `touching` set,
/// every new sphere after the first is placed near contact with an earlier
/// one so that depletion balls overlap.
inline PointSet random_admissible(std::size_t n, const ModelParams& p, CounterRng& rng,
                                  bool touching = true, double box = 8.0) {
  PointSet s(p.d);
  std::vector<double> x(static_cast<std::size_t>(p.d));
  while (s.size() < n) {
    if (touching && s.size() > 0) {
      const auto anchor = s[static_cast<std::size_t>(rng.uniform() * static_cast<double>(s.size()))];
      double nrm = 0.0;
      for (auto& v : x) {
        v = rng.normal();
        nrm += v * v;
      }
      nrm = std::sqrt(nrm);
      const double dist = 2.0 * p.r_sphere + rng.uniform() * 2.0 * p.r_particle;
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = anchor[k] + dist * x[k] / nrm;
    } else {
      for (auto& v : x) v = (rng.uniform() - 0.5) * box * p.r_sphere;
    }
    bool ok = true;
    for (std::size_t j = 0; j < s.size() && ok; ++j)
      ok = distance(s[j], x) >= 2.0 * p.r_sphere * (1.0 + 1e-9);
    if (ok) s.push_back(x);
  }
  return s;
}

/// Site (a, b) of the triangular lattice with nearest-neighbour spacing 2r.
inline std::vector<double> lattice_site(int a, int b, double r = 1.0) {
  return {2.0 * r * (a + 0.5 * b), 2.0 * r * (std::numbers::sqrt3 / 2.0) * b};
}

/// Applies x -> Q x + t with Q a random rotation (product of Givens
/// rotations) and t a random shift.
inline PointSet random_rigid_motion(const PointSet& s, CounterRng& rng) {
  const int d = s.dim();
  std::vector<double> q(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(i * d + i)] = 1.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      const double c = std::cos(th), sn = std::sin(th);
      for (int k = 0; k < d; ++k) {
        auto& qa = q[static_cast<std::size_t>(a * d + k)];
        auto& qb = q[static_cast<std::size_t>(b * d + k)];
        const double ya = c * qa - sn * qb, yb = sn * qa + c * qb;
        qa = ya;
        qb = yb;
      }
    }
  std::vector<double> t(static_cast<std::size_t>(d));
  for (auto& v : t) v = 10.0 * (rng.uniform() - 0.5);
  PointSet out(d);
  std::vector<double> y(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int a = 0; a < d; ++a) {
      double v = t[static_cast<std::size_t>(a)];
      for (int k = 0; k < d; ++k) v += q[static_cast<std::size_t>(a * d + k)] * s[i][static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(a)] = v;
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace aodep::testing
