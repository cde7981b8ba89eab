#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "aodep/dynamics.hpp"
#include "aodep/geometry.hpp"

using namespace aodep;
using namespace aodep::testing;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Potentials that are identically flat on a large ball around the origin.
PotentialPair flat_potentials(int d) {
  return {PotentialSpec::sphere_confinement(d, 1000.0, 1.0),
          PotentialSpec::particle_confinement(d, 1000.0, 1.0)};
}

IntegratorSettings quiet() {
  IntegratorSettings s;
  s.noise_scale = 0.0;
  return s;
}

}  // namespace

TEST_CASE("hinge profile") {
  CHECK(hinge_profile(-1.0) == 0.0);
  CHECK(hinge_profile(0.0) == 0.0);
  CHECK(hinge_profile(1.0) == 0.25);
  CHECK(hinge_profile(2.0) == 1.0);
  CHECK(hinge_profile(5.0) == 4.0);
  CHECK(hinge_profile_derivative(-1.0) == 0.0);
  CHECK(hinge_profile_derivative(1.0) == 0.5);
  CHECK(hinge_profile_derivative(2.0) == 1.0);
  CHECK(hinge_profile_derivative(7.0) == 1.0);
  for (double t : {-0.3, 0.4, 1.0, 1.9, 2.5}) {
    const double h = 1e-6;
    CHECK(hinge_profile_derivative(t) ==
          doctest::Approx((hinge_profile(t + h) - hinge_profile(t - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("confinement potentials") {
  SUBCASE("particle potential vanishes on its ball") {
    const auto spec = PotentialSpec::particle_confinement(2, 4.0);
    std::vector<double> g(2, 9.0);
    CHECK(psi_value_and_grad(spec, std::vector<double>{2.0, 0.0}, g) == 0.0);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(psi_value(spec, std::vector<double>{0.0, 4.0}) == 0.0);
    CHECK(psi_value(spec, std::vector<double>{0.0, 4.01}) > 0.0);
    // Linear regime: slope kappa R^{d+1}.
    const double far = 4.0 + 3.0 / spec.radial_scale();
    psi_value_and_grad(spec, std::vector<double>{far, 0.0}, g);
    CHECK(g[0] == doctest::Approx(std::pow(4.0, 3)).epsilon(1e-14));
    CHECK(spec.gradient_bound() == doctest::Approx(64.0).epsilon(1e-14));
  }
  SUBCASE("sphere potential slope") {
    const auto spec = PotentialSpec::sphere_confinement(3, 2.0, 0.7);
    std::vector<double> g(3);
    const double r = 2.0 + 3.0 / 0.7;
    psi_value_and_grad(spec, std::vector<double>{0.0, r * 0.6, r * 0.8}, g);
    CHECK(norm(g) == doctest::Approx(0.7).epsilon(1e-14));
    psi_value_and_grad(spec, std::vector<double>{0.0, 0.0, 0.0}, g);
    CHECK(norm(g) == 0.0);
  }
  SUBCASE("gradient matches finite differences and is bounded") {
    CounterRng rng(2);
    for (auto spec : {PotentialSpec::sphere_confinement(2, 1.0, 2.0),
                      PotentialSpec::particle_confinement(2, 1.5, 1.0),
                      PotentialSpec::sphere_confinement(3, 0.5, 1.0)}) {
      const auto d = static_cast<std::size_t>(spec.d);
      std::vector<double> x(d), g(d), xp(d), xm(d);
      for (int t = 0; t < 50; ++t) {
        for (auto& v : x) v = 6.0 * (rng.uniform() - 0.5);
        psi_value_and_grad(spec, x, g);
        CHECK(norm(g) <= spec.gradient_bound() * (1 + 1e-12));
        for (std::size_t k = 0; k < d; ++k) {
          xp = x;
          xm = x;
          const double h = 1e-6;
          xp[k] += h;
          xm[k] -= h;
          const double fd = (psi_value(spec, xp) - psi_value(spec, xm)) / (2 * h);
          CHECK(std::abs(g[k] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
      }
    }
  }
  SUBCASE("sphere potential is a probability density") {
    for (int d : {2, 3}) {
      for (auto [rho0, kappa] : {std::pair{5.0, 1.0}, std::pair{0.0, 0.1}, std::pair{1.0, 2.0}}) {
        const auto spec = PotentialSpec::sphere_confinement(d, rho0, kappa);
        const double surface = d * unit_ball_volume(d);
        const double top = rho0 + 80.0 / kappa;
        const double mass = simpson(
            [&](double r) {
              std::vector<double> x(static_cast<std::size_t>(d), 0.0);
              x[0] = r;
              return surface * std::pow(r, d - 1) * std::exp(-psi_value(spec, x));
            },
            0.0, top, 200000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        // Finite second moment.
        const double second = simpson(
            [&](double r) {
              std::vector<double> x(static_cast<std::size_t>(d), 0.0);
              x[0] = r;
              return surface * std::pow(r, d + 1) * std::exp(-psi_value(spec, x));
            },
            0.0, top, 200000);
        CHECK(std::isfinite(second));
      }
    }
  }
}

TEST_CASE("constraint projection") {
  const ModelParams p = params2();
  SUBCASE("admissible input is left alone") {
    Configuration cfg(points(2, {0, 0, 2, 0, 5, 5}), points(2, {0, 3, 9, 9}));
    const auto res = resolve_constraints(cfg, p, Mobility::from_params(p));
    CHECK(res.cfg == cfg);
    CHECK(res.ledger.empty());
  }
  SUBCASE("symmetric split of one pair") {
    Configuration cfg(points(2, {0, 0, 1.8, 0}), PointSet(2));
    const auto res = resolve_constraints(cfg, p, Mobility::from_params(p));
    CHECK(res.cfg.spheres[0][0] == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(res.cfg.spheres[1][0] == doctest::Approx(1.9).epsilon(1e-14));
    CHECK(distance(res.cfg.spheres[0], res.cfg.spheres[1]) == doctest::Approx(2.0).epsilon(1e-14));
    REQUIRE(res.ledger.size() == 1);
    CHECK(res.ledger[0].separation == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("collinear chain of three") {
    // Equal mobilities conserve the centroid 1.8, so the limit is
    // (-0.2, 1.8, 3.8); each outer sphere travels 0.2, the full share of
    // its only pair, so both pairs accumulate separation 0.4.
    Configuration cfg(points(2, {0, 0, 1.8, 0, 3.6, 0}), PointSet(2));
    const auto res = resolve_constraints(cfg, p, Mobility::from_params(p));
    CHECK(is_admissible(res.cfg, p));
    CHECK(res.cfg.spheres[0][0] == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(res.cfg.spheres[1][0] == doctest::Approx(1.8).epsilon(1e-9));
    CHECK(res.cfg.spheres[2][0] == doctest::Approx(3.8).epsilon(1e-9));
    REQUIRE(res.ledger.size() == 2);
    for (const auto& e : res.ledger) {
      CHECK(e.separation == doctest::Approx(0.4).epsilon(1e-9));
      CHECK(e.local_time == doctest::Approx(0.1).epsilon(1e-9));
    }
  }
  SUBCASE("idempotent") {
    CounterRng rng(4);
    for (int t = 0; t < 20; ++t) {
      PointSet s(2), q(2);
      for (int i = 0; i < 6; ++i)
        s.push_back(std::vector<double>{4 * rng.uniform(), 4 * rng.uniform()});
      for (int i = 0; i < 30; ++i)
        q.push_back(std::vector<double>{6 * rng.uniform() - 1, 6 * rng.uniform() - 1});
      const auto once = resolve_constraints(Configuration(s, q), p, Mobility::from_params(p),
                                            {1000, 1e-12, true});
      CHECK(is_admissible(once.cfg, p));
      const auto twice = resolve_constraints(once.cfg, p, Mobility::from_params(p));
      CHECK(twice.cfg == once.cfg);
      CHECK(twice.ledger.empty());
    }
  }
  SUBCASE("non-convergence names the pairs") {
    Configuration cfg(points(2, {0, 0, 1.8, 0, 3.6, 0}), PointSet(2));
    ProjectionSettings ps;
    ps.max_iters = 1;
    try {
      resolve_constraints(cfg, p, Mobility::from_params(p), ps);
      FAIL("expected ProjectionError");
    } catch (const ProjectionError& e) {
      CHECK_FALSE(e.pairs().empty());
      for (const auto& bp : e.pairs()) CHECK(bp.kind == BodyPair::Kind::sphere_sphere);
    }
  }
}

TEST_CASE("two-type step") {
  SUBCASE("free sphere increments are Gaussian") {
    ModelParams p = params2();
    p.sigma_sphere = 1.5;
    const double dt = 1e-3;
    IntegratorState s = IntegratorState::start(Configuration(points(2, {0, 0}), PointSet(2)), 99);
    const int n = 100000;
    double m[2] = {0, 0}, v[2] = {0, 0}, c = 0;
    for (int k = 0; k < n; ++k) {
      const double x0 = s.cfg.spheres[0][0], y0 = s.cfg.spheres[0][1];
      s = step_two_type(std::move(s), p, flat_potentials(2), dt);
      const double dx = s.cfg.spheres[0][0] - x0, dy = s.cfg.spheres[0][1] - y0;
      m[0] += dx;
      m[1] += dy;
      v[0] += dx * dx;
      v[1] += dy * dy;
      c += dx * dy;
    }
    const double var = p.sigma_sphere * p.sigma_sphere * dt;
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(m[k] / n) <= 4 * std::sqrt(var / n));
      CHECK(std::abs(v[k] / n - var) <= 4 * var * std::sqrt(2.0 / n));
    }
    CHECK(std::abs(c / n) <= 4 * var / std::sqrt(n));
    CHECK(s.step == static_cast<std::size_t>(n));
    CHECK(s.t == doctest::Approx(n * dt));
  }
  SUBCASE("contact pair without noise stays put") {
    const ModelParams p = params2();
    const Configuration cfg(points(2, {0, 0, 2, 0}), PointSet(2));
    IntegratorState s = IntegratorState::start(cfg, 1);
    s = step_two_type(std::move(s), p, flat_potentials(2), 1e-3, quiet());
    CHECK(s.cfg == cfg);
    CHECK(s.local_time_spheres(0, 1) == 0.0);
    CHECK(s.last_ledger.empty());
  }
  SUBCASE("particle pushed into a depletion shell") {
    ModelParams p = params2();
    p.sigma_particle = 2.0;
    const double rd = p.r_depletion();
    const Configuration cfg(points(2, {0, 0}), points(2, {0.9 * rd, 0}));
    IntegratorState s = IntegratorState::start(cfg, 1);
    s = step_two_type(std::move(s), p, flat_potentials(2), 1e-3, quiet());
    // Deficit 0.1 rd split 1 : sigma_dot^2 = 1 : 4.
    CHECK(s.cfg.spheres[0][0] == doctest::Approx(-0.02 * rd).epsilon(1e-12));
    CHECK(s.cfg.particles[0][0] == doctest::Approx(0.98 * rd).epsilon(1e-12));
    CHECK(distance(s.cfg.spheres[0], s.cfg.particles[0]) ==
          doctest::Approx(rd).epsilon(kDefaultOverlapTolerance));
    CHECK(s.local_time_particles(0, 0) == doctest::Approx(0.2 * 0.1).epsilon(1e-12));
  }
  SUBCASE("particle drift coefficient") {
    ModelParams p = params2();
    p.sigma_particle = 0.5;
    p.sigma_sphere = 3.0;
    PotentialPair pots = flat_potentials(2);
    pots.particle = PotentialSpec::particle_confinement(2, 1.0, 1.0);
    const Configuration cfg(points(2, {50, 50}), points(2, {1.5, 0}));
    std::vector<double> g(2);
    psi_value_and_grad(pots.particle, cfg.particles[0], g);
    for (bool stray : {false, true}) {
      IntegratorSettings st = quiet();
      st.particle_drift_sigma_sphere = stray;
      auto s = step_two_type(IntegratorState::start(cfg, 1), p, pots, 1e-5, st);
      const double coeff = 0.5 * 0.25 * (stray ? 3.0 : 1.0);
      CHECK(s.cfg.particles[0][0] == doctest::Approx(1.5 - coeff * g[0] * 1e-5).epsilon(1e-14));
    }
  }
}

TEST_CASE("depletion step") {
  SUBCASE("no interaction reduces to Brownian increments") {
    ModelParams p = params2();
    p.z_dot = 0.0;
    p.sigma_sphere = 0.7;
    const double dt = 1e-3;
    const Configuration cfg(points(2, {0, 0, 10, 0}), PointSet(2));
    IntegratorState s = IntegratorState::start(cfg, 5);
    s = step_depletion(std::move(s), p, flat_potentials(2).sphere, dt);
    CounterRng noise(5);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 2; ++k)
        CHECK(s.cfg.spheres[i][k] == cfg.spheres[i][k] + 0.7 * std::sqrt(dt) * noise.normal());
  }
  SUBCASE("attraction inside the depletion range") {
    for (int d : {2, 3}) {
      ModelParams p = d == 2 ? params2() : params3();
      p.z_dot = 40.0;
      const double rd = p.r_depletion();
      const double gap = 2.1;
      std::vector<double> flat(static_cast<std::size_t>(2 * d), 0.0);
      flat[static_cast<std::size_t>(d)] = gap;
      const Configuration cfg(PointSet(d, flat), PointSet(d));
      const double dt = 1e-4;
      auto s = step_depletion(IntegratorState::start(cfg, 1), p, flat_potentials(d).sphere, dt, quiet());
      const double u = gap / (2 * rd);
      const double pull = unit_ball_volume(d - 1) * std::pow(rd, d - 1) * std::pow(1 - u * u, 0.5 * (d - 1));
      CHECK(s.cfg.spheres[0][0] == doctest::Approx(0.5 * p.z_dot * pull * dt).epsilon(1e-12));
      CHECK(s.cfg.spheres[1][0] == doctest::Approx(gap - 0.5 * p.z_dot * pull * dt).epsilon(1e-12));
      CHECK(distance(s.cfg.spheres[0], s.cfg.spheres[1]) ==
            doctest::Approx(gap - p.z_dot * pull * dt).epsilon(1e-12));
    }
  }
  SUBCASE("drift is descent on psi and z E") {
    CounterRng rng(6);
    ModelParams p = params2();
    p.z_dot = 12.0;
    const auto psi = PotentialSpec::sphere_confinement(2, 1.0, 0.8);
    for (int t = 0; t < 10; ++t) {
      const PointSet s = random_admissible(5, p, rng);
      const PointSet drift = depletion_drift(s, p, psi);
      const PointSet ge = energy_gradient(s, p);
      std::vector<double> g(2);
      for (std::size_t i = 0; i < s.size(); ++i) {
        psi_value_and_grad(psi, s[i], g);
        for (std::size_t k = 0; k < 2; ++k)
          CHECK(std::abs(drift[i][k] - (-0.5 * g[k] - 0.5 * p.z_dot * ge[i][k])) <= 1e-12);
      }
    }
  }
  SUBCASE("reversible convention scales by sigma squared") {
    ModelParams p = params2();
    p.z_dot = 5.0;
    p.sigma_sphere = 2.0;
    const auto psi = PotentialSpec::sphere_confinement(2, 0.0, 1.0);
    const PointSet s = points(2, {1, 0, 3.1, 0});
    IntegratorSettings rev;
    rev.sphere_drift = DriftConvention::reversible;
    const PointSet a = depletion_drift(s, p, psi);
    const PointSet b = depletion_drift(s, p, psi, rev);
    const PointSet ge = energy_gradient(s, p);
    std::vector<double> g(2);
    for (std::size_t i = 0; i < 2; ++i) {
      psi_value_and_grad(psi, s[i], g);
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(b[i][k] == doctest::Approx(-2.0 * g[k] - 10.0 * ge[i][k]).epsilon(1e-13));
        CHECK(a[i][k] == doctest::Approx(-0.5 * g[k] - 2.5 * ge[i][k]).epsilon(1e-13));
      }
    }
  }
  SUBCASE("one-step moments scale with the step") {
    // Quadratic part of the hinge: the one-step mean is x + b(x) dt and the
    // variance sigma^2 dt, so both shrink tenfold from dt = 1e-3 to 1e-4.
    ModelParams p = params2();
    const auto psi = PotentialSpec::sphere_confinement(2, 0.0, 1.0);
    const Configuration cfg(points(2, {1.0, 0.0}), PointSet(2));
    std::vector<double> g(2);
    psi_value_and_grad(psi, cfg.spheres[0], g);
    double var_at[2];
    int idx = 0;
    for (double dt : {1e-3, 1e-4}) {
      const int n = 100000;
      double m = 0, v = 0;
      for (int k = 0; k < n; ++k) {
        auto s = step_depletion(IntegratorState::start(cfg, derive_seed(77, static_cast<std::uint64_t>(k))),
                                p, psi, dt);
        const double inc = s.cfg.spheres[0][0] - 1.0;
        m += inc;
        v += inc * inc;
      }
      m /= n;
      v = v / n - m * m;
      CHECK(std::abs(m - (-0.5 * g[0] * dt)) <= 4 * std::sqrt(dt / n));
      CHECK(std::abs(v - dt) <= 4 * dt * std::sqrt(2.0 / n));
      var_at[idx++] = v;
    }
    CHECK(var_at[0] / var_at[1] == doctest::Approx(10.0).epsilon(0.05));
  }
}

TEST_CASE("simulation harness") {
  ModelParams p = params2();
  p.z_dot = 1.0 / max_overlap(p);
  const PotentialPair pots{PotentialSpec::sphere_confinement(2, 2.0, 1.0),
                           PotentialSpec::particle_confinement(2, 5.0, 1.0)};
  CounterRng rng(12);
  const PointSet spheres = random_admissible(3, p, rng);

  SUBCASE("zero steps") {
    SimulationSettings st;
    st.n_steps = 0;
    const auto snaps = simulate_to_vector(Configuration(spheres, PointSet(2)), p, pots, st);
    REQUIRE(snaps.size() == 1);
    CHECK(snaps[0].cfg.spheres == spheres);
    CHECK(snaps[0].step == 0);
  }
  SUBCASE("deterministic in the seed") {
    SimulationSettings st;
    st.mode = DynamicsMode::depletion;
    st.n_steps = 500;
    st.record_every = 50;
    st.seed = 3;
    const Configuration c0(spheres, PointSet(2));
    const auto a = simulate_to_vector(c0, p, pots, st);
    const auto b = simulate_to_vector(c0, p, pots, st);
    REQUIRE(a.size() == 11);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].cfg == b[i].cfg);
    st.seed = 4;
    const auto c = simulate_to_vector(c0, p, pots, st);
    CHECK_FALSE(c.back().cfg == a.back().cfg);
  }
  SUBCASE("local times grow only through projection") {
    Configuration c0(spheres, PointSet(2));
    CounterRng prng(13);
    for (int k = 0; k < 150; ++k) {
      std::vector<double> x{8 * prng.uniform() - 4, 8 * prng.uniform() - 4};
      bool ok = true;
      for (std::size_t i = 0; i < spheres.size(); ++i) ok = ok && distance(spheres[i], x) > p.r_depletion();
      if (ok) c0.particles.push_back(x);
    }
    REQUIRE(is_admissible(c0, p));
    IntegratorState s = IntegratorState::start(c0, 21);
    const double dt = 1e-3;
    for (int step = 0; step < 2000; ++step) {
      const IntegratorState before = s;
      s = step_two_type(std::move(s), p, pots, dt);
      CHECK(is_admissible(s.cfg, p));
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.local_time_spheres(i, i) == 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
          CHECK(s.local_time_spheres(i, j) == s.local_time_spheres(j, i));
          CHECK(s.local_time_spheres(i, j) >= before.local_time_spheres(i, j));
        }
        for (std::size_t k = 0; k < c0.particles.size(); ++k)
          CHECK(s.local_time_particles(i, k) >= before.local_time_particles(i, k));
      }
      // Strict increase exactly on ledger pairs.
      std::size_t grown = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j)
          grown += s.local_time_spheres(i, j) > before.local_time_spheres(i, j);
        for (std::size_t k = 0; k < c0.particles.size(); ++k)
          grown += s.local_time_particles(i, k) > before.local_time_particles(i, k);
      }
      CHECK(grown == s.last_ledger.size());
    }
  }
  SUBCASE("no noise and no drift is a fixed point") {
    ModelParams q = p;
    q.sigma_sphere = 0.0;
    q.sigma_particle = 0.0;
    q.z_dot = 0.0;
    Configuration c0(spheres, points(2, {20, 20, -20, 5}));
    SimulationSettings st;
    st.mode = DynamicsMode::two_type;
    st.dt = 1e-3;
    st.n_steps = 100;
    st.record_every = 100;
    const auto snaps = simulate_to_vector(c0, q, flat_potentials(2), st);
    CHECK(snaps.back().cfg == c0);
    st.mode = DynamicsMode::depletion;
    CHECK(simulate_to_vector(c0, q, flat_potentials(2), st).back().cfg == c0);
  }
  SUBCASE("step failures carry the step index") {
    Configuration c0(points(2, {0, 0, 2, 0}), PointSet(2));
    CounterRng prng(14);
    for (int k = 0; k < 3000; ++k)
      c0.particles.push_back(std::vector<double>{8 * prng.uniform() - 4, 8 * prng.uniform() - 4});
    auto proj = resolve_constraints(c0, p, Mobility::from_params(p), {10000, 1e-12, true});
    SimulationSettings st;
    st.mode = DynamicsMode::two_type;
    st.dt = 1e-2;
    st.n_steps = 10;
    st.integrator.max_proj_iters = 1;
    try {
      simulate(proj.cfg, p, pots, st, {});
      FAIL("expected RuntimeFailure");
    } catch (const RuntimeFailure& e) {
      CHECK(e.step() == 1);
      CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
  }
}
