#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nematic/coupling.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/initial_condition.hpp"
#include "nematic/reference_oracle.hpp"
#include "nematic/stepper.hpp"
#include "support.hpp"

using namespace nematic;

TEST_CASE("ledger terms balance by construction") {
  std::mt19937_64 rng(30);
  const GridSpec g(2, 16, Dealias::exact);
  ModelParams p;
  p.tau = 2e-3;
  const StepState prev{testing::smooth(g, 2, rng, 2.0, 0.8), testing::solenoidal(g, rng), 0.5};
  const VectorField d = testing::smooth(g, 2, rng, 2.0, 0.8);
  const VectorField u = testing::solenoidal(g, rng);
  const VectorField mu = chemical_potential(d, prev.d, p);
  const VectorField v = extra_velocity(mu, d, p.alpha);
  const EnergyLedger l = build_ledger(prev, d, u, mu, v, p);
  CHECK(l.time == doctest::Approx(0.502));
  CHECK(l.previous.total - l.current.total - l.dissipation() - l.jumps() == doctest::Approx(l.slack).epsilon(1e-12));
  CHECK(l.J_d == doctest::Approx(l.J_d_unit / p.gamma).epsilon(1e-13));
  CHECK(l.D_visc >= 0.0);
  CHECK(l.D_friction >= 0.0);
  CHECK(l.D_eps >= 0.0);
  // friction is tau int |v|^2
  CHECK(l.D_friction == doctest::Approx(p.tau * quadrature_mean_square(v)).epsilon(1e-13));
}

TEST_CASE("ledger of a converged step matches the stepper's own") {
  const GridSpec g(2, 16, Dealias::exact);
  const StepState s = initial_condition(IcKind::uniform_perturbed, g, 1, 0.2);
  ModelParams p;
  p.alpha = 0.3;
  PicardConfig cfg;
  cfg.tol = 1e-12;
  const StepResult r = implicit_step(s, p, cfg);
  const EnergyLedger l = build_ledger(s, r.state.d, r.state.u, r.mu, *r.v_extra, p);
  CHECK(l.slack == doctest::Approx(r.ledger.slack).epsilon(1e-9).scale(1e-3));
  CHECK(check_energy_inequality(l, default_energy_budget(cfg.tol, l.previous.total)).pass);
}

TEST_CASE("energy inequality check and budget") {
  EnergyLedger l;
  l.slack = -1e-12;
  CHECK(check_energy_inequality(l, 1e-11).pass);
  CHECK_FALSE(check_energy_inequality(l, 1e-13).pass);
  CHECK(default_energy_budget(1e-11, 1.0) == doctest::Approx(2e-10));
}

TEST_CASE("length statistics and H2 diagnostic") {
  const GridSpec g(2, 8);
  VectorField d(g, 2);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t p = 0; p < d.points(); ++p) {
    d(0, p) = 1.0;
    d(1, p) = 0.5 * std::sin(two_pi * d.coordinate(p, 0));
  }
  const LengthStats s = director_length_stats(d);
  CHECK(s.min == doctest::Approx(1.0));
  CHECK(s.max == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
  CHECK(s.max_deviation == doctest::Approx(std::sqrt(1.25) - 1.0).epsilon(1e-12));
  // |lap d| = 0.5 (2 pi)^2 / sqrt 2
  CHECK(h2_diagnostic(d) == doctest::Approx(0.5 * two_pi * two_pi / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("transport-only run rotates a unit director without changing its length") {
  const GridSpec g(2, 32, Dealias::exact);
  VectorField d(g, 2), w(g, 2);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t p = 0; p < d.points(); ++p) {
    const double x = d.coordinate(p, 0), y = d.coordinate(p, 1);
    const double phi = 0.4 * std::sin(two_pi * y);
    d(0, p) = std::cos(phi);
    d(1, p) = std::sin(phi);
    w(0, p) = std::sin(two_pi * x) * std::cos(two_pi * y);
    w(1, p) = -std::cos(two_pi * x) * std::sin(two_pi * y);
  }
  const TransportRun run = transport_only_run(d, w, 0.5, 1e-3, 50);
  CHECK(run.max_length_deviation.size() == 50);
  CHECK(run.max_length_deviation.back() <= 1e-6);
  // the director has actually moved
  CHECK(testing::max_abs_diff(run.d, d) >= 1e-2);
}

TEST_CASE("equilibrium ledger is identically zero") {
  const GridSpec g(2, 16, Dealias::exact);
  VectorField d(g, 2);
  for (double& x : d.component(0)) x = 1.0;
  const ModelParams p;
  const StepState prev{d, VectorField(g, 2), 0.0};
  const VectorField mu = chemical_potential(d, d, p);
  const EnergyLedger l = build_ledger(prev, d, VectorField(g, 2), mu, extra_velocity(mu, d, p.alpha), p);
  for (double x : {l.current.total, l.previous.total, l.D_visc, l.D_friction, l.D_eps, l.J_grad, l.J_d, l.J_u, l.slack})
    CHECK(std::abs(x) <= 1e-15);
}

TEST_CASE("a decaying velocity dissipates through viscosity") {
  const GridSpec g(2, 32, Dealias::exact);
  StepState s{VectorField(g, 2), VectorField(g, 2), 0.0};
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t p = 0; p < g.points(); ++p) {
    s.d(0, p) = 1.0;
    s.u(0, p) = 0.2 * std::sin(two_pi * s.u.coordinate(p, 1));
  }
  const ModelParams p;
  double kinetic = 1.0;
  for (int k = 0; k < 10; ++k) {
    const StepResult r = implicit_step(s, p, {});
    CHECK(r.ledger.D_visc > 0.0);
    CHECK(r.ledger.current.kinetic < kinetic);
    kinetic = r.ledger.current.kinetic;
    s = r.state;
  }
}

TEST_CASE("length statistics of uniform and vanishing directors") {
  const GridSpec g(3, 8);
  VectorField d(g, 3);
  for (double& x : d.component(2)) x = 1.0;
  const LengthStats a = director_length_stats(d);
  CHECK(a.min == 1.0);
  CHECK(a.max == 1.0);
  CHECK(a.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.max_deviation == 0.0);
  const LengthStats z = director_length_stats(VectorField(g, 3));
  CHECK(z.min == 0.0);
  CHECK(z.max == 0.0);
  CHECK(z.mean == 0.0);
  CHECK(z.max_deviation == 1.0);
}

TEST_CASE("H2 diagnostic: zero on uniform fields, Parseval sum on random ones") {
  const GridSpec g(2, 8);
  VectorField u(g, 2);
  for (double& x : u.data()) x = 0.3;
  CHECK(h2_diagnostic(u) == 0.0);

  std::mt19937_64 rng(31);
  const VectorField d = testing::smooth(g, 2, rng);
  const double two_pi = 2.0 * std::numbers::pi;
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    const auto coef = oracle::fourier_coefficients(d.component(c), g);
    for (std::size_t m = 0; m < coef.size(); ++m) {
      double k2 = 0.0;
      for (int kk : {static_cast<int>(m / 8), static_cast<int>(m % 8)}) {
        const int k = kk < 4 ? kk : kk - 8;
        k2 += two_pi * two_pi * k * k;
      }
      sum += k2 * k2 * std::norm(coef[m]);
    }
  }
  CHECK(h2_diagnostic(d) == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
}
