#include "nematic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nematic/coupling.hpp"
#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"

namespace nematic {

namespace {

SpectralField difference(const SpectralField& a, const SpectralField& b) {
  SpectralField out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

double sym_gradient_square(const Spectral& ops, const SpectralField& u) {
  const int dim = ops.grid().dim();
  const SpectralField g = ops.gradient(u);
  SpectralField sym(ops.grid(), dim * dim, Level::base);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (std::size_t m = 0; m < sym.modes(); ++m) sym(i * dim + j, m) = 0.5 * (g(i * dim + j, m) + g(j * dim + i, m));
  return ops.inner(sym, sym);
}

}  // namespace

EnergyLedger build_ledger_spectral(const Spectral& ops, const SpectralField& d_prev, const SpectralField& u_prev,
                                   const SpectralField& d, const SpectralField& u, const SpectralField& mu,
                                   const VectorField& v_fine, const ModelParams& params) {
  EnergyLedger l;
  l.previous = energy_spectral(ops, d_prev, u_prev, params);
  l.current = energy_spectral(ops, d, u, params);
  l.D_visc = 2.0 * params.eta * params.tau * sym_gradient_square(ops, u);
  l.D_friction = params.tau * quadrature_mean_square(v_fine);
  l.D_eps = params.epsilon * params.tau * ops.inner(mu, mu);
  const SpectralField dd = difference(d, d_prev);
  const SpectralField gdd = ops.gradient(dd);
  l.J_grad = 0.5 * ops.inner(gdd, gdd);
  const double dd2 = ops.inner(dd, dd);
  l.J_d = dd2 / (2.0 * params.gamma);
  l.J_d_unit = 0.5 * dd2;
  const SpectralField du = difference(u, u_prev);
  l.J_u = 0.5 * params.rho * ops.inner(du, du);
  l.slack = l.previous.total - l.current.total - (l.dissipation() + l.jumps());
  return l;
}

EnergyLedger build_ledger(const StepState& prev, const VectorField& d, const VectorField& u, const VectorField& mu,
                          const VectorField& v, const ModelParams& params) {
  const auto ops = Spectral::for_grid(d.grid());
  const VectorField v_fine = v.level() == Level::fine ? v : to_fine(v);
  EnergyLedger l = build_ledger_spectral(*ops, ops->forward(prev.d), ops->forward(prev.u), ops->forward(d),
                                         ops->forward(u), ops->forward(mu), v_fine, params);
  l.time = prev.time + params.tau;
  return l;
}

InequalityCheck check_energy_inequality(const EnergyLedger& ledger, double budget) {
  return {ledger.slack >= -budget, ledger.slack, budget};
}

double default_energy_budget(double picard_tol, double initial_energy) {
  return 10.0 * picard_tol * (1.0 + initial_energy);
}

LengthStats director_length_stats(const VectorField& d) {
  const int dim = d.components();
  const std::size_t points = d.points();
  LengthStats s;
  s.min = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    double q = 0.0;
    for (int c = 0; c < dim; ++c) q += d(c, p) * d(c, p);
    const double len = std::sqrt(q);
    s.min = std::min(s.min, len);
    s.max = std::max(s.max, len);
    s.max_deviation = std::max(s.max_deviation, std::abs(len - 1.0));
    total += len;
  }
  s.mean = total / static_cast<double>(points);
  return s;
}

double h2_diagnostic(const VectorField& d) {
  const auto ops = Spectral::for_grid(d.grid());
  const SpectralField lap = ops->laplacian(ops->forward(d));
  return ops->norm(lap);
}

TransportRun transport_only_run(const VectorField& d0, const VectorField& w, double alpha, double tau, int steps) {
  if (d0.level() != Level::base) throw ConfigError("transport_only_run: d0 must be a base-lattice field");
  const auto ops = Spectral::for_grid(d0.grid());
  const VectorField w_fine = w.level() == Level::fine ? w : to_fine(w);
  auto rate = [&](const SpectralField& d_hat) {
    SpectralField t = director_transport_spectral(*ops, lift_director(*ops, d_hat), w_fine, alpha);
    for (auto& z : t.data()) z = -z;
    return t;
  };
  auto combine = [](const SpectralField& a, double s, const SpectralField& b) {
    SpectralField out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += s * b.data()[i];
    return out;
  };

  TransportRun run{d0, {}};
  SpectralField d_hat = ops->resolve(ops->forward(d0));
  for (int n = 0; n < steps; ++n) {
    const SpectralField k1 = rate(d_hat);
    const SpectralField k2 = rate(combine(d_hat, 0.5 * tau, k1));
    const SpectralField k3 = rate(combine(d_hat, 0.5 * tau, k2));
    const SpectralField k4 = rate(combine(d_hat, tau, k3));
    for (std::size_t i = 0; i < d_hat.data().size(); ++i)
      d_hat.data()[i] += tau / 6.0 * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
    run.d = ops->inverse(d_hat);
    run.max_length_deviation.push_back(director_length_stats(run.d).max_deviation);
  }
  return run;
}

}  // namespace nematic
