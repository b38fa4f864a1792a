#include "nematic/energetics.hpp"

#include <cmath>
#include <optional>

#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"

namespace nematic {

void ModelParams::validate(bool require_positive_epsilon) const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(rho)) throw ConfigError("rho > 0");
  if (!positive(eta)) throw ConfigError("eta > 0");
  if (!(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha ∈ [0,1]");
  if (!positive(gamma)) throw ConfigError("gamma > 0");
  if (!(std::isfinite(epsilon) && epsilon >= 0.0)) throw ConfigError("epsilon >= 0");
  if (require_positive_epsilon && !(epsilon > 0.0)) throw ConfigError("epsilon > 0 (required by the implicit stepper)");
  if (!positive(tau)) throw ConfigError("tau > 0");
}

namespace {

void require_vector(const VectorField& f, const char* what) {
  if (f.components() != f.grid().dim())
    throw ConfigError(std::string(what) + " must have dim components");
}

}  // namespace

VectorField double_well(const VectorField& d, double gamma) {
  require_vector(d, "double_well: d");
  VectorField out(d.grid(), 1, d.level());
  kernels::double_well_density(d.data(), out.data(), d.grid().dim(), d.points(), gamma);
  return out;
}

VectorField well_convex_part(const VectorField& d, double gamma) {
  require_vector(d, "well_convex_part: d");
  VectorField out(d.grid(), 1, d.level());
  const int dim = d.grid().dim();
  for (std::size_t p = 0; p < d.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += d(c, p) * d(c, p);
    out(0, p) = (s * s + 1.0) / (4.0 * gamma);
  }
  return out;
}

VectorField well_concave_part(const VectorField& d, double gamma) {
  require_vector(d, "well_concave_part: d");
  VectorField out(d.grid(), 1, d.level());
  const int dim = d.grid().dim();
  for (std::size_t p = 0; p < d.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += d(c, p) * d(c, p);
    out(0, p) = -s / (2.0 * gamma);
  }
  return out;
}

SplitForce f_split(const VectorField& d, const VectorField& d_prev, double gamma) {
  require_vector(d, "f_split: d");
  require_vector(d_prev, "f_split: d_prev");
  if (!(d.grid() == d_prev.grid()) || d.level() != d_prev.level())
    throw ConfigError("f_split: d and d_prev must share a lattice");
  SplitForce out{VectorField(d.grid(), d.components(), d.level()), VectorField(d.grid(), d.components(), d.level())};
  kernels::cubic_well_force(d.data(), out.convex.data(), d.grid().dim(), d.points(), gamma);
  const double inv = -1.0 / gamma;
  for (std::size_t i = 0; i < d_prev.data().size(); ++i) out.concave.data()[i] = inv * d_prev.data()[i];
  return out;
}

SpectralField chemical_potential_spectral(const Spectral& ops, const SpectralField& d_hat,
                                          const SpectralField& d_prev_hat, const ModelParams& params,
                                          const VectorField* d_fine) {
  const GridSpec& grid = ops.grid();
  std::optional<VectorField> lifted;
  if (!d_fine) lifted = ops.inverse(ops.lift(d_hat));
  const VectorField& df = d_fine ? *d_fine : *lifted;
  VectorField cubic(grid, grid.dim(), Level::fine);
  kernels::cubic_well_force(df.data(), cubic.data(), grid.dim(), df.points(), params.gamma);
  SpectralField mu = ops.truncate(ops.forward(cubic));
  const SpectralField lap = ops.laplacian(d_hat);
  const double inv = 1.0 / params.gamma;
  auto& out = mu.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += -lap.data()[i] - inv * d_prev_hat.data()[i];
  return ops.resolve(mu);
}

VectorField chemical_potential(const VectorField& d, const VectorField& d_prev, const ModelParams& params) {
  require_vector(d, "chemical_potential: d");
  require_vector(d_prev, "chemical_potential: d_prev");
  if (d.level() != Level::base || d_prev.level() != Level::base)
    throw ConfigError("chemical_potential: expects base-lattice fields");
  const auto ops = Spectral::for_grid(d.grid());
  return ops->inverse(chemical_potential_spectral(*ops, ops->forward(d), ops->forward(d_prev), params));
}

EnergyBreakdown energy_spectral(const Spectral& ops, const SpectralField& d_hat, const SpectralField& u_hat,
                                const ModelParams& params) {
  const GridSpec& grid = ops.grid();
  EnergyBreakdown e;
  const SpectralField gd = ops.gradient(d_hat);
  e.elastic = 0.5 * ops.inner(gd, gd);
  const VectorField df = ops.inverse(ops.lift(d_hat));
  VectorField w(grid, 1, Level::fine);
  kernels::double_well_density(df.data(), w.data(), grid.dim(), df.points(), params.gamma);
  e.well = kernels::sum(w.data()) / static_cast<double>(w.points());
  e.kinetic = 0.5 * params.rho * ops.inner(u_hat, u_hat);
  e.total = e.elastic + e.well + e.kinetic;
  return e;
}

EnergyBreakdown total_energy(const VectorField& d, const VectorField& u, const ModelParams& params) {
  require_vector(d, "total_energy: d");
  require_vector(u, "total_energy: u");
  const auto ops = Spectral::for_grid(d.grid());
  return energy_spectral(*ops, ops->forward(d), ops->forward(u), params);
}

double dissipation_rate(const VectorField& u, const VectorField& v, const ModelParams& params) {
  require_vector(u, "dissipation_rate: u");
  require_vector(v, "dissipation_rate: v");
  if (u.level() != Level::base) throw ConfigError("dissipation_rate: u must be a base-lattice field");
  const auto ops = Spectral::for_grid(u.grid());
  const int dim = u.grid().dim();
  const SpectralField u_hat = ops->forward(u);
  const SpectralField g = ops->gradient(u_hat);
  SpectralField sym(u.grid(), dim * dim, Level::base);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (std::size_t m = 0; m < sym.modes(); ++m) sym(i * dim + j, m) = 0.5 * (g(i * dim + j, m) + g(j * dim + i, m));
  const double visc = 2.0 * params.eta * ops->inner(sym, sym);

  double friction = 0.0;
  if (v.level() == Level::base) {
    SpectralField diff = u_hat;
    const SpectralField v_hat = ops->forward(v);
    for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= v_hat.data()[i];
    friction = ops->inner(diff, diff);
  } else {
    VectorField diff = ops->inverse(ops->lift(u_hat));
    for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= v.data()[i];
    friction = quadrature_mean_square(diff);
  }
  return visc + friction;
}

}  // namespace nematic
