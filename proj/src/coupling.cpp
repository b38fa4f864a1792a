#include "nematic/coupling.hpp"

#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"

namespace nematic {

DirectorLift lift_director(const Spectral& ops, const SpectralField& d_hat) {
  return {ops.inverse(ops.lift(d_hat)), ops.inverse(ops.lift(ops.gradient(d_hat)))};
}

VectorField extra_velocity_fine(const Spectral& ops, const SpectralField& mu_hat, const DirectorLift& d,
                                double alpha) {
  const GridSpec& grid = ops.grid();
  const int dim = grid.dim();
  const VectorField mu = ops.inverse(ops.lift(mu_hat));
  const std::size_t points = mu.points();

  VectorField v(grid, dim, Level::fine);
  kernels::mu_dot_grad_d(mu.data(), d.grad.data(), v.data(), dim, points);

  VectorField flux(grid, dim * dim, Level::fine);
  kernels::extra_flux(mu.data(), d.d.data(), flux.data(), dim, points, alpha);
  const VectorField div_flux = ops.inverse(ops.divergence(ops.forward(flux)));
  kernels::axpy(1.0, div_flux.data(), v.data());
  return v;
}

SpectralField director_transport_spectral(const Spectral& ops, const DirectorLift& d, const VectorField& w_fine,
                                          double alpha) {
  const GridSpec& grid = ops.grid();
  const int dim = grid.dim();
  const VectorField grad_w = ops.inverse(ops.gradient(ops.forward(w_fine)));
  VectorField integrand(grid, dim, Level::fine);
  kernels::transport_integrand(d.d.data(), d.grad.data(), w_fine.data(), grad_w.data(), integrand.data(), dim,
                               integrand.points(), alpha);
  return ops.truncate(ops.forward(integrand));
}

namespace {

void require_base_vector(const VectorField& f, const char* what) {
  if (f.components() != f.grid().dim()) throw ConfigError(std::string(what) + " must have dim components");
  if (f.level() != Level::base) throw ConfigError(std::string(what) + " must be a base-lattice field");
}

}  // namespace

VectorField extra_velocity(const VectorField& mu, const VectorField& d, double alpha) {
  require_base_vector(mu, "extra_velocity: mu");
  require_base_vector(d, "extra_velocity: d");
  if (!(mu.grid() == d.grid())) throw ConfigError("extra_velocity: mu and d must share a grid");
  const auto ops = Spectral::for_grid(d.grid());
  return extra_velocity_fine(*ops, ops->forward(mu), lift_director(*ops, ops->forward(d)), alpha);
}

VectorField elastic_force(const VectorField& mu, const VectorField& d, double alpha) {
  return extra_velocity(mu, d, alpha);
}

VectorField director_transport(const VectorField& d, const VectorField& w, double alpha) {
  require_base_vector(d, "director_transport: d");
  if (w.components() != d.grid().dim()) throw ConfigError("director_transport: w must have dim components");
  if (!(w.grid() == d.grid())) throw ConfigError("director_transport: d and w must share a grid");
  const auto ops = Spectral::for_grid(d.grid());
  const DirectorLift lifted = lift_director(*ops, ops->forward(d));
  const SpectralField t = w.level() == Level::fine
                              ? director_transport_spectral(*ops, lifted, w, alpha)
                              : director_transport_spectral(*ops, lifted, to_fine(w), alpha);
  return ops->inverse(t);
}

}  // namespace nematic
