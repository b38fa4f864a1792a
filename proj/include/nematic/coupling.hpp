#pragma once

#include <memory>

#include "nematic/grid.hpp"
#include "nematic/spectral.hpp"

namespace nematic {

/// Extra (elastic) velocity
///   v_i = sum_j mu_j d(d_j)/dx_i + alpha sum_j d(mu_i d_j)/dx_j - (1-alpha) sum_j d(d_i mu_j)/dx_j.
///
/// The result is sampled on the product lattice. With exact dealiasing the
/// product lattice represents v without aliasing, so the transport operator,
/// the momentum forcing and the dissipation ledger all see the same function.
VectorField extra_velocity(const VectorField& mu, const VectorField& d, double alpha);

/// The elastic force entering the momentum balance. Identical to
/// extra_velocity: the momentum right-hand side carries +v.
VectorField elastic_force(const VectorField& mu, const VectorField& d, double alpha);

/// Director transport T(d, w) = (w.grad) d - alpha (grad w) d + (1-alpha) (grad w)^T d
/// projected onto resolved modes. `w` may be on either lattice; `d` is a
/// base-lattice director.
VectorField director_transport(const VectorField& d, const VectorField& w, double alpha);

// Spectral-space forms used by the stepper. ---------------------------------

/// Director and its Jacobian sampled on the product lattice.
struct DirectorLift {
  VectorField d;
  VectorField grad;  ///< component i*dim+j = d(d_i)/dx_j
};
DirectorLift lift_director(const Spectral& ops, const SpectralField& d_hat);

VectorField extra_velocity_fine(const Spectral& ops, const SpectralField& mu_hat, const DirectorLift& d,
                                double alpha);

SpectralField director_transport_spectral(const Spectral& ops, const DirectorLift& d, const VectorField& w_fine,
                                          double alpha);

}  // namespace nematic
