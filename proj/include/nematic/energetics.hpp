#pragma once

#include "nematic/grid.hpp"
#include "nematic/spectral.hpp"

namespace nematic {

/// Physical and scheme constants.
struct ModelParams {
  double rho = 1.0;      ///< mass density
  double eta = 1.0;      ///< viscosity
  double alpha = 0.5;    ///< molecular shape parameter in [0,1]
  double gamma = 0.1;    ///< penalty strength of the double well
  double epsilon = 0.01; ///< regularization weight of the chemical potential
  double tau = 1e-3;     ///< time increment

  /// Throws ConfigError naming the first violated constraint. The implicit
  /// stepper additionally requires epsilon > 0.
  void validate(bool require_positive_epsilon = false) const;
};

struct EnergyBreakdown {
  double elastic = 0.0;  ///< int 1/2 |grad d|^2
  double well = 0.0;     ///< int W(d)
  double kinetic = 0.0;  ///< int 1/2 rho |u|^2
  double total = 0.0;
};

/// Pointwise W(d) = (|d|^2 - 1)^2 / (4 gamma).
VectorField double_well(const VectorField& d, double gamma);

/// Convex part W+(d) = (|d|^4 + 1) / (4 gamma) and concave part
/// W-(d) = -|d|^2 / (2 gamma), pointwise; W = W+ + W-.
VectorField well_convex_part(const VectorField& d, double gamma);
VectorField well_concave_part(const VectorField& d, double gamma);

struct SplitForce {
  VectorField convex;   ///< f+(d) = |d|^2 d / gamma
  VectorField concave;  ///< f-(d_prev) = -d_prev / gamma
};

/// Pointwise variations of the convex and concave parts of W.
SplitForce f_split(const VectorField& d, const VectorField& d_prev, double gamma);

/// Galerkin chemical potential P[-lap d + f+(d) + f-(d_prev)] on resolved modes.
VectorField chemical_potential(const VectorField& d, const VectorField& d_prev, const ModelParams& params);

EnergyBreakdown total_energy(const VectorField& d, const VectorField& u, const ModelParams& params);

/// 2 eta int |Du|^2 + int |u - v|^2. `v` may live on either lattice.
double dissipation_rate(const VectorField& u, const VectorField& v, const ModelParams& params);

// Spectral-space forms used by the stepper and the ledger. ------------------

/// Chemical potential from resolved spectra. `d_fine` may carry the director
/// already sampled on the product lattice.
SpectralField chemical_potential_spectral(const Spectral& ops, const SpectralField& d_hat,
                                          const SpectralField& d_prev_hat, const ModelParams& params,
                                          const VectorField* d_fine = nullptr);

/// Energies of a resolved state given by spectra.
EnergyBreakdown energy_spectral(const Spectral& ops, const SpectralField& d_hat, const SpectralField& u_hat,
                                const ModelParams& params);

}  // namespace nematic
