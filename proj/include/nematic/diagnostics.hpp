#pragma once

#include <vector>

#include "nematic/energetics.hpp"
#include "nematic/spectral.hpp"
#include "nematic/state.hpp"

namespace nematic {

/// Every term of the discrete energy inequality for one accepted step.
///
///   E(d, u) + D_visc + D_friction + D_eps + J_grad + J_d + J_u + slack = E(d_prev, u_prev)
///
/// The inequality holds iff slack >= 0 (up to the solver tolerance).
struct EnergyLedger {
  int step = 0;
  double time = 0.0;
  EnergyBreakdown current;
  EnergyBreakdown previous;
  double D_visc = 0.0;      ///< 2 eta tau int |Du|^2
  double D_friction = 0.0;  ///< tau int |v|^2
  double D_eps = 0.0;       ///< eps tau int |mu|^2
  double J_grad = 0.0;      ///< 1/2 int |grad d - grad d_prev|^2
  double J_d = 0.0;         ///< 1/(2 gamma) int |d - d_prev|^2, produced by the concave split
  double J_d_unit = 0.0;    ///< 1/2 int |d - d_prev|^2, the unit-weight variant for comparison
  double J_u = 0.0;         ///< rho/2 int |u - u_prev|^2
  double slack = 0.0;
  int picard_iters = 0;
  double picard_residual = 0.0;

  double dissipation() const { return D_visc + D_friction + D_eps; }
  double jumps() const { return J_grad + J_d + J_u; }
};

/// Ledger from prev state and the new fields (d, u, mu on the base lattice,
/// v on the product lattice as returned by extra_velocity).
EnergyLedger build_ledger(const StepState& prev, const VectorField& d, const VectorField& u, const VectorField& mu,
                          const VectorField& v, const ModelParams& params);

/// Same, from resolved spectra; used by the stepper.
EnergyLedger build_ledger_spectral(const Spectral& ops, const SpectralField& d_prev, const SpectralField& u_prev,
                                   const SpectralField& d, const SpectralField& u, const SpectralField& mu,
                                   const VectorField& v_fine, const ModelParams& params);

struct InequalityCheck {
  bool pass = false;
  double slack = 0.0;
  double budget = 0.0;
};

/// Passes iff slack >= -budget.
InequalityCheck check_energy_inequality(const EnergyLedger& ledger, double budget);

/// Default budget 10 * tol * (1 + E0).
double default_energy_budget(double picard_tol, double initial_energy);

struct LengthStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double max_deviation = 0.0;  ///< max | |d| - 1 |
};

LengthStats director_length_stats(const VectorField& d);

/// L2 norm of the Laplacian of d, computed from its spectrum.
double h2_diagnostic(const VectorField& d);

/// Transport-only evolution dd/dt = -T(d, w) with a frozen velocity w,
/// integrated with classical RK4. Returns the max | |d| - 1 | after each step.
struct TransportRun {
  VectorField d;
  std::vector<double> max_length_deviation;
};
TransportRun transport_only_run(const VectorField& d0, const VectorField& w, double alpha, double tau, int steps);

}  // namespace nematic
