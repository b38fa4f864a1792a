#pragma once

#include <algorithm>
#include <memory>
#include <string_view>

#include "nematic/diagnostics.hpp"
#include "nematic/energetics.hpp"
#include "nematic/state.hpp"

namespace nematic {

/// Linear operator inverted in each fixed-point sweep.
enum class Preconditioner {
  /// (I - eps tau lap) for d and (rho - eta tau lap) for u.
  helmholtz,
  /// Adds the frozen-coefficient linearization of the elastic transport
  /// T(d, v(mu(d))) to the director block. Needed whenever tau |k|^4 is large.
  transport,
};

std::string_view to_string(Preconditioner p);
Preconditioner parse_preconditioner(std::string_view text);

struct PicardConfig {
  double tol = 1e-10;
  int max_iter = 200;
  double damping = 1.0;
  double tau_shrink = 0.5;
  double tau_min = 1e-8;
  /// History length of the Anderson mixing; 0 gives the plain damped sweep.
  int anderson_depth = 10;
  Preconditioner preconditioner = Preconditioner::transport;

  void validate(double tau) const;
};

struct Residuals {
  double d = 0.0;
  double mu = 0.0;
  double u = 0.0;
  double max() const { return std::max(d, std::max(mu, u)); }
};

struct StepResult {
  StepState state;
  VectorField mu;
  /// Extra velocity on the product lattice, shared by the director equation,
  /// the momentum forcing and the ledger.
  std::shared_ptr<const VectorField> v_extra;
  EnergyLedger ledger;
  int iters = 0;
  double residual = 0.0;
  double tau_used = 0.0;
};

/// Solves one step of the implicit Galerkin scheme by preconditioned,
/// Anderson-mixed fixed-point iteration. On stagnation the step is retried
/// from `prev` with tau multiplied by cfg.tau_shrink until tau < cfg.tau_min,
/// which raises PicardDivergence (or NonFiniteError when the last attempt
/// overflowed).
StepResult implicit_step(const StepState& prev, const ModelParams& params, const PicardConfig& cfg);

struct Iterate {
  VectorField d;
  VectorField u;
};

/// One damped fixed-point sweep x - damping * P^{-1} R(x) from `current`.
/// With the Helmholtz preconditioner this is the classical sweep
///   (I - eps tau lap) d' = d_prev - tau T(d, u + v) - eps tau (f+(d) + f-(d_prev))
///   (rho - eta tau lap) u' = Leray[rho u_prev - tau rho (u.grad)u + tau v]
/// blended with the current iterate by `damping`.
Iterate picard_sweep(const StepState& prev, const Iterate& current, const ModelParams& params,
                     double damping = 1.0, Preconditioner pre = Preconditioner::helmholtz);

struct Candidate {
  VectorField d;
  VectorField u;
  VectorField mu;
};

/// Normalized strong-form residuals of the implicit system, assembled from
/// the public operators only:
///   r_d  = |d - d_prev + tau T(d, u + v) + eps tau mu| / (1 + |d|)
///   r_mu = |mu - P[-lap d + f+(d) + f-(d_prev)]|     / (1 + |mu|)
///   r_u  = |Leray[rho (u - u_prev) + tau rho (u.grad)u - tau eta lap u - tau v]| / (rho (1 + |u|))
/// with v = extra_velocity(mu, d) and L2 norms on the unit torus.
Residuals residual_fully_implicit(const StepState& prev, const Candidate& candidate, const ModelParams& params);

}  // namespace nematic
