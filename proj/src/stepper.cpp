#include "nematic/stepper.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <string>

#include "nematic/coupling.hpp"
#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"

namespace nematic {

std::string_view to_string(Preconditioner p) {
  return p == Preconditioner::helmholtz ? "helmholtz" : "transport";
}

Preconditioner parse_preconditioner(std::string_view text) {
  if (text == "helmholtz") return Preconditioner::helmholtz;
  if (text == "transport") return Preconditioner::transport;
  throw ConfigError("picard.preconditioner must be helmholtz or transport (got '" + std::string(text) + "')");
}

void PicardConfig::validate(double tau) const {
  if (!(tol > 0.0)) throw ConfigError("picard.tol > 0");
  if (max_iter < 1) throw ConfigError("picard.max_iter >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("picard.damping ∈ (0,1]");
  if (!(tau_shrink > 0.0 && tau_shrink < 1.0)) throw ConfigError("picard.tau_shrink ∈ (0,1)");
  if (!(tau_min > 0.0 && tau_min <= tau)) throw ConfigError("0 < picard.tau_min <= tau");
  if (anderson_depth < 0) throw ConfigError("picard.anderson >= 0");
}

namespace {

using Vec = std::vector<Complex>;

/// Residual of the implicit system at a trial (d, u), with the by-products
/// needed for the ledger.
struct Evaluation {
  SpectralField R_d;
  SpectralField R_u;
  SpectralField mu;
  VectorField v;
  double r_d = 0.0;
  double r_u = 0.0;
  double residual() const { return std::max(r_d, r_u); }
};

/// The implicit system for one step at fixed tau.
class SchemeSystem {
 public:
  SchemeSystem(const Spectral& ops, const SpectralField& d_prev, const SpectralField& u_prev,
               const ModelParams& params, Preconditioner pre, const VectorField& d_prev_samples)
      : ops_(ops), d_prev_(d_prev), u_prev_(u_prev), params_(params) {
    build_preconditioner(pre, d_prev_samples);
  }

  Evaluation evaluate(const SpectralField& d, const SpectralField& u) const {
    const GridSpec& grid = ops_.grid();
    const int dim = grid.dim();
    const double tau = params_.tau;

    const DirectorLift lifted = lift_director(ops_, d);
    SpectralField mu = chemical_potential_spectral(ops_, d, d_prev_, params_, &lifted.d);
    VectorField v = extra_velocity_fine(ops_, mu, lifted, params_.alpha);

    const VectorField u_fine = ops_.inverse(ops_.lift(u));
    VectorField w = v;
    kernels::axpy(1.0, u_fine.data(), w.data());
    const SpectralField transport = director_transport_spectral(ops_, lifted, w, params_.alpha);

    SpectralField R_d = d;
    {
      auto& r = R_d.data();
      const auto& dp = d_prev_.data();
      const auto& t = transport.data();
      const auto& m = mu.data();
      const double em = params_.epsilon * tau;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += -dp[i] + tau * t[i] + em * m[i];
    }

    const VectorField grad_u = ops_.inverse(ops_.lift(ops_.gradient(u)));
    VectorField conv(grid, dim, Level::fine);
    kernels::convection(u_fine.data(), grad_u.data(), conv.data(), dim, conv.points());
    const SpectralField conv_hat = ops_.truncate(ops_.forward(conv));
    const SpectralField v_hat = ops_.truncate(ops_.forward(v));
    const SpectralField lap_u = ops_.laplacian(u);
    SpectralField raw(grid, dim, Level::base);
    {
      auto& r = raw.data();
      const double rho = params_.rho;
      for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = rho * (u.data()[i] - u_prev_.data()[i]) + tau * rho * conv_hat.data()[i] -
               tau * params_.eta * lap_u.data()[i] - tau * v_hat.data()[i];
    }
    SpectralField R_u = ops_.leray(raw);

    Evaluation ev{std::move(R_d), std::move(R_u), std::move(mu), std::move(v)};
    ev.r_d = ops_.norm(ev.R_d) / (1.0 + ops_.norm(d));
    ev.r_u = ops_.norm(ev.R_u) / (params_.rho * (1.0 + ops_.norm(u)));
    return ev;
  }

  /// In-place solve P x = r for the director and velocity residuals.
  void precondition(SpectralField& R_d, SpectralField& R_u) const {
    const int dim = ops_.grid().dim();
    const std::size_t modes = R_d.modes();
    kernels::for_each(modes, kernels::default_exec(), [&](std::size_t m) {
      const double* a = &director_inverse_[m * dim * dim];
      Complex tmp[3];
      for (int i = 0; i < dim; ++i) {
        Complex s{};
        for (int j = 0; j < dim; ++j) s += a[i * dim + j] * R_d(j, m);
        tmp[i] = s;
      }
      for (int i = 0; i < dim; ++i) {
        R_d(i, m) = tmp[i];
        R_u(i, m) *= velocity_inverse_[m];
      }
    });
  }

  const SpectralField& d_prev() const { return d_prev_; }
  const SpectralField& u_prev() const { return u_prev_; }

 private:
  void build_preconditioner(Preconditioner pre, const VectorField& d_samples) {
    const int dim = ops_.grid().dim();
    const std::size_t modes = d_prev_.modes();
    const double tau = params_.tau;
    const double eps = params_.epsilon;
    const double alpha = params_.alpha;

    // second moment S = <d d^T> of the previous director
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    const std::size_t points = d_samples.points();
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const double s = kernels::dot(d_samples.component(i), d_samples.component(j)) / static_cast<double>(points);
        S(i, j) = s;
        S(j, i) = s;
      }
    const double trS = S.trace();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::MatrixXd well = (trS * I + 2.0 * S) / params_.gamma;

    director_inverse_.assign(modes * dim * dim, 0.0);
    velocity_inverse_.assign(modes, 0.0);
    for (std::size_t m = 0; m < modes; ++m) {
      Eigen::VectorXd k(dim);
      for (int j = 0; j < dim; ++j) k(j) = ops_.derivative_factor(Level::base, m, j);
      const double k2 = k.squaredNorm();
      Eigen::MatrixXd J;
      if (pre == Preconditioner::helmholtz) {
        J = (1.0 + eps * tau * k2) * I;
      } else {
        const Eigen::VectorXd Sk = S * k;
        const Eigen::MatrixXd H = alpha * alpha * k.dot(Sk) * I -
                                  alpha * (1.0 - alpha) * (Sk * k.transpose() + k * Sk.transpose()) +
                                  (1.0 - alpha) * (1.0 - alpha) * trS * (k * k.transpose());
        const Eigen::MatrixXd M = k2 * I + well;
        J = I + tau * (H + eps * I) * M;
      }
      const Eigen::MatrixXd Jinv = J.inverse();
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) director_inverse_[m * dim * dim + i * dim + j] = Jinv(i, j);
      velocity_inverse_[m] = 1.0 / (params_.rho + tau * params_.eta * k2);
    }
  }

  const Spectral& ops_;
  SpectralField d_prev_;
  SpectralField u_prev_;
  ModelParams params_;
  std::vector<double> director_inverse_;
  std::vector<double> velocity_inverse_;
};

// Packing of (d, u) spectra into one unknown vector for the mixing.
Vec pack(const SpectralField& d, const SpectralField& u) {
  Vec x(d.data().begin(), d.data().end());
  x.insert(x.end(), u.data().begin(), u.data().end());
  return x;
}

void unpack(const Vec& x, SpectralField& d, SpectralField& u) {
  const std::size_t nd = d.data().size();
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nd), d.data().begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(nd), x.end(), u.data().begin());
}

/// Anderson mixing over the preconditioned fixed-point map.
class AndersonMixer {
 public:
  AndersonMixer(int depth, std::vector<double> weights) : depth_(depth), weights_(std::move(weights)) {}

  /// Next iterate from the current x and its update direction f = G(x) - x.
  Vec next(const Vec& x, const Vec& f, double beta) {
    if (have_last_ && depth_ > 0) {
      dx_.push_back(subtract(x, last_x_));
      df_.push_back(subtract(f, last_f_));
      if (static_cast<int>(dx_.size()) > depth_) {
        dx_.pop_front();
        df_.pop_front();
      }
    }
    last_x_ = x;
    last_f_ = f;
    have_last_ = true;

    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + beta * f[i];
    if (dx_.empty()) return out;

    const auto cols = static_cast<Eigen::Index>(df_.size());
    const auto rows = static_cast<Eigen::Index>(2 * f.size());
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double w = weights_[i];
      b(2 * i) = w * f[i].real();
      b(2 * i + 1) = w * f[i].imag();
      for (Eigen::Index c = 0; c < cols; ++c) {
        A(2 * i, c) = w * df_[c][i].real();
        A(2 * i + 1, c) = w * df_[c][i].imag();
      }
    }
    const Eigen::VectorXd g = A.colPivHouseholderQr().solve(b);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double gc = g(c);
      if (!std::isfinite(gc)) continue;
      for (std::size_t i = 0; i < x.size(); ++i) out[i] -= gc * (dx_[c][i] + beta * df_[c][i]);
    }
    return out;
  }

  void reset() {
    dx_.clear();
    df_.clear();
    have_last_ = false;
  }

 private:
  static Vec subtract(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
  }

  int depth_;
  std::vector<double> weights_;
  std::deque<Vec> dx_;
  std::deque<Vec> df_;
  Vec last_x_;
  Vec last_f_;
  bool have_last_ = false;
};

std::vector<double> mixing_weights(const Spectral& ops, int components) {
  const std::size_t modes = ops.modes(Level::base);
  std::vector<double> w;
  w.reserve(modes * components);
  for (int c = 0; c < components; ++c)
    for (std::size_t m = 0; m < modes; ++m) w.push_back(std::sqrt(ops.parseval_weight(Level::base, m)));
  return w;
}

enum class AttemptStatus { converged, stalled, non_finite };

struct Attempt {
  AttemptStatus status = AttemptStatus::stalled;
  SpectralField d;
  SpectralField u;
  std::optional<Evaluation> eval;
  int iters = 0;
};

Attempt solve_at_tau(const Spectral& ops, const SpectralField& d_prev, const SpectralField& u_prev,
                     const VectorField& d_prev_samples, const ModelParams& params, const PicardConfig& cfg) {
  const SchemeSystem system(ops, d_prev, u_prev, params, cfg.preconditioner, d_prev_samples);
  const int dim = ops.grid().dim();
  AndersonMixer mixer(cfg.anderson_depth, mixing_weights(ops, 2 * dim));

  Attempt a{AttemptStatus::stalled, d_prev, u_prev, std::nullopt, 0};
  double beta = cfg.damping;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    a.iters = it;
    std::optional<Evaluation> evaluated;
    try {
      evaluated.emplace(system.evaluate(a.d, a.u));
    } catch (const NonFiniteError&) {
      a.status = AttemptStatus::non_finite;
      return a;
    }
    Evaluation& ev = *evaluated;
    const double r = ev.residual();
    if (!std::isfinite(r)) {
      a.status = AttemptStatus::non_finite;
      return a;
    }
    if (r <= cfg.tol) {
      a.status = AttemptStatus::converged;
      a.eval = std::move(ev);
      return a;
    }
    if (r > last_residual && beta > 0.5) beta = 0.5;
    last_residual = r;

    system.precondition(ev.R_d, ev.R_u);
    Vec f = pack(ev.R_d, ev.R_u);
    for (auto& z : f) z = -z;
    const Vec x = mixer.next(pack(a.d, a.u), f, beta);
    unpack(x, a.d, a.u);
  }
  return a;
}

}  // namespace

StepResult implicit_step(const StepState& prev, const ModelParams& params, const PicardConfig& cfg) {
  params.validate(true);
  cfg.validate(params.tau);
  const GridSpec& grid = prev.d.grid();
  if (prev.d.components() != grid.dim() || prev.u.components() != grid.dim())
    throw ConfigError("implicit_step: d and u must be vector fields");
  const auto ops = Spectral::for_grid(grid);

  // the scheme starts from the Galerkin projections of the previous level
  const SpectralField d_prev = ops->resolve(ops->forward(prev.d));
  const SpectralField u_prev = ops->leray(ops->forward(prev.u));
  const VectorField d_prev_samples = ops->inverse(d_prev);

  ModelParams trial = params;
  AttemptStatus last = AttemptStatus::stalled;
  while (true) {
    Attempt a = solve_at_tau(*ops, d_prev, u_prev, d_prev_samples, trial, cfg);
    last = a.status;
    if (a.status == AttemptStatus::converged) {
      const Evaluation& ev = *a.eval;
      StepResult out{StepState{ops->inverse(a.d), ops->inverse(a.u), prev.time + trial.tau}, ops->inverse(ev.mu),
                     std::make_shared<const VectorField>(ev.v), EnergyLedger{}, a.iters, ev.residual(), trial.tau};
      out.ledger = build_ledger_spectral(*ops, d_prev, u_prev, a.d, a.u, ev.mu, *out.v_extra, trial);
      out.ledger.time = out.state.time;
      out.ledger.picard_iters = a.iters;
      out.ledger.picard_residual = ev.residual();
      return out;
    }
    const double next_tau = trial.tau * cfg.tau_shrink;
    if (next_tau < cfg.tau_min) break;
    trial.tau = next_tau;
  }
  if (last == AttemptStatus::non_finite)
    throw NonFiniteError("implicit step overflowed down to tau_min = " + std::to_string(cfg.tau_min));
  throw PicardDivergence("fixed-point iteration did not converge down to tau_min = " + std::to_string(cfg.tau_min));
}

Iterate picard_sweep(const StepState& prev, const Iterate& current, const ModelParams& params, double damping,
                     Preconditioner pre) {
  params.validate(true);
  const auto ops = Spectral::for_grid(prev.d.grid());
  const SpectralField d_prev = ops->resolve(ops->forward(prev.d));
  const SpectralField u_prev = ops->leray(ops->forward(prev.u));
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("picard.damping ∈ (0,1]");
  const SchemeSystem system(*ops, d_prev, u_prev, params, pre, ops->inverse(d_prev));

  SpectralField d = ops->resolve(ops->forward(current.d));
  SpectralField u = ops->leray(ops->forward(current.u));
  Evaluation ev = system.evaluate(d, u);
  system.precondition(ev.R_d, ev.R_u);
  for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= damping * ev.R_d.data()[i];
  for (std::size_t i = 0; i < u.data().size(); ++i) u.data()[i] -= damping * ev.R_u.data()[i];
  return {ops->inverse(d), ops->inverse(u)};
}

Residuals residual_fully_implicit(const StepState& prev, const Candidate& candidate, const ModelParams& params) {
  const GridSpec& grid = prev.d.grid();
  const int dim = grid.dim();
  const auto ops = Spectral::for_grid(grid);
  const double tau = params.tau;

  auto l2 = [&](const VectorField& f) { return ops->norm(ops->forward(f)); };

  // director equation
  const VectorField v = extra_velocity(candidate.mu, candidate.d, params.alpha);
  VectorField w = to_fine(candidate.u);
  for (std::size_t i = 0; i < w.data().size(); ++i) w.data()[i] += v.data()[i];
  const VectorField t = director_transport(candidate.d, w, params.alpha);
  VectorField rd(grid, dim);
  for (std::size_t i = 0; i < rd.data().size(); ++i)
    rd.data()[i] = candidate.d.data()[i] - prev.d.data()[i] + tau * t.data()[i] +
                   params.epsilon * tau * candidate.mu.data()[i];

  // chemical potential
  const VectorField mu_expected = chemical_potential(candidate.d, prev.d, params);
  VectorField rmu = candidate.mu;
  for (std::size_t i = 0; i < rmu.data().size(); ++i) rmu.data()[i] -= mu_expected.data()[i];

  // momentum, with (u.grad)u assembled from dealiased pairwise products
  const VectorField grad_u = gradient(candidate.u);
  VectorField conv(grid, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      VectorField uj(grid, 1);
      VectorField dj_ui(grid, 1);
      std::copy(candidate.u.component(j).begin(), candidate.u.component(j).end(), uj.component(0).begin());
      std::copy(grad_u.component(i * dim + j).begin(), grad_u.component(i * dim + j).end(),
                dj_ui.component(0).begin());
      const VectorField prod = multiply_dealiased({&uj, &dj_ui});
      for (std::size_t p = 0; p < prod.points(); ++p) conv(i, p) += prod(0, p);
    }
  }
  const VectorField lap_u = laplacian(candidate.u);
  const SpectralField v_base = ops->truncate(ops->forward(v));
  const VectorField v_res = ops->inverse(v_base);
  VectorField ru(grid, dim);
  for (std::size_t i = 0; i < ru.data().size(); ++i)
    ru.data()[i] = params.rho * (candidate.u.data()[i] - prev.u.data()[i]) + tau * params.rho * conv.data()[i] -
                   tau * params.eta * lap_u.data()[i] - tau * v_res.data()[i];
  const VectorField ru_proj = leray_project(ru);

  Residuals r;
  r.d = l2(rd) / (1.0 + l2(candidate.d));
  r.mu = l2(rmu) / (1.0 + l2(candidate.mu));
  r.u = l2(ru_proj) / (params.rho * (1.0 + l2(candidate.u)));
  return r;
}

}  // namespace nematic
