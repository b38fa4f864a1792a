#include "nematic/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>

#include "nematic/errors.hpp"
#include "nematic/initial_condition.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/spectral.hpp"

namespace nematic {

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.nemf", step);
  return buf;
}

namespace {

double max_abs_divergence(const VectorField& u) {
  const VectorField div = divergence(u);
  double m = 0.0;
  for (double x : div.data()) m = std::max(m, std::abs(x));
  return m;
}

class Outputs {
 public:
  explicit Outputs(const OutputConfig& cfg) : cfg_(cfg) {
    if (!cfg.trace_path.empty()) trace_.emplace(cfg.trace_path);
    if (!cfg.snapshot_dir.empty() && cfg.snapshot_every > 0) {
      std::error_code ec;
      std::filesystem::create_directories(cfg.snapshot_dir, ec);
      if (ec) throw IoError("cannot create snapshot directory '" + cfg.snapshot_dir + "': " + ec.message());
    }
  }

  void row(const TraceRow& r) {
    if (trace_) trace_->append(r);
  }

  bool snapshots() const { return !cfg_.snapshot_dir.empty() && cfg_.snapshot_every > 0; }

  void snapshot(int step, const StepState& s, const StepResult* r) {
    if (!snapshots()) return;
    std::vector<std::pair<std::string, const VectorField*>> extra;
    std::optional<VectorField> v_base;
    if (cfg_.full_state && r) {
      const auto ops = Spectral::for_grid(s.d.grid());
      v_base.emplace(ops->inverse(ops->truncate(ops->forward(*r->v_extra))));
      extra.emplace_back("mu", &r->mu);
      extra.emplace_back("v", &*v_base);
    }
    write_snapshot((std::filesystem::path(cfg_.snapshot_dir) / snapshot_name(step)).string(), snapshot_of(s, extra));
  }

 private:
  OutputConfig cfg_;
  std::optional<TraceWriter> trace_;
};

}  // namespace

RunSummary run_simulation(const RunConfig& cfg, std::ostream& log, const StepObserver& observer) {
  RunSummary summary;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    summary.status = exit_config_error;
    summary.message = e.what();
    return summary;
  }

  std::unique_ptr<Outputs> out;
  try {
    out = std::make_unique<Outputs>(cfg.output);
  } catch (const IoError& e) {
    summary.status = exit_io_error;
    summary.message = e.what();
    return summary;
  }

  StepState state = initial_condition(cfg.ic.kind, cfg.grid, cfg.ic.seed, cfg.ic.amplitude);
  summary.initial_energy = total_energy(state.d, state.u, cfg.params).total;
  const double tau = cfg.params.tau;
  const double budget = default_energy_budget(cfg.picard.tol, summary.initial_energy);
  std::optional<StepResult> last;
  int step = 0;
  int violations = 0;

  try {
    while (cfg.t_end - state.time > 1e-9 * tau) {
      ModelParams p = cfg.params;
      p.tau = std::min(tau, cfg.t_end - state.time);
      PicardConfig pc = cfg.picard;
      pc.tau_min = std::min(pc.tau_min, p.tau);
      StepResult r = implicit_step(state, p, pc);
      ++step;
      r.ledger.step = step;

      TraceRow row;
      row.ledger = r.ledger;
      row.length = director_length_stats(r.state.d);
      row.div_u_max = max_abs_divergence(r.state.u);
      row.h2_d = h2_diagnostic(r.state.d);
      if (!check_energy_inequality(r.ledger, budget).pass) ++violations;
      out->row(row);
      if (observer) observer(state, r, row);
      if (out->snapshots() && step % cfg.output.snapshot_every == 0) out->snapshot(step, r.state, &r);

      state = r.state;
      last = std::move(r);
    }
  } catch (const PicardDivergence& e) {
    summary.status = exit_solver_failure;
    summary.message = e.what();
  } catch (const NonFiniteError& e) {
    summary.status = exit_solver_failure;
    summary.message = e.what();
  } catch (const IoError& e) {
    summary.status = exit_io_error;
    summary.message = e.what();
  }

  summary.steps = step;
  summary.time = state.time;
  if (summary.status == exit_solver_failure) {
    // keep the last accepted state next to the partial trace
    try {
      if (out->snapshots()) out->snapshot(step, state, last ? &*last : nullptr);
    } catch (const IoError& e) {
      log << "warning: " << e.what() << "\n";
    }
    log << "solver failure after " << step << " steps at t = " << format_number(state.time) << ": "
        << summary.message << "\n";
    return summary;
  }
  if (summary.status != exit_ok) return summary;
  log << "completed " << step << " steps, t = " << format_number(state.time) << ", E0 = "
      << format_number(summary.initial_energy);
  if (last) log << ", E = " << format_number(last->ledger.current.total);
  log << ", energy-inequality violations: " << violations << "\n";
  return summary;
}

}  // namespace nematic
