// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "nematic/coupling.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/energetics.hpp"
#include "nematic/initial_condition.hpp"
#include "nematic/reference_oracle.hpp"
#include "nematic/runner.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/spectral.hpp"
#include "nematic/stepper.hpp"
#include "support.hpp"

using namespace nematic;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "criterion " << id << " (" << name << "): " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Criteria 1, 2, 5 share one run.
void energy_run() {
  RunConfig cfg;
  cfg.grid = GridSpec(2, 32, Dealias::exact);
  cfg.params.rho = 1.0;
  cfg.params.eta = 1.0;
  cfg.params.alpha = 0.3;
  cfg.params.gamma = 0.1;
  cfg.params.epsilon = 0.01;
  cfg.params.tau = 1e-3;
  cfg.t_end = 200 * 1e-3;
  cfg.picard.tol = 1e-11;
  cfg.picard.tau_min = 1e-6;
  cfg.ic = {IcKind::uniform_perturbed, 7, 0.2};

  double budget = 0.0;
  double worst_slack = 1e300;
  double worst_div = 0.0;
  double worst_res = 0.0;
  int steps = 0, slack_fail = 0, div_fail = 0, res_fail = 0;

  const auto start = std::chrono::steady_clock::now();
  std::ostringstream log;
  const RunSummary summary = run_simulation(cfg, log, [&](const StepState& prev, const StepResult& r, const TraceRow& row) {
    ++steps;
    if (budget == 0.0) budget = default_energy_budget(cfg.picard.tol, r.ledger.previous.total);
    worst_slack = std::min(worst_slack, r.ledger.slack);
    if (r.ledger.slack < -budget) ++slack_fail;

    const double u_norm = std::sqrt(2.0 * r.ledger.current.kinetic / cfg.params.rho);
    const double div_ratio = row.div_u_max / (1.0 + u_norm);
    worst_div = std::max(worst_div, div_ratio);
    if (div_ratio > 1e-12) ++div_fail;

    ModelParams p = cfg.params;
    p.tau = r.tau_used;
    const Residuals res = residual_fully_implicit(prev, {r.state.d, r.state.u, r.mu}, p);
    worst_res = std::max(worst_res, res.max());
    if (res.max() > 2.0 * cfg.picard.tol) ++res_fail;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool completed = summary.status == exit_ok && steps == 200;

  report(1, "discrete energy law", completed && slack_fail == 0 && seconds < 60.0,
         "steps=" + std::to_string(steps) + " min_slack=" + fmt(worst_slack) + " budget=" + fmt(budget) +
             " violations=" + std::to_string(slack_fail) + " runtime=" + fmt(seconds) + "s" +
             (summary.message.empty() ? "" : " error=" + summary.message));
  report(2, "solenoidality", completed && div_fail == 0,
         "max div_u_max/(1+|u|)=" + fmt(worst_div) + " limit=1e-12 violations=" + std::to_string(div_fail));
  report(5, "implicit-system certification", completed && res_fail == 0,
         "max residual=" + fmt(worst_res) + " limit=" + fmt(2.0 * cfg.picard.tol) +
             " violations=" + std::to_string(res_fail));
}

void length_mechanism() {
  std::mt19937_64 rng(2024);
  const GridSpec grid(2, 16, Dealias::exact);
  const auto ops = Spectral::for_grid(grid);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const VectorField d = testing::smooth(grid, 2, rng, 1.5, 0.5);
    const VectorField w = testing::solenoidal(grid, rng, 1.5);
    const VectorField t = director_transport(d, w, 0.5);
    const double integral = ops->inner(ops->forward(d), ops->forward(t));
    const double nd = testing::l2(d);
    worst = std::max(worst, std::abs(integral) / (nd * nd * testing::l2(w)));
  }

  // transport-only run with a unit-length director and a frozen cellular flow
  const GridSpec g32(2, 32, Dealias::exact);
  VectorField d0(g32, 2), w(g32, 2);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t p = 0; p < d0.points(); ++p) {
    const double x = d0.coordinate(p, 0), y = d0.coordinate(p, 1);
    const double phi = 0.5 * std::sin(two_pi * x) * std::cos(two_pi * y) + 0.3 * std::cos(two_pi * (x + y));
    d0(0, p) = std::cos(phi);
    d0(1, p) = std::sin(phi);
    // w = curl of psi = sin(2 pi x) sin(2 pi y) / (2 pi)
    w(0, p) = std::sin(two_pi * x) * std::cos(two_pi * y);
    w(1, p) = -std::cos(two_pi * x) * std::sin(two_pi * y);
  }
  const TransportRun run = transport_only_run(d0, w, 0.5, 1e-4, 100);
  double drift = 0.0;
  for (double v : run.max_length_deviation) drift = std::max(drift, v);

  report(3, "alpha=1/2 length mechanism", worst <= 1e-12 && drift <= 1e-6,
         "max |int d.T|/(|d|^2|w|)=" + fmt(worst) + " limit=1e-12; transport-only drift=" + fmt(drift) +
             " limit=1e-6");
}

struct OracleTally {
  double op = 0.0;
  double energy = 0.0;
  double residual = 0.0;
};

void oracle_case(const GridSpec& grid, std::mt19937_64& rng, OracleTally& tally) {
  const int dim = grid.dim();
  using oracle::OperatorKind;
  std::vector<Eigen::MatrixXd> grads;
  for (int j = 0; j < dim; ++j) grads.push_back(oracle::dense_operator_matrix(grid, OperatorKind::gradient, j));
  const Eigen::MatrixXd div = oracle::dense_operator_matrix(grid, OperatorKind::divergence);
  const Eigen::MatrixXd lap = oracle::dense_operator_matrix(grid, OperatorKind::laplacian);
  const Eigen::MatrixXd leray = oracle::dense_operator_matrix(grid, OperatorKind::leray);

  auto compare = [&](const VectorField& dense, const VectorField& spectral) {
    tally.op = std::max(tally.op, testing::max_abs_diff(dense, spectral) / std::max(1.0, testing::max_abs(spectral)));
  };

  for (int trial = 0; trial < 20; ++trial) {
    const VectorField s = testing::noise(grid, 1, rng);
    const VectorField v = testing::noise(grid, dim, rng);
    const VectorField g = gradient(s);
    for (int j = 0; j < dim; ++j) {
      VectorField gj(grid, 1);
      std::copy(g.component(j).begin(), g.component(j).end(), gj.component(0).begin());
      compare(oracle::apply(grads[j], s, 1), gj);
    }
    compare(oracle::apply(div, v, 1), divergence(v));
    compare(oracle::apply(lap, s, 1), laplacian(s));
    compare(oracle::apply(leray, v, dim), leray_project(v));
  }

  ModelParams params;
  params.alpha = 0.3;
  params.tau = 1e-3;
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField d = testing::smooth(grid, dim, rng, 1.0, 0.7);
    const VectorField u = testing::solenoidal(grid, rng, 1.0);
    const EnergyBreakdown a = total_energy(d, u, params);
    const EnergyBreakdown b = oracle::quadrature_energy(d, u, params);
    for (auto [x, y] : {std::pair{a.elastic, b.elastic}, {a.well, b.well}, {a.kinetic, b.kinetic}, {a.total, b.total}})
      tally.energy = std::max(tally.energy, rel_err(x, y));
  }

  auto compare_residuals = [&](const StepState& prev, const Candidate& c, const ModelParams& p) {
    const Residuals a = residual_fully_implicit(prev, c, p);
    const Residuals b = oracle::dense_scheme_residual(prev, c, p);
    for (auto [x, y] : {std::pair{a.d, b.d}, {a.mu, b.mu}, {a.u, b.u}})
      tally.residual = std::max(tally.residual, rel_err(x, y));
  };
  for (int trial = 0; trial < 20; ++trial) {
    const StepState prev{testing::smooth(grid, dim, rng, 1.0, 0.7), testing::solenoidal(grid, rng, 1.0), 0.0};
    const Candidate c{testing::smooth(grid, dim, rng, 1.0, 0.7), testing::solenoidal(grid, rng, 1.0),
                      testing::smooth(grid, dim, rng, 1.0)};
    compare_residuals(prev, c, params);
  }
  // and on converged stepper output
  StepState prev{testing::smooth(grid, dim, rng, 2.0, 0.7), testing::solenoidal(grid, rng, 2.0), 0.0};
  PicardConfig pc;
  pc.tol = 1e-12;
  const StepResult r = implicit_step(prev, params, pc);
  ModelParams p = params;
  p.tau = r.tau_used;
  compare_residuals(prev, {r.state.d, r.state.u, r.mu}, p);
}

void oracle_equivalence() {
  std::mt19937_64 rng(99);
  OracleTally tally;
  oracle_case(GridSpec(2, 8, Dealias::exact), rng, tally);
  oracle_case(GridSpec(3, 4, Dealias::exact), rng, tally);
  report(4, "oracle equivalence", tally.op <= 1e-12 && tally.energy <= 1e-11 && tally.residual <= 1e-10,
         "operators=" + fmt(tally.op) + " (1e-12) energy=" + fmt(tally.energy) + " (1e-11) residuals=" +
             fmt(tally.residual) + " (1e-10)");
}

double internal_energy(const VectorField& d, const ModelParams& p) {
  const EnergyBreakdown e = total_energy(d, VectorField(d.grid(), d.grid().dim()), p);
  return e.elastic + e.well;
}

void gradient_check() {
  std::mt19937_64 rng(31);
  const GridSpec grid(2, 16, Dealias::exact);
  const auto ops = Spectral::for_grid(grid);
  ModelParams params;
  double worst_order = 1e300;
  for (int dir = 0; dir < 10; ++dir) {
    const VectorField d = testing::smooth(grid, 2, rng, 2.0, 0.8);
    const VectorField delta = testing::smooth(grid, 2, rng, 2.0, 0.3);
    const VectorField mu = chemical_potential(d, d, params);
    const double exact = ops->inner(ops->forward(mu), ops->forward(delta));
    double err[2];
    const double hs[2] = {1e-3, 1e-4};
    for (int i = 0; i < 2; ++i) {
      VectorField plus = d, minus = d;
      for (std::size_t k = 0; k < d.data().size(); ++k) {
        plus.data()[k] += hs[i] * delta.data()[k];
        minus.data()[k] -= hs[i] * delta.data()[k];
      }
      const double fd = (internal_energy(plus, params) - internal_energy(minus, params)) / (2.0 * hs[i]);
      err[i] = std::abs(fd - exact);
    }
    worst_order = std::min(worst_order, std::log10(err[0] / err[1]));
  }
  report(6, "variational consistency", worst_order >= 1.9, "min observed order=" + fmt(worst_order) + " limit=1.9");
}

void self_convergence() {
  const GridSpec grid(2, 16, Dealias::exact);
  ModelParams params;
  params.alpha = 0.3;
  const StepState initial = initial_condition(IcKind::uniform_perturbed, grid, 11, 0.2);
  const double horizon = 0.02;
  std::vector<StepState> finals;
  for (double tau : {2e-3, 1e-3, 5e-4}) {
    params.tau = tau;
    PicardConfig pc;
    pc.tol = 1e-12;
    pc.tau_min = tau;
    StepState s = initial;
    const int steps = static_cast<int>(std::lround(horizon / tau));
    for (int i = 0; i < steps; ++i) s = implicit_step(s, params, pc).state;
    finals.push_back(s);
  }
  auto diff = [](const VectorField& a, const VectorField& b) {
    VectorField c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
    return testing::l2(c);
  };
  const double rate_d = std::log2(diff(finals[0].d, finals[1].d) / diff(finals[1].d, finals[2].d));
  const double rate_u = std::log2(diff(finals[0].u, finals[1].u) / diff(finals[1].u, finals[2].u));
  const bool pass = rate_d >= 0.7 && rate_d <= 1.3 && rate_u >= 0.7 && rate_u <= 1.3;
  report(7, "temporal self-convergence", pass, "rate_d=" + fmt(rate_d) + " rate_u=" + fmt(rate_u) + " window=[0.7,1.3]");
}

std::vector<unsigned char> file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / ("nematic_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  bool same = true;
  int compared = 0;
  std::vector<fs::path> dirs;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / ("run" + std::to_string(run));
    fs::create_directories(dir);
    RunConfig cfg = parse_config(
        "dim = 2\nn = 16\ndealias = exact\nalpha = 0.3\ntau = 1e-3\nt_end = 0.01\n"
        "ic.kind = random_smooth\nic.seed = 5\nic.amplitude = 0.3\n"
        "output.snapshot_every = 2\noutput.full_state = true\n");
    cfg.output.trace_path = (dir / "trace.csv").string();
    cfg.output.snapshot_dir = (dir / "snaps").string();
    std::ostringstream log;
    if (run_simulation(cfg, log).status != exit_ok) same = false;
    dirs.push_back(dir);
  }
  same = same && file_bytes(dirs[0] / "trace.csv") == file_bytes(dirs[1] / "trace.csv");
  for (const auto& entry : fs::directory_iterator(dirs[0] / "snaps")) {
    ++compared;
    same = same && file_bytes(entry.path()) == file_bytes(dirs[1] / "snaps" / entry.path().filename());
  }

  // writer/reader round trip
  bool roundtrip = compared > 0;
  for (const auto& entry : fs::directory_iterator(dirs[0] / "snaps")) {
    const auto bytes = file_bytes(entry.path());
    const Snapshot s = read_snapshot(entry.path().string());
    roundtrip = roundtrip && encode_snapshot(s) == bytes;
    const fs::path copy = root / "copy.nemf";
    write_snapshot(copy.string(), s);
    roundtrip = roundtrip && file_bytes(copy) == bytes;
  }
  fs::remove_all(root);
  report(8, "determinism and formats", same && roundtrip && compared == 5,
         "snapshots compared=" + std::to_string(compared) + " identical=" + (same ? "yes" : "no") +
             " round-trip=" + (roundtrip ? "bitwise" : "mismatch"));
}

}  // namespace

int main() {
  energy_run();
  length_mechanism();
  oracle_equivalence();
  gradient_check();
  self_convergence();
  determinism();
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
