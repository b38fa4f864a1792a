#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "nematic/config.hpp"
#include "nematic/stepper.hpp"
#include "nematic/trace.hpp"

namespace nematic {

enum ExitStatus : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_solver_failure = 3,
  exit_io_error = 4,
};

/// Called after every accepted step with the state it started from.
using StepObserver = std::function<void(const StepState& prev, const StepResult& result, const TraceRow& row)>;

struct RunSummary {
  ExitStatus status = exit_ok;
  int steps = 0;
  double time = 0.0;
  double initial_energy = 0.0;
  std::string message;
};

/// Steps from the configured initial condition until t_end, writing the
/// trace and snapshots. Solver and I/O failures are reported in the summary;
/// everything written up to the failure is kept.
RunSummary run_simulation(const RunConfig& cfg, std::ostream& log, const StepObserver& observer = {});

/// Snapshot file name for a step, e.g. snap_000010.nemf.
std::string snapshot_name(int step);

}  // namespace nematic
