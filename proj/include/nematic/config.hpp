#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nematic/energetics.hpp"
#include "nematic/grid.hpp"
#include "nematic/initial_condition.hpp"
#include "nematic/stepper.hpp"

namespace nematic {

struct IcConfig {
  IcKind kind = IcKind::uniform_perturbed;
  std::uint64_t seed = 0;
  double amplitude = 0.1;
};

struct OutputConfig {
  std::string trace_path;    ///< empty: no trace
  std::string snapshot_dir;  ///< empty: no snapshots
  int snapshot_every = 0;    ///< 0: never
  bool full_state = false;   ///< also store mu and v
};

struct RunConfig {
  GridSpec grid{2, 32};
  ModelParams params;
  double t_end = 0.0;
  PicardConfig picard;
  IcConfig ic;
  OutputConfig output;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Parses a flat `key = value` document. `#` starts a comment. Required keys:
/// dim, n, tau, t_end. Unknown or repeated keys are errors.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file; IoError when unreadable.
RunConfig load_config(const std::string& path);

/// Canonical text form, accepted by parse_config.
std::string to_text(const RunConfig& cfg);

}  // namespace nematic
