#pragma once

#include <cstdint>
#include <string_view>

#include "nematic/grid.hpp"
#include "nematic/state.hpp"

namespace nematic {

enum class IcKind {
  /// d = e1 + amplitude * r / max|r| for a random low-mode field r, so
  /// 1 - amplitude <= |d| <= 1 + amplitude.
  uniform_perturbed,
  /// Band-limited random director with unit RMS length.
  random_smooth,
  /// A +1 / -1 defect pair along y = 1/2 with tanh cores (2D only).
  defect_pair,
};

std::string_view to_string(IcKind kind);
IcKind parse_ic_kind(std::string_view text);

/// Initial state with a resolved director and a solenoidal, zero-mean
/// velocity of max speed `amplitude`. Deterministic in (kind, grid, seed,
/// amplitude).
StepState initial_condition(IcKind kind, const GridSpec& grid, std::uint64_t seed, double amplitude);

}  // namespace nematic
