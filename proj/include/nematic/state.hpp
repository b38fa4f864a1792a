#pragma once

#include "nematic/grid.hpp"

namespace nematic {

/// One time level: director d and velocity u on the base lattice. The
/// velocity is kept solenoidal with zero mean.
struct StepState {
  VectorField d;
  VectorField u;
  double time = 0.0;
};

}  // namespace nematic
