#pragma once

#include <stdexcept>
#include <string>

namespace nematic {

/// Invalid grid, parameter or run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field sample or intermediate quantity is NaN or infinite.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fixed-point iteration did not converge even at the smallest admissible step.
class PicardDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nematic
