#pragma once

#include <cmath>
#include <random>

#include "nematic/grid.hpp"
#include "nematic/spectral.hpp"

namespace nematic::testing {

/// White-noise samples on the base lattice (every mode populated, Nyquist included).
inline VectorField noise(const GridSpec& grid, int components, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorField f(grid, components);
  for (double& x : f.data()) x = normal(rng);
  return f;
}

/// Random field on the resolved modes with spectrum decaying like |k|^-decay.
inline VectorField smooth(const GridSpec& grid, int components, std::mt19937_64& rng, double decay = 2.0,
                          double mean = 0.0) {
  const auto ops = Spectral::for_grid(grid);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid, components, Level::base);
  for (int c = 0; c < components; ++c)
    for (std::size_t m = 0; m < f.modes(); ++m) {
      double k2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) k2 += std::pow(ops->wavenumber(Level::base, m, a), 2);
      f(c, m) = Complex(normal(rng), normal(rng)) / std::pow(1.0 + k2, decay / 2.0);
    }
  for (int c = 0; c < components; ++c) f(c, 0) = mean;
  // inverse of the half-complex data fixes the Hermitian symmetry; resolve drops the rest
  return project_resolved(ops->inverse(ops->resolve(f)));
}

inline VectorField solenoidal(const GridSpec& grid, std::mt19937_64& rng, double decay = 2.0) {
  return leray_project(smooth(grid, grid.dim(), rng, decay));
}

inline double max_abs(const VectorField& f) {
  double m = 0.0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double l2(const VectorField& f) {
  const auto ops = Spectral::for_grid(f.grid());
  return ops->norm(ops->forward(f));
}

inline double l2_diff(const VectorField& a, const VectorField& b) {
  VectorField c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return l2(c);
}

}  // namespace nematic::testing
