#pragma once

#include <memory>
#include <vector>

#include "nematic/grid.hpp"

namespace nematic {

/// Transforms and Fourier-diagonal operators for one grid.
///
/// Derivatives use the wavenumber 2*pi*k with the Nyquist component zeroed on
/// each axis, so gradient, divergence and Laplacian compose exactly
/// (div grad = laplacian) on every field. Leray projection and Galerkin
/// truncation map onto resolved modes only.
///
/// Instances are immutable after construction and safe to share across
/// threads; use `Spectral::for_grid` to get the cached instance.
class Spectral {
 public:
  explicit Spectral(const GridSpec& grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  static std::shared_ptr<const Spectral> for_grid(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }

  SpectralField forward(const VectorField& f) const;
  VectorField inverse(const SpectralField& f) const;

  /// Zero-pads resolved base coefficients onto the product lattice.
  SpectralField lift(const SpectralField& base) const;
  /// Keeps the resolved modes of a product-lattice spectrum.
  SpectralField truncate(const SpectralField& fine) const;
  /// Galerkin projection on the base lattice: zeroes every unresolved mode.
  SpectralField resolve(const SpectralField& base) const;

  /// Component c*dim + j holds d/dx_j of input component c.
  SpectralField gradient(const SpectralField& f) const;
  /// Contracts the last index: (div M)_i = sum_j dM_ij/dx_j. Input components
  /// must be a multiple of dim.
  SpectralField divergence(const SpectralField& f) const;
  SpectralField laplacian(const SpectralField& f) const;
  /// Projection onto resolved, zero-mean, divergence-free vector fields.
  SpectralField leray(const SpectralField& f) const;

  /// Integral over the unit torus of sum_c a_c b_c (Parseval).
  double inner(const SpectralField& a, const SpectralField& b) const;
  double norm(const SpectralField& a) const;
  /// max over modes of |sum_j k_j f_j(k)| * 2*pi for a vector field.
  double max_divergence(const SpectralField& f) const;

  // Mode tables ------------------------------------------------------------
  /// Integer wavenumber along axis a of mode m.
  int wavenumber(Level level, std::size_t m, int axis) const {
    return table(level).k[m * static_cast<std::size_t>(grid_.dim()) + static_cast<std::size_t>(axis)];
  }
  /// 2*pi*k along axis a with the Nyquist component zeroed.
  double derivative_factor(Level level, std::size_t m, int axis) const {
    return table(level).dk[m * static_cast<std::size_t>(grid_.dim()) + static_cast<std::size_t>(axis)];
  }
  /// Multiplicity of mode m in the half-complex layout (1 or 2).
  double parseval_weight(Level level, std::size_t m) const { return table(level).weight[m]; }
  bool resolved(std::size_t base_mode) const { return base_.fine_index[base_mode] >= 0; }
  std::size_t modes(Level level) const { return table(level).weight.size(); }

 private:
  struct Table {
    std::vector<int> k;
    std::vector<double> dk;
    std::vector<double> weight;
    std::vector<long> fine_index;  // base only: matching fine mode, -1 when unresolved
  };
  const Table& table(Level level) const { return level == Level::base ? base_ : fine_; }
  void build_table(Level level, Table& t) const;
  void check_level(const SpectralField& f, Level level, const char* op) const;

  GridSpec grid_;
  Table base_;
  Table fine_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// Convenience wrappers on real-space fields (base or product lattice). ------

SpectralField forward_transform(const VectorField& f);
VectorField inverse_transform(const SpectralField& f);
VectorField gradient(const VectorField& f);
VectorField divergence(const VectorField& m);
VectorField laplacian(const VectorField& f);
VectorField leray_project(const VectorField& w);

struct GradientSplit {
  VectorField sym;
  VectorField skew;
};
/// Symmetric and skew parts of the Jacobian of a vector field.
GradientSplit sym_skew_gradient(const VectorField& u);

/// Galerkin projection (drops unresolved modes) of a base-lattice field.
VectorField project_resolved(const VectorField& f);

/// Requirement placed on a dealiased product.
enum class ProductExactness { best_effort, exact };

/// Pointwise product of 2 to 5 factors, evaluated on the product lattice and
/// truncated to resolved base modes. Each factor has either one component or
/// the common component count of the others (componentwise product).
/// With ProductExactness::exact, throws ConfigError unless the padding makes
/// the truncated product free of aliasing.
VectorField multiply_dealiased(const std::vector<const VectorField*>& factors,
                               ProductExactness exactness = ProductExactness::best_effort);

/// Base-lattice field lifted onto the product lattice (trigonometric
/// interpolation of its resolved modes).
VectorField to_fine(const VectorField& base);

/// Mean over the field's lattice of sum_c f_c^2 (equals the L2 norm squared on
/// the unit torus when the lattice resolves the squared field).
double quadrature_mean_square(const VectorField& f);

}  // namespace nematic
