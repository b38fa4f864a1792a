#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nematic {

using Complex = std::complex<double>;

enum class Dealias { none, two_thirds, exact };

std::string_view to_string(Dealias mode);
Dealias parse_dealias(std::string_view text);

/// Rational padding factor for dealiased products: 1, 3/2 or 3.
struct Padding {
  int num = 1;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  bool operator==(const Padding&) const = default;
};

Padding default_padding(Dealias mode);
Padding parse_padding(std::string_view text);
std::string to_string(Padding p);

/// Uniform periodic grid on the unit torus [0,1)^dim.
///
/// Fields live on two lattices: the base lattice of n points per axis and the
/// product lattice of padding * n points per axis, on which pointwise
/// nonlinearities are evaluated before truncation back to resolved modes.
/// The resolved (Galerkin) space is every mode with |k_j| < n/2 on all axes.
class GridSpec {
 public:
  GridSpec(int dim, int n, Dealias dealias = Dealias::two_thirds,
           std::optional<Padding> padding = std::nullopt);

  int dim() const { return dim_; }
  int n() const { return n_; }
  Dealias dealias() const { return dealias_; }
  Padding padding() const { return padding_; }

  /// Points per axis on the product lattice.
  int fine_n() const { return n_ * padding_.num / padding_.den; }
  std::size_t points() const { return ipow(n_, dim_); }
  std::size_t fine_points() const { return ipow(fine_n(), dim_); }

  /// Largest resolved |k_j|.
  int bandwidth() const { return n_ / 2 - 1; }

  /// Whether products of `degree` resolved factors are aliasing-free after
  /// truncation to the resolved modes.
  bool exact_for_degree(int degree) const;

  bool operator==(const GridSpec& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && dealias_ == o.dealias_ && padding_ == o.padding_;
  }

 private:
  static std::size_t ipow(int base, int e);

  int dim_;
  int n_;
  Dealias dealias_;
  Padding padding_;
};

/// Which lattice a field is sampled on.
enum class Level { base, fine };

/// Real samples of a multi-component field, component-major, each component
/// row-major with the last axis fastest. Tensor fields store entry (i,j) as
/// component i*dim + j.
class VectorField {
 public:
  VectorField(const GridSpec& grid, int components, Level level = Level::base);

  const GridSpec& grid() const { return grid_; }
  Level level() const { return level_; }
  int components() const { return components_; }
  /// Points per axis on this field's lattice.
  int size() const { return level_ == Level::base ? grid_.n() : grid_.fine_n(); }
  std::size_t points() const { return level_ == Level::base ? grid_.points() : grid_.fine_points(); }

  std::span<double> component(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
  }
  std::span<const double> component(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double& operator()(int c, std::size_t p) { return data_[static_cast<std::size_t>(c) * points() + p]; }
  double operator()(int c, std::size_t p) const { return data_[static_cast<std::size_t>(c) * points() + p]; }

  /// Physical coordinate of point p along axis a.
  double coordinate(std::size_t p, int axis) const;

  bool all_finite() const;

 private:
  GridSpec grid_;
  Level level_;
  int components_;
  std::vector<double> data_;
};

/// Fourier coefficients in half-complex (real-to-complex) layout: every axis
/// but the last stores all `size` wavenumbers, the last stores size/2+1.
/// Coefficients are normalized so that the k = 0 entry is the mean.
class SpectralField {
 public:
  SpectralField(const GridSpec& grid, int components, Level level = Level::base);

  const GridSpec& grid() const { return grid_; }
  Level level() const { return level_; }
  int components() const { return components_; }
  int size() const { return level_ == Level::base ? grid_.n() : grid_.fine_n(); }
  std::size_t modes() const { return modes_; }

  std::span<Complex> component(int c) { return {data_.data() + static_cast<std::size_t>(c) * modes_, modes_}; }
  std::span<const Complex> component(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * modes_, modes_};
  }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  Complex& operator()(int c, std::size_t m) { return data_[static_cast<std::size_t>(c) * modes_ + m]; }
  Complex operator()(int c, std::size_t m) const { return data_[static_cast<std::size_t>(c) * modes_ + m]; }

 private:
  GridSpec grid_;
  Level level_;
  int components_;
  std::size_t modes_;
  std::vector<Complex> data_;
};

}  // namespace nematic
