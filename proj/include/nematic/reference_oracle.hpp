#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "nematic/energetics.hpp"
#include "nematic/grid.hpp"
#include "nematic/state.hpp"
#include "nematic/stepper.hpp"

// Brute-force counterparts of the spectral operators for tiny grids. Nothing
// here calls into the transform or differentiation code of the solver: every
// Fourier sum is written out directly.
namespace nematic::oracle {

enum class OperatorKind { gradient, divergence, laplacian, leray };

/// Dense matrix acting on flattened fields (component-major, last axis
/// fastest). gradient maps one component to its derivative along `axis`;
/// divergence maps dim components to one; laplacian maps one to one; leray
/// maps dim to dim. Requires n <= 8 (n <= 4 in 3D).
Eigen::MatrixXd dense_operator_matrix(const GridSpec& grid, OperatorKind kind, int axis = 0);

/// Applies a dense matrix to a flattened field and returns it with
/// `components` components on the base lattice.
VectorField apply(const Eigen::MatrixXd& m, const VectorField& f, int components);

/// Fourier coefficients of one component by direct DFT sums, for every
/// wavenumber of the base lattice; entry m uses the integer wavenumbers of
/// flat index m (row-major, unsigned 0..n-1 per axis). k = 0 holds the mean.
std::vector<Complex> fourier_coefficients(std::span<const double> samples, const GridSpec& grid);

/// Galerkin projection of a pointwise product of resolved factors, from an
/// exact convolution of their coefficients. Factors have one component or a
/// common component count.
VectorField galerkin_product(const std::vector<const VectorField*>& factors);

/// Energies by real-space sums: elastic and kinetic on the base lattice with
/// gradients from the dense matrices, the well on a 4x refined lattice
/// sampled by direct evaluation of the trigonometric interpolant.
/// Requires n <= 16.
EnergyBreakdown quadrature_energy(const VectorField& d, const VectorField& u, const ModelParams& params);

/// Normalized residuals of the implicit system obtained by testing its weak
/// form against every resolved Fourier mode (solenoidal modes for the
/// momentum equation), with all products expanded as exact convolutions.
/// Inputs are taken as their resolved parts. Requires n <= 8.
Residuals dense_scheme_residual(const StepState& prev, const Candidate& candidate, const ModelParams& params);

}  // namespace nematic::oracle
