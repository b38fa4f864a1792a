#pragma once

// Data-parallel loops over grid points and Fourier modes.
//
// Every kernel takes an execution policy. `Exec::serial` is the reference
// path kept for testing and benchmarking; `Exec::parallel` distributes the
// same loop body over OpenMP threads. Reductions are blocked with a fixed
// block size, so both paths return bitwise identical results regardless of
// thread count.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nematic::kernels {

enum class Exec { serial, parallel };

/// Policy used by the physics modules when none is passed explicitly.
Exec default_exec();
void set_default_exec(Exec e);

/// Number of OpenMP threads used by `Exec::parallel`.
int threads();
void set_threads(int count);

inline constexpr std::size_t kReductionBlock = 2048;

template <class Body>
void for_each(std::size_t count, Exec exec, Body&& body) {
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  }
}

/// Deterministic sum of term(i) for i in [0, count).
template <class Term>
double reduce(std::size_t count, Exec exec, Term&& term);

double sum(std::span<const double> x, Exec exec = default_exec());
double dot(std::span<const double> a, std::span<const double> b, Exec exec = default_exec());
double max_abs(std::span<const double> x, Exec exec = default_exec());

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y, Exec exec = default_exec());

/// out_i = (1/gamma) |d|^2 d_i at every point. `d` holds dim components.
void cubic_well_force(std::span<const double> d, std::span<double> out, int dim, std::size_t points,
                      double gamma, Exec exec = default_exec());

/// out = (|d|^2 - 1)^2 / (4 gamma) at every point.
void double_well_density(std::span<const double> d, std::span<double> out, int dim, std::size_t points,
                         double gamma, Exec exec = default_exec());

/// Pointwise part of the extra velocity, out_i = sum_j mu_j d(d_j)/dx_i,
/// with grad_d(j,i) = d(d_j)/dx_i stored as component j*dim+i.
void mu_dot_grad_d(std::span<const double> mu, std::span<const double> grad_d, std::span<double> out, int dim,
                   std::size_t points, Exec exec = default_exec());

/// Flux tensor q_ij = alpha mu_i d_j - (1-alpha) d_i mu_j.
void extra_flux(std::span<const double> mu, std::span<const double> d, std::span<double> q, int dim,
                std::size_t points, double alpha, Exec exec = default_exec());

/// Director transport integrand
///   out_i = sum_j w_j dd_i/dx_j - alpha sum_j dw_i/dx_j d_j + (1-alpha) sum_j dw_j/dx_i d_j.
void transport_integrand(std::span<const double> d, std::span<const double> grad_d, std::span<const double> w,
                         std::span<const double> grad_w, std::span<double> out, int dim, std::size_t points,
                         double alpha, Exec exec = default_exec());

/// Convective term out_i = sum_j u_j du_i/dx_j.
void convection(std::span<const double> u, std::span<const double> grad_u, std::span<double> out, int dim,
                std::size_t points, Exec exec = default_exec());

/// Mean over points of sum_c x_c^2.
double mean_square(std::span<const double> x, int components, std::size_t points, Exec exec = default_exec());

// ---------------------------------------------------------------------------

template <class Term>
double reduce(std::size_t count, Exec exec, Term&& term) {
  const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  if (blocks == 0) return 0.0;
  double small[64];
  double* partial = small;
  std::unique_ptr<double[]> heap;
  if (blocks > 64) {
    heap = std::make_unique<double[]>(blocks);
    partial = heap.get();
  }
  for_each(blocks, exec, [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = lo + kReductionBlock < count ? lo + kReductionBlock : count;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) total += partial[b];
  return total;
}

}  // namespace nematic::kernels
