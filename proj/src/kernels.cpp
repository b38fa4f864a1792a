#include "nematic/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace nematic::kernels {

namespace {
Exec g_default_exec = Exec::parallel;
}

Exec default_exec() { return g_default_exec; }
void set_default_exec(Exec e) { g_default_exec = e; }

int threads() { return omp_get_max_threads(); }
void set_threads(int count) { omp_set_num_threads(std::max(1, count)); }

double sum(std::span<const double> x, Exec exec) {
  return reduce(x.size(), exec, [&](std::size_t i) { return x[i]; });
}

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  return reduce(a.size(), exec, [&](std::size_t i) { return a[i] * b[i]; });
}

double max_abs(std::span<const double> x, Exec exec) {
  // max is order-independent, blocked for symmetry with reduce()
  const std::size_t blocks = (x.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  for_each(blocks, exec, [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(lo + kReductionBlock, x.size());
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
    partial[b] = m;
  });
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y, Exec exec) {
  for_each(x.size(), exec, [&](std::size_t i) { y[i] += a * x[i]; });
}

void cubic_well_force(std::span<const double> d, std::span<double> out, int dim, std::size_t points,
                      double gamma, Exec exec) {
  const double inv = 1.0 / gamma;
  for_each(points, exec, [&](std::size_t p) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += d[c * points + p] * d[c * points + p];
    for (int c = 0; c < dim; ++c) out[c * points + p] = inv * s * d[c * points + p];
  });
}

void double_well_density(std::span<const double> d, std::span<double> out, int dim, std::size_t points,
                         double gamma, Exec exec) {
  const double inv = 1.0 / (4.0 * gamma);
  for_each(points, exec, [&](std::size_t p) {
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += d[c * points + p] * d[c * points + p];
    out[p] = inv * (s - 1.0) * (s - 1.0);
  });
}

void mu_dot_grad_d(std::span<const double> mu, std::span<const double> grad_d, std::span<double> out, int dim,
                   std::size_t points, Exec exec) {
  for_each(points, exec, [&](std::size_t p) {
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += mu[j * points + p] * grad_d[(j * dim + i) * points + p];
      out[i * points + p] = s;
    }
  });
}

void extra_flux(std::span<const double> mu, std::span<const double> d, std::span<double> q, int dim,
                std::size_t points, double alpha, Exec exec) {
  for_each(points, exec, [&](std::size_t p) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        q[(i * dim + j) * points + p] =
            alpha * mu[i * points + p] * d[j * points + p] - (1.0 - alpha) * d[i * points + p] * mu[j * points + p];
  });
}

void transport_integrand(std::span<const double> d, std::span<const double> grad_d, std::span<const double> w,
                         std::span<const double> grad_w, std::span<double> out, int dim, std::size_t points,
                         double alpha, Exec exec) {
  for_each(points, exec, [&](std::size_t p) {
    for (int i = 0; i < dim; ++i) {
      double adv = 0.0;
      double stretch = 0.0;
      double rotate = 0.0;
      for (int j = 0; j < dim; ++j) {
        adv += w[j * points + p] * grad_d[(i * dim + j) * points + p];
        stretch += grad_w[(i * dim + j) * points + p] * d[j * points + p];
        rotate += grad_w[(j * dim + i) * points + p] * d[j * points + p];
      }
      out[i * points + p] = adv - alpha * stretch + (1.0 - alpha) * rotate;
    }
  });
}

void convection(std::span<const double> u, std::span<const double> grad_u, std::span<double> out, int dim,
                std::size_t points, Exec exec) {
  for_each(points, exec, [&](std::size_t p) {
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += u[j * points + p] * grad_u[(i * dim + j) * points + p];
      out[i * points + p] = s;
    }
  });
}

double mean_square(std::span<const double> x, int components, std::size_t points, Exec exec) {
  const double total = reduce(points, exec, [&](std::size_t p) {
    double s = 0.0;
    for (int c = 0; c < components; ++c) s += x[c * points + p] * x[c * points + p];
    return s;
  });
  return total / static_cast<double>(points);
}

}  // namespace nematic::kernels
