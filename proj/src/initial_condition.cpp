#include "nematic/initial_condition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nematic/errors.hpp"
#include "nematic/spectral.hpp"

namespace nematic {

std::string_view to_string(IcKind kind) {
  switch (kind) {
    case IcKind::uniform_perturbed: return "uniform_perturbed";
    case IcKind::random_smooth: return "random_smooth";
    case IcKind::defect_pair: return "defect_pair";
  }
  return "?";
}

IcKind parse_ic_kind(std::string_view text) {
  if (text == "uniform_perturbed") return IcKind::uniform_perturbed;
  if (text == "random_smooth") return IcKind::random_smooth;
  if (text == "defect_pair") return IcKind::defect_pair;
  throw ConfigError("ic.kind must be uniform_perturbed, random_smooth or defect_pair (got '" + std::string(text) + "')");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Sum of cos/sin modes with |k_j| <= kmax and Gaussian amplitudes decaying
/// like 1/(1+|k|^2), sampled on the base lattice.
VectorField random_low_mode(const GridSpec& grid, int components, int kmax, std::mt19937_64& rng) {
  const int dim = grid.dim();
  kmax = std::min(kmax, grid.bandwidth());
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorField f(grid, components);
  const int w = 2 * kmax + 1;
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= w;
  std::vector<int> k(dim);
  for (int c = 0; c < components; ++c) {
    for (int m = 0; m < total; ++m) {
      int r = m;
      double k2 = 0.0;
      for (int a = dim - 1; a >= 0; --a) {
        k[a] = r % w - kmax;
        r /= w;
        k2 += static_cast<double>(k[a]) * k[a];
      }
      if (k2 == 0.0) continue;
      const double a_cos = normal(rng) / (1.0 + k2);
      const double a_sin = normal(rng) / (1.0 + k2);
      for (std::size_t p = 0; p < f.points(); ++p) {
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += k[a] * f.coordinate(p, a);
        phase *= kTwoPi;
        f(c, p) += a_cos * std::cos(phase) + a_sin * std::sin(phase);
      }
    }
  }
  return f;
}

double max_length(const VectorField& f) {
  double m = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) s += f(c, p) * f(c, p);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

void scale(VectorField& f, double s) {
  for (double& x : f.data()) x *= s;
}

VectorField random_velocity(const GridSpec& grid, double amplitude, std::mt19937_64& rng) {
  VectorField u = leray_project(random_low_mode(grid, grid.dim(), 2, rng));
  const double m = max_length(u);
  if (amplitude == 0.0 || m == 0.0) return VectorField(grid, grid.dim());
  scale(u, amplitude / m);
  return u;
}

VectorField defect_pair_director(const GridSpec& grid) {
  const double xi = 2.0 / grid.n();
  const double centers[2][2] = {{0.3, 0.5}, {0.7, 0.5}};
  const double charge[2] = {1.0, -1.0};
  VectorField d(grid, 2);
  for (std::size_t p = 0; p < d.points(); ++p) {
    const double x = d.coordinate(p, 0), y = d.coordinate(p, 1);
    double theta = 0.0;
    double r_min = 1.0;
    for (int s = 0; s < 2; ++s)
      for (int ix = -2; ix <= 2; ++ix)
        for (int iy = -2; iy <= 2; ++iy) {
          const double dx = x - centers[s][0] - ix, dy = y - centers[s][1] - iy;
          theta += charge[s] * std::atan2(dy, dx);
          r_min = std::min(r_min, std::hypot(dx, dy));
        }
    const double len = std::tanh(r_min / xi);
    d(0, p) = len * std::cos(theta);
    d(1, p) = len * std::sin(theta);
  }
  return project_resolved(d);
}

}  // namespace

StepState initial_condition(IcKind kind, const GridSpec& grid, std::uint64_t seed, double amplitude) {
  if (!(amplitude >= 0.0)) throw ConfigError("ic.amplitude >= 0");
  if (kind == IcKind::defect_pair && grid.dim() != 2) throw ConfigError("ic.kind = defect_pair requires dim = 2");
  std::mt19937_64 rng(seed);
  const int dim = grid.dim();
  StepState s{VectorField(grid, dim), VectorField(grid, dim), 0.0};

  switch (kind) {
    case IcKind::uniform_perturbed: {
      VectorField r = random_low_mode(grid, dim, 2, rng);
      const double m = max_length(r);
      const double a = m > 0.0 ? amplitude / m : 0.0;
      for (std::size_t p = 0; p < s.d.points(); ++p)
        for (int c = 0; c < dim; ++c) s.d(c, p) = (c == 0 ? 1.0 : 0.0) + a * r(c, p);
      break;
    }
    case IcKind::random_smooth: {
      s.d = random_low_mode(grid, dim, 3, rng);
      double ms = 0.0;
      for (double x : s.d.data()) ms += x * x;
      ms /= static_cast<double>(s.d.points());
      if (ms > 0.0) scale(s.d, 1.0 / std::sqrt(ms));
      break;
    }
    case IcKind::defect_pair:
      s.d = defect_pair_director(grid);
      break;
  }
  s.u = random_velocity(grid, amplitude, rng);
  return s;
}

}  // namespace nematic
