#include "nematic/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"

namespace nematic {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Spectral::Plans {
  fftw_plan forward[2] = {nullptr, nullptr};
  fftw_plan backward[2] = {nullptr, nullptr};
};

Spectral::Spectral(const GridSpec& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  build_table(Level::base, base_);
  build_table(Level::fine, fine_);

  std::lock_guard lock(planner_mutex());
  for (int l = 0; l < 2; ++l) {
    const int s = l == 0 ? grid_.n() : grid_.fine_n();
    int dims[3] = {s, s, s};
    const std::size_t points = l == 0 ? grid_.points() : grid_.fine_points();
    const std::size_t modes = l == 0 ? base_.weight.size() : fine_.weight.size();
    double* real = fftw_alloc_real(points);
    fftw_complex* spec = fftw_alloc_complex(modes);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->forward[l] = fftw_plan_dft_r2c(grid_.dim(), dims, real, spec, flags);
    plans_->backward[l] = fftw_plan_dft_c2r(grid_.dim(), dims, spec, real, flags);
    fftw_free(real);
    fftw_free(spec);
  }
}

Spectral::~Spectral() {
  std::lock_guard lock(planner_mutex());
  for (int l = 0; l < 2; ++l) {
    fftw_destroy_plan(plans_->forward[l]);
    fftw_destroy_plan(plans_->backward[l]);
  }
}

std::shared_ptr<const Spectral> Spectral::for_grid(const GridSpec& grid) {
  static std::mutex m;
  static std::vector<std::shared_ptr<const Spectral>> cache;
  std::lock_guard lock(m);
  for (const auto& s : cache)
    if (s->grid() == grid) return s;
  cache.push_back(std::make_shared<const Spectral>(grid));
  return cache.back();
}

void Spectral::build_table(Level level, Table& t) const {
  const int dim = grid_.dim();
  const int s = level == Level::base ? grid_.n() : grid_.fine_n();
  const int half = s / 2 + 1;
  std::size_t modes = static_cast<std::size_t>(half);
  for (int a = 0; a < dim - 1; ++a) modes *= static_cast<std::size_t>(s);
  t.k.resize(modes * dim);
  t.dk.resize(modes * dim);
  t.weight.resize(modes);
  if (level == Level::base) t.fine_index.resize(modes);

  const int fine = grid_.fine_n();
  const int fine_half = fine / 2 + 1;
  const bool even = s % 2 == 0;
  for (std::size_t m = 0; m < modes; ++m) {
    int idx[3];
    std::size_t r = m;
    idx[dim - 1] = static_cast<int>(r % half);
    r /= half;
    for (int a = dim - 2; a >= 0; --a) {
      idx[a] = static_cast<int>(r % s);
      r /= s;
    }
    bool resolved = true;
    for (int a = 0; a < dim; ++a) {
      const int k = (a == dim - 1 || idx[a] <= s / 2) ? idx[a] : idx[a] - s;
      t.k[m * dim + a] = k;
      const bool nyquist = even && std::abs(k) == s / 2;
      t.dk[m * dim + a] = nyquist ? 0.0 : 2.0 * std::numbers::pi * k;
      resolved = resolved && std::abs(k) < grid_.n() / 2;
    }
    const int last = idx[dim - 1];
    t.weight[m] = (last == 0 || (even && last == s / 2)) ? 1.0 : 2.0;
    if (level == Level::base) {
      if (!resolved) {
        t.fine_index[m] = -1;
        continue;
      }
      long fi = 0;
      for (int a = 0; a < dim - 1; ++a) {
        const int k = t.k[m * dim + a];
        fi = fi * fine + (k >= 0 ? k : fine + k);
      }
      fi = fi * fine_half + t.k[m * dim + dim - 1];
      t.fine_index[m] = fi;
    }
  }
}

void Spectral::check_level(const SpectralField& f, Level level, const char* op) const {
  if (!(f.grid() == grid_)) throw ConfigError(std::string(op) + ": field belongs to a different grid");
  if (f.level() != level) throw ConfigError(std::string(op) + ": field is on the wrong lattice");
}

SpectralField Spectral::forward(const VectorField& f) const {
  if (!(f.grid() == grid_)) throw ConfigError("forward: field belongs to a different grid");
  if (!f.all_finite()) throw NonFiniteError("non-finite sample in forward transform");
  const int l = f.level() == Level::base ? 0 : 1;
  SpectralField out(grid_, f.components(), f.level());
  const double scale = 1.0 / static_cast<double>(f.points());
  kernels::for_each(static_cast<std::size_t>(f.components()), kernels::default_exec(), [&](std::size_t c) {
    auto in = f.component(static_cast<int>(c));
    auto dst = out.component(static_cast<int>(c));
    fftw_execute_dft_r2c(plans_->forward[l], const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(dst.data()));
    for (auto& z : dst) z *= scale;
  });
  return out;
}

VectorField Spectral::inverse(const SpectralField& f) const {
  if (!(f.grid() == grid_)) throw ConfigError("inverse: field belongs to a different grid");
  const int l = f.level() == Level::base ? 0 : 1;
  VectorField out(grid_, f.components(), f.level());
  kernels::for_each(static_cast<std::size_t>(f.components()), kernels::default_exec(), [&](std::size_t c) {
    auto src = f.component(static_cast<int>(c));
    std::vector<Complex> scratch(src.begin(), src.end());
    auto dst = out.component(static_cast<int>(c));
    fftw_execute_dft_c2r(plans_->backward[l], reinterpret_cast<fftw_complex*>(scratch.data()), dst.data());
  });
  return out;
}

SpectralField Spectral::lift(const SpectralField& base) const {
  check_level(base, Level::base, "lift");
  SpectralField out(grid_, base.components(), Level::fine);
  const std::size_t modes = base.modes();
  for (int c = 0; c < base.components(); ++c) {
    auto src = base.component(c);
    auto dst = out.component(c);
    for (std::size_t m = 0; m < modes; ++m)
      if (base_.fine_index[m] >= 0) dst[static_cast<std::size_t>(base_.fine_index[m])] = src[m];
  }
  return out;
}

SpectralField Spectral::truncate(const SpectralField& fine) const {
  check_level(fine, Level::fine, "truncate");
  SpectralField out(grid_, fine.components(), Level::base);
  const std::size_t modes = out.modes();
  for (int c = 0; c < fine.components(); ++c) {
    auto src = fine.component(c);
    auto dst = out.component(c);
    for (std::size_t m = 0; m < modes; ++m)
      if (base_.fine_index[m] >= 0) dst[m] = src[static_cast<std::size_t>(base_.fine_index[m])];
  }
  return out;
}

SpectralField Spectral::resolve(const SpectralField& base) const {
  check_level(base, Level::base, "resolve");
  SpectralField out = base;
  for (int c = 0; c < out.components(); ++c) {
    auto dst = out.component(c);
    for (std::size_t m = 0; m < dst.size(); ++m)
      if (base_.fine_index[m] < 0) dst[m] = Complex{};
  }
  return out;
}

SpectralField Spectral::gradient(const SpectralField& f) const {
  const int dim = grid_.dim();
  const Table& t = table(f.level());
  SpectralField out(grid_, f.components() * dim, f.level());
  const std::size_t modes = f.modes();
  kernels::for_each(modes, kernels::default_exec(), [&](std::size_t m) {
    for (int c = 0; c < f.components(); ++c) {
      const Complex v = f(c, m);
      for (int j = 0; j < dim; ++j) out(c * dim + j, m) = Complex(0.0, t.dk[m * dim + j]) * v;
    }
  });
  return out;
}

SpectralField Spectral::divergence(const SpectralField& f) const {
  const int dim = grid_.dim();
  if (f.components() % dim != 0) throw ConfigError("divergence: component count must be a multiple of dim");
  const Table& t = table(f.level());
  const int rows = f.components() / dim;
  SpectralField out(grid_, rows, f.level());
  const std::size_t modes = f.modes();
  kernels::for_each(modes, kernels::default_exec(), [&](std::size_t m) {
    for (int i = 0; i < rows; ++i) {
      Complex s{};
      for (int j = 0; j < dim; ++j) s += Complex(0.0, t.dk[m * dim + j]) * f(i * dim + j, m);
      out(i, m) = s;
    }
  });
  return out;
}

SpectralField Spectral::laplacian(const SpectralField& f) const {
  const int dim = grid_.dim();
  const Table& t = table(f.level());
  SpectralField out(grid_, f.components(), f.level());
  const std::size_t modes = f.modes();
  kernels::for_each(modes, kernels::default_exec(), [&](std::size_t m) {
    double k2 = 0.0;
    for (int j = 0; j < dim; ++j) k2 += t.dk[m * dim + j] * t.dk[m * dim + j];
    for (int c = 0; c < f.components(); ++c) out(c, m) = -k2 * f(c, m);
  });
  return out;
}

SpectralField Spectral::leray(const SpectralField& f) const {
  check_level(f, Level::base, "leray");
  const int dim = grid_.dim();
  if (f.components() != dim) throw ConfigError("leray: expects a vector field with dim components");
  SpectralField out(grid_, dim, Level::base);
  const std::size_t modes = f.modes();
  kernels::for_each(modes, kernels::default_exec(), [&](std::size_t m) {
    if (base_.fine_index[m] < 0) return;
    double k2 = 0.0;
    for (int j = 0; j < dim; ++j) k2 += base_.dk[m * dim + j] * base_.dk[m * dim + j];
    if (k2 == 0.0) return;
    Complex kf{};
    for (int j = 0; j < dim; ++j) kf += base_.dk[m * dim + j] * f(j, m);
    for (int i = 0; i < dim; ++i) out(i, m) = f(i, m) - base_.dk[m * dim + i] * kf / k2;
  });
  return out;
}

double Spectral::inner(const SpectralField& a, const SpectralField& b) const {
  if (a.level() != b.level() || a.components() != b.components())
    throw ConfigError("inner: incompatible spectral fields");
  const Table& t = table(a.level());
  const std::size_t modes = a.modes();
  const int comps = a.components();
  return kernels::reduce(modes, kernels::default_exec(), [&](std::size_t m) {
    double s = 0.0;
    for (int c = 0; c < comps; ++c) {
      const Complex x = a(c, m);
      const Complex y = b(c, m);
      s += x.real() * y.real() + x.imag() * y.imag();
    }
    return t.weight[m] * s;
  });
}

double Spectral::norm(const SpectralField& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

double Spectral::max_divergence(const SpectralField& f) const {
  const int dim = grid_.dim();
  if (f.components() != dim) throw ConfigError("max_divergence: expects a vector field");
  const Table& t = table(f.level());
  double worst = 0.0;
  for (std::size_t m = 0; m < f.modes(); ++m) {
    Complex s{};
    for (int j = 0; j < dim; ++j) s += t.dk[m * dim + j] * f(j, m);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

// ---------------------------------------------------------------------------

SpectralField forward_transform(const VectorField& f) { return Spectral::for_grid(f.grid())->forward(f); }

VectorField inverse_transform(const SpectralField& f) { return Spectral::for_grid(f.grid())->inverse(f); }

VectorField gradient(const VectorField& f) {
  const auto ops = Spectral::for_grid(f.grid());
  return ops->inverse(ops->gradient(ops->forward(f)));
}

VectorField divergence(const VectorField& m) {
  const auto ops = Spectral::for_grid(m.grid());
  return ops->inverse(ops->divergence(ops->forward(m)));
}

VectorField laplacian(const VectorField& f) {
  const auto ops = Spectral::for_grid(f.grid());
  return ops->inverse(ops->laplacian(ops->forward(f)));
}

VectorField leray_project(const VectorField& w) {
  if (w.level() != Level::base) throw ConfigError("leray_project: expects a base-lattice field");
  const auto ops = Spectral::for_grid(w.grid());
  return ops->inverse(ops->leray(ops->forward(w)));
}

GradientSplit sym_skew_gradient(const VectorField& u) {
  const int dim = u.grid().dim();
  if (u.components() != dim) throw ConfigError("sym_skew_gradient: expects a vector field");
  const VectorField g = gradient(u);
  GradientSplit out{VectorField(u.grid(), dim * dim, u.level()), VectorField(u.grid(), dim * dim, u.level())};
  const std::size_t points = u.points();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (std::size_t p = 0; p < points; ++p) {
        const double a = g(i * dim + j, p);
        const double b = g(j * dim + i, p);
        out.sym(i * dim + j, p) = 0.5 * (a + b);
        out.skew(i * dim + j, p) = 0.5 * (a - b);
      }
  return out;
}

VectorField project_resolved(const VectorField& f) {
  const auto ops = Spectral::for_grid(f.grid());
  return ops->inverse(ops->resolve(ops->forward(f)));
}

VectorField to_fine(const VectorField& base) {
  if (base.level() != Level::base) throw ConfigError("to_fine: expects a base-lattice field");
  const auto ops = Spectral::for_grid(base.grid());
  return ops->inverse(ops->lift(ops->forward(base)));
}

VectorField multiply_dealiased(const std::vector<const VectorField*>& factors, ProductExactness exactness) {
  if (factors.size() < 2 || factors.size() > 5) throw ConfigError("multiply_dealiased: needs 2 to 5 factors");
  const GridSpec& grid = factors.front()->grid();
  int comps = 1;
  for (const auto* f : factors) {
    if (!(f->grid() == grid) || f->level() != Level::base)
      throw ConfigError("multiply_dealiased: factors must share one base grid");
    if (f->components() != 1) {
      if (comps != 1 && comps != f->components())
        throw ConfigError("multiply_dealiased: incompatible component counts");
      comps = f->components();
    }
  }
  const auto degree = static_cast<int>(factors.size());
  if (exactness == ProductExactness::exact && !grid.exact_for_degree(degree))
    throw ConfigError("padding_factor " + to_string(grid.padding()) + " is insufficient for an exact product of " +
                      std::to_string(degree) + " factors");

  const auto ops = Spectral::for_grid(grid);
  VectorField prod(grid, comps, Level::fine);
  std::fill(prod.data().begin(), prod.data().end(), 1.0);
  const std::size_t points = prod.points();
  for (const auto* f : factors) {
    const VectorField fine = ops->inverse(ops->lift(ops->forward(*f)));
    for (int c = 0; c < comps; ++c) {
      auto src = fine.component(fine.components() == 1 ? 0 : c);
      auto dst = prod.component(c);
      kernels::for_each(points, kernels::default_exec(), [&](std::size_t p) { dst[p] *= src[p]; });
    }
  }
  return ops->inverse(ops->truncate(ops->forward(prod)));
}

double quadrature_mean_square(const VectorField& f) {
  return kernels::mean_square(f.data(), f.components(), f.points());
}

}  // namespace nematic
