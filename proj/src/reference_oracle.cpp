#include "nematic/reference_oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nematic/errors.hpp"

namespace nematic::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integer lattice helpers -------------------------------------------------

std::vector<int> unflatten(std::size_t p, int dim, int n) {
  std::vector<int> idx(dim);
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(p % static_cast<std::size_t>(n));
    p /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::size_t flatten(const std::vector<int>& idx, int n) {
  std::size_t p = 0;
  for (int v : idx) p = p * static_cast<std::size_t>(n) + static_cast<std::size_t>(((v % n) + n) % n);
  return p;
}

/// Signed wavenumber in (-n/2, n/2] stored at index i.
int signed_k(int i, int n) { return i <= n / 2 ? i : i - n; }

void check_small(const GridSpec& grid, int limit, const char* what) {
  const int cap = grid.dim() == 3 ? std::min(limit, 4) : limit;
  if (grid.n() > cap)
    throw ConfigError(std::string(what) + ": resolution too large for the dense oracle (n = " +
                      std::to_string(grid.n()) + ", limit " + std::to_string(cap) + ")");
}

/// Multiplier of an operator at wavenumber k, entry (out a, in b).
double multiplier_real(OperatorKind kind, int axis, const std::vector<int>& k, int n, int a, int b) {
  const int dim = static_cast<int>(k.size());
  auto kd = [&](int j) { return std::abs(k[j]) == n / 2 ? 0.0 : kTwoPi * k[j]; };
  switch (kind) {
    case OperatorKind::laplacian: {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s -= kd(j) * kd(j);
      return s;
    }
    case OperatorKind::leray: {
      bool resolved = true;
      double k2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        if (2 * std::abs(k[j]) >= n) resolved = false;
        k2 += static_cast<double>(k[j]) * k[j];
      }
      if (!resolved || k2 == 0.0) return 0.0;
      return (a == b ? 1.0 : 0.0) - static_cast<double>(k[a]) * k[b] / k2;
    }
    default:
      (void)axis;
      return 0.0;
  }
}

/// Imaginary multiplier i*m of first-order operators.
double multiplier_imag(OperatorKind kind, int axis, const std::vector<int>& k, int n, int b) {
  auto kd = [&](int j) { return std::abs(k[j]) == n / 2 ? 0.0 : kTwoPi * k[j]; };
  if (kind == OperatorKind::gradient) return kd(axis);
  if (kind == OperatorKind::divergence) return kd(b);
  return 0.0;
}

Eigen::MatrixXd build_matrix(const GridSpec& grid, OperatorKind kind, int axis) {
  const int dim = grid.dim();
  const int n = grid.n();
  const std::size_t N = grid.points();
  int in = 1, out = 1;
  if (kind == OperatorKind::divergence) in = dim;
  if (kind == OperatorKind::leray) in = out = dim;
  if (kind == OperatorKind::gradient && (axis < 0 || axis >= dim)) throw ConfigError("gradient axis out of range");

  // kernel[a][b][offset] = (1/N) sum_k m_ab(k) exp(2 pi i k . offset / n)
  std::vector<std::vector<std::vector<double>>> kernel(out, std::vector<std::vector<double>>(in, std::vector<double>(N)));
  std::vector<std::vector<int>> ks(N);
  for (std::size_t m = 0; m < N; ++m) {
    auto idx = unflatten(m, dim, n);
    for (auto& v : idx) v = signed_k(v, n);
    ks[m] = idx;
  }
  for (std::size_t off = 0; off < N; ++off) {
    const auto o = unflatten(off, dim, n);
    for (std::size_t m = 0; m < N; ++m) {
      double phase = 0.0;
      for (int j = 0; j < dim; ++j) phase += static_cast<double>(ks[m][j]) * o[j];
      phase *= kTwoPi / n;
      const double c = std::cos(phase), s = std::sin(phase);
      for (int a = 0; a < out; ++a)
        for (int b = 0; b < in; ++b) {
          const double re = multiplier_real(kind, axis, ks[m], n, a, b);
          const double im = multiplier_imag(kind, axis, ks[m], n, b);
          // (re + i im)(c + i s), real part
          kernel[a][b][off] += (re * c - im * s) / static_cast<double>(N);
        }
    }
  }

  Eigen::MatrixXd M(static_cast<Eigen::Index>(out * N), static_cast<Eigen::Index>(in * N));
  for (std::size_t p = 0; p < N; ++p) {
    const auto xp = unflatten(p, dim, n);
    for (std::size_t q = 0; q < N; ++q) {
      const auto xq = unflatten(q, dim, n);
      std::vector<int> diff(dim);
      for (int j = 0; j < dim; ++j) diff[j] = xp[j] - xq[j];
      const std::size_t off = flatten(diff, n);
      for (int a = 0; a < out; ++a)
        for (int b = 0; b < in; ++b)
          M(static_cast<Eigen::Index>(a * N + p), static_cast<Eigen::Index>(b * N + q)) = kernel[a][b][off];
    }
  }
  return M;
}

Eigen::VectorXd flat(const VectorField& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.data().data(), static_cast<Eigen::Index>(f.data().size()));
}

// Trigonometric polynomials with a dense coefficient box ------------------

/// f(x) = sum_{|k_j| <= B} c_k exp(2 pi i k.x), coefficients stored in the
/// box [-B, B]^dim with the last axis fastest.
class TrigPoly {
 public:
  TrigPoly(int dim, int bandwidth) : dim_(dim), b_(bandwidth), c_(box_size(dim, bandwidth)) {}

  int dim() const { return dim_; }
  int bandwidth() const { return b_; }
  std::size_t size() const { return c_.size(); }

  std::vector<int> wavenumber(std::size_t i) const {
    std::vector<int> k(dim_);
    const int w = 2 * b_ + 1;
    for (int a = dim_ - 1; a >= 0; --a) {
      k[a] = static_cast<int>(i % static_cast<std::size_t>(w)) - b_;
      i /= static_cast<std::size_t>(w);
    }
    return k;
  }
  long index(const std::vector<int>& k) const {
    long i = 0;
    for (int a = 0; a < dim_; ++a) {
      if (std::abs(k[a]) > b_) return -1;
      i = i * (2 * b_ + 1) + (k[a] + b_);
    }
    return i;
  }

  Complex& operator[](std::size_t i) { return c_[i]; }
  Complex operator[](std::size_t i) const { return c_[i]; }
  Complex at(const std::vector<int>& k) const {
    const long i = index(k);
    return i < 0 ? Complex{} : c_[static_cast<std::size_t>(i)];
  }

  /// Resolved part of a base-lattice sample vector, by direct DFT sums.
  static TrigPoly from_samples(std::span<const double> samples, int dim, int n) {
    TrigPoly f(dim, n / 2 - 1);
    const std::size_t N = samples.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto k = f.wavenumber(i);
      Complex s{};
      for (std::size_t p = 0; p < N; ++p) {
        const auto x = unflatten(p, dim, n);
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += static_cast<double>(k[a]) * x[a];
        phase *= -kTwoPi / n;
        s += samples[p] * Complex(std::cos(phase), std::sin(phase));
      }
      f.c_[i] = s / static_cast<double>(N);
    }
    return f;
  }

  /// Single exponential exp(sign * 2 pi i k.x).
  static TrigPoly mode(const std::vector<int>& k, int bandwidth) {
    TrigPoly f(static_cast<int>(k.size()), bandwidth);
    f.c_[static_cast<std::size_t>(f.index(k))] = 1.0;
    return f;
  }

  static TrigPoly constant(int dim, double value) {
    TrigPoly f(dim, 0);
    f.c_[0] = value;
    return f;
  }

  TrigPoly derivative(int axis) const {
    TrigPoly out(dim_, b_);
    for (std::size_t i = 0; i < size(); ++i) {
      const auto k = wavenumber(i);
      out.c_[i] = c_[i] * Complex(0.0, kTwoPi * k[axis]);
    }
    return out;
  }

  TrigPoly operator*(const TrigPoly& o) const {
    TrigPoly out(dim_, b_ + o.b_);
    for (std::size_t i = 0; i < size(); ++i) {
      if (c_[i] == Complex{}) continue;
      const auto ki = wavenumber(i);
      for (std::size_t j = 0; j < o.size(); ++j) {
        if (o.c_[j] == Complex{}) continue;
        auto kj = o.wavenumber(j);
        for (int a = 0; a < dim_; ++a) kj[a] += ki[a];
        out.c_[static_cast<std::size_t>(out.index(kj))] += c_[i] * o.c_[j];
      }
    }
    return out;
  }

  TrigPoly operator+(const TrigPoly& o) const { return combine(o, 1.0); }
  TrigPoly operator-(const TrigPoly& o) const { return combine(o, -1.0); }
  TrigPoly operator*(double s) const {
    TrigPoly out = *this;
    for (auto& z : out.c_) z *= s;
    return out;
  }
  TrigPoly operator*(Complex s) const {
    TrigPoly out = *this;
    for (auto& z : out.c_) z *= s;
    return out;
  }

  /// Integral over the unit torus.
  Complex integral() const { return at(std::vector<int>(dim_, 0)); }

  /// Integral of the product f g without forming it.
  static Complex integral_of_product(const TrigPoly& f, const TrigPoly& g) {
    Complex s{};
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.c_[i] == Complex{}) continue;
      auto k = f.wavenumber(i);
      for (auto& v : k) v = -v;
      s += f.c_[i] * g.at(k);
    }
    return s;
  }

  /// Sample of the polynomial at x (real part).
  double evaluate(const std::vector<double>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto k = wavenumber(i);
      double phase = 0.0;
      for (int a = 0; a < dim_; ++a) phase += k[a] * x[a];
      phase *= kTwoPi;
      s += c_[i].real() * std::cos(phase) - c_[i].imag() * std::sin(phase);
    }
    return s;
  }

 private:
  static std::size_t box_size(int dim, int b) {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(2 * b + 1);
    return s;
  }

  TrigPoly combine(const TrigPoly& o, double sign) const {
    TrigPoly out(dim_, std::max(b_, o.b_));
    for (std::size_t i = 0; i < size(); ++i) out.c_[static_cast<std::size_t>(out.index(wavenumber(i)))] += c_[i];
    for (std::size_t i = 0; i < o.size(); ++i)
      out.c_[static_cast<std::size_t>(out.index(o.wavenumber(i)))] += sign * o.c_[i];
    return out;
  }

  int dim_;
  int b_;
  std::vector<Complex> c_;
};

using Vec = std::vector<TrigPoly>;

Vec polys(const VectorField& f) {
  Vec out;
  for (int c = 0; c < f.components(); ++c) out.push_back(TrigPoly::from_samples(f.component(c), f.grid().dim(), f.grid().n()));
  return out;
}

/// Squared L2 norm of a vector of polynomials (Parseval on the coefficients).
double norm2(const Vec& f) {
  double s = 0.0;
  for (const auto& p : f)
    for (std::size_t i = 0; i < p.size(); ++i) s += std::norm(p[i]);
  return s;
}

TrigPoly dot(const Vec& a, const Vec& b) {
  TrigPoly s = a[0] * b[0];
  for (std::size_t c = 1; c < a.size(); ++c) s = s + a[c] * b[c];
  return s;
}

/// v = mu.grad d + alpha div(mu (x) d) - (1-alpha) div(d (x) mu), exactly.
Vec extra_velocity_exact(const Vec& mu, const Vec& d, double alpha) {
  const int dim = static_cast<int>(d.size());
  Vec v;
  for (int i = 0; i < dim; ++i) {
    TrigPoly s = mu[0] * d[0].derivative(i);
    for (int j = 1; j < dim; ++j) s = s + mu[j] * d[j].derivative(i);
    for (int j = 0; j < dim; ++j) {
      s = s + (mu[i] * d[j]).derivative(j) * alpha;
      s = s - (d[i] * mu[j]).derivative(j) * (1.0 - alpha);
    }
    v.push_back(s);
  }
  return v;
}

/// Adjoint of the transport in its first slot: int T(d, w).theta = int w.B(theta).
Vec transport_adjoint(const Vec& d, const Vec& theta, double alpha) { return extra_velocity_exact(theta, d, alpha); }

}  // namespace

std::vector<Complex> fourier_coefficients(std::span<const double> samples, const GridSpec& grid) {
  check_small(grid, 16, "fourier_coefficients");
  const int dim = grid.dim();
  const int n = grid.n();
  const std::size_t N = grid.points();
  std::vector<Complex> out(N);
  for (std::size_t m = 0; m < N; ++m) {
    const auto k = unflatten(m, dim, n);
    Complex s{};
    for (std::size_t p = 0; p < N; ++p) {
      const auto x = unflatten(p, dim, n);
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += static_cast<double>(k[a]) * x[a];
      phase *= -kTwoPi / n;
      s += samples[p] * Complex(std::cos(phase), std::sin(phase));
    }
    out[m] = s / static_cast<double>(N);
  }
  return out;
}

VectorField galerkin_product(const std::vector<const VectorField*>& factors) {
  if (factors.empty()) throw ConfigError("galerkin_product: no factors");
  const GridSpec& grid = factors[0]->grid();
  check_small(grid, 16, "galerkin_product");
  const int dim = grid.dim();
  const int n = grid.n();
  int components = 1;
  for (const auto* f : factors) components = std::max(components, f->components());

  VectorField out(grid, components);
  for (int c = 0; c < components; ++c) {
    TrigPoly prod = TrigPoly::constant(dim, 1.0);
    for (const auto* f : factors)
      prod = prod * TrigPoly::from_samples(f->component(f->components() == 1 ? 0 : c), dim, n);
    const TrigPoly box(dim, grid.bandwidth());
    std::vector<double> x(dim);
    for (std::size_t p = 0; p < out.points(); ++p) {
      const auto idx = unflatten(p, dim, n);
      for (int a = 0; a < dim; ++a) x[a] = static_cast<double>(idx[a]) / n;
      double s = 0.0;
      for (std::size_t i = 0; i < box.size(); ++i) {
        const auto k = box.wavenumber(i);
        const Complex z = prod.at(k);
        double phase = 0.0;
        for (int a = 0; a < dim; ++a) phase += k[a] * x[a];
        phase *= kTwoPi;
        s += z.real() * std::cos(phase) - z.imag() * std::sin(phase);
      }
      out(c, p) = s;
    }
  }
  return out;
}

Eigen::MatrixXd dense_operator_matrix(const GridSpec& grid, OperatorKind kind, int axis) {
  check_small(grid, 8, "dense_operator_matrix");
  return build_matrix(grid, kind, axis);
}

VectorField apply(const Eigen::MatrixXd& m, const VectorField& f, int components) {
  const Eigen::VectorXd y = m * flat(f);
  VectorField out(f.grid(), components);
  if (static_cast<std::size_t>(y.size()) != out.data().size()) throw ConfigError("oracle::apply: shape mismatch");
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = y(static_cast<Eigen::Index>(i));
  return out;
}

EnergyBreakdown quadrature_energy(const VectorField& d, const VectorField& u, const ModelParams& params) {
  const GridSpec& grid = d.grid();
  check_small(grid, 16, "quadrature_energy");
  const int dim = grid.dim();
  const int n = grid.n();
  const std::size_t N = grid.points();

  EnergyBreakdown e;
  for (int j = 0; j < dim; ++j) {
    const Eigen::MatrixXd G = build_matrix(grid, OperatorKind::gradient, j);
    for (int c = 0; c < dim; ++c) {
      const Eigen::VectorXd g =
          G * Eigen::Map<const Eigen::VectorXd>(d.component(c).data(), static_cast<Eigen::Index>(N));
      e.elastic += 0.5 * g.squaredNorm() / static_cast<double>(N);
    }
  }
  for (double x : u.data()) e.kinetic += 0.5 * params.rho * x * x / static_cast<double>(N);

  // W is a degree-4 polynomial in d: a lattice of 4n points per axis
  // integrates it without aliasing
  const Vec dp = polys(d);
  const int m = 4 * n;
  std::size_t M = 1;
  for (int a = 0; a < dim; ++a) M *= static_cast<std::size_t>(m);
  double well = 0.0;
  std::vector<double> x(dim);
  for (std::size_t p = 0; p < M; ++p) {
    const auto idx = unflatten(p, dim, m);
    for (int a = 0; a < dim; ++a) x[a] = static_cast<double>(idx[a]) / m;
    double s = 0.0;
    for (int c = 0; c < dim; ++c) {
      const double dc = dp[c].evaluate(x);
      s += dc * dc;
    }
    well += (s - 1.0) * (s - 1.0) / (4.0 * params.gamma);
  }
  e.well = well / static_cast<double>(M);
  e.total = e.elastic + e.well + e.kinetic;
  return e;
}

Residuals dense_scheme_residual(const StepState& prev, const Candidate& candidate, const ModelParams& params) {
  const GridSpec& grid = candidate.d.grid();
  check_small(grid, 8, "dense_scheme_residual");
  const int dim = grid.dim();
  const int K = grid.bandwidth();
  const double tau = params.tau;
  const double alpha = params.alpha;

  const Vec d = polys(candidate.d);
  const Vec u = polys(candidate.u);
  const Vec mu = polys(candidate.mu);
  const Vec dp = polys(prev.d);
  const Vec up = polys(prev.u);

  const Vec v = extra_velocity_exact(mu, d, alpha);
  Vec w;
  for (int i = 0; i < dim; ++i) w.push_back(u[i] + v[i]);

  // f+(d) = |d|^2 d / gamma and f-(d_prev) = -d_prev / gamma
  const TrigPoly s = dot(d, d);
  Vec f;
  for (int i = 0; i < dim; ++i) f.push_back((s * d[i]) * (1.0 / params.gamma) - dp[i] * (1.0 / params.gamma));

  // strong parts of the momentum residual; the viscous term is tested weakly
  Vec mom;
  for (int i = 0; i < dim; ++i) {
    TrigPoly conv = u[0] * u[i].derivative(0);
    for (int j = 1; j < dim; ++j) conv = conv + u[j] * u[i].derivative(j);
    mom.push_back((u[i] - up[i]) * params.rho + conv * (tau * params.rho) - v[i] * tau);
  }

  double rd2 = 0.0, rmu2 = 0.0, ru2 = 0.0;
  const TrigPoly box(dim, K);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const std::vector<int> k = box.wavenumber(i);
    std::vector<int> neg(k);
    for (auto& x : neg) x = -x;
    // test function exp(-2 pi i k.x) picks the coefficient at k
    const TrigPoly phi = TrigPoly::mode(neg, K);

    for (int c = 0; c < dim; ++c) {
      Vec theta(dim, TrigPoly(dim, 0));
      theta[c] = phi;
      // director: int (d - d_prev + eps tau mu).theta + tau int w.B(theta)
      Complex rd = d[c].at(k) - dp[c].at(k) + params.epsilon * tau * mu[c].at(k);
      const Vec B = transport_adjoint(d, theta, alpha);
      for (int j = 0; j < dim; ++j) rd += tau * TrigPoly::integral_of_product(w[j], B[j]);
      rd2 += std::norm(rd);

      // chemical potential: int mu.theta - int grad d : grad theta - int (f+ + f-).theta
      Complex rm = mu[c].at(k) - f[c].at(k);
      for (int j = 0; j < dim; ++j)
        rm -= TrigPoly::integral_of_product(d[c].derivative(j), phi.derivative(j));
      rmu2 += std::norm(rm);
    }

    // momentum against solenoidal modes b exp(-2 pi i k.x), b orthonormal in k-perp
    double k2 = 0.0;
    for (int x : k) k2 += static_cast<double>(x) * x;
    if (k2 == 0.0) continue;
    Eigen::MatrixXd kk(1, dim);
    for (int a = 0; a < dim; ++a) kk(0, a) = k[a];
    const Eigen::MatrixXd basis = Eigen::FullPivLU<Eigen::MatrixXd>(kk).kernel();
    const Eigen::MatrixXd ortho = Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() *
                                  Eigen::MatrixXd::Identity(dim, basis.cols());
    for (Eigen::Index b = 0; b < ortho.cols(); ++b) {
      Vec test;
      for (int a = 0; a < dim; ++a) test.push_back(phi * ortho(a, b));
      Complex r{};
      for (int a = 0; a < dim; ++a) r += mom[a].at(k) * ortho(a, b);
      // 2 eta tau int Du : Dw
      for (int a = 0; a < dim; ++a)
        for (int j = 0; j < dim; ++j) {
          const TrigPoly Du = (u[a].derivative(j) + u[j].derivative(a)) * 0.5;
          const TrigPoly Dw = (test[a].derivative(j) + test[j].derivative(a)) * 0.5;
          r += 2.0 * params.eta * tau * TrigPoly::integral_of_product(Du, Dw);
        }
      ru2 += std::norm(r);
    }
  }

  Residuals r;
  r.d = std::sqrt(rd2) / (1.0 + std::sqrt(norm2(d)));
  r.mu = std::sqrt(rmu2) / (1.0 + std::sqrt(norm2(mu)));
  r.u = std::sqrt(ru2) / (params.rho * (1.0 + std::sqrt(norm2(u))));
  return r;
}

}  // namespace nematic::oracle
