// Serial reference loops against their OpenMP counterparts, plus whole steps.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nematic/initial_condition.hpp"
#include "nematic/kernels.hpp"
#include "nematic/stepper.hpp"

using namespace nematic;
using kernels::Exec;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void set_label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

void BM_TransportIntegrand(benchmark::State& state) {
  const int dim = 3;
  const auto points = static_cast<std::size_t>(state.range(0));
  const auto d = random_vector(dim * points, 1), gd = random_vector(dim * dim * points, 2);
  const auto w = random_vector(dim * points, 3), gw = random_vector(dim * dim * points, 4);
  std::vector<double> out(dim * points);
  for (auto _ : state) {
    kernels::transport_integrand(d, gd, w, gw, out, dim, points, 0.3, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points));
}

void BM_CubicWellForce(benchmark::State& state) {
  const int dim = 3;
  const auto points = static_cast<std::size_t>(state.range(0));
  const auto d = random_vector(dim * points, 5);
  std::vector<double> out(dim * points);
  for (auto _ : state) {
    kernels::cubic_well_force(d, out, dim, points, 0.1, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points));
}

void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 6), b = random_vector(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(a, b, exec_of(state)));
  set_label(state);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_ImplicitStep(benchmark::State& state) {
  const GridSpec grid(2, static_cast<int>(state.range(0)), Dealias::exact);
  const Exec saved = kernels::default_exec();
  kernels::set_default_exec(exec_of(state));
  const StepState s = initial_condition(IcKind::uniform_perturbed, grid, 7, 0.2);
  ModelParams p;
  p.alpha = 0.3;
  PicardConfig cfg;
  cfg.tol = 1e-11;
  for (auto _ : state) benchmark::DoNotOptimize(implicit_step(s, p, cfg).residual);
  kernels::set_default_exec(saved);
  set_label(state);
}

}  // namespace

BENCHMARK(BM_TransportIntegrand)->ArgsProduct({{1 << 12, 1 << 16, 1 << 18}, {0, 1}});
BENCHMARK(BM_CubicWellForce)->ArgsProduct({{1 << 12, 1 << 16, 1 << 18}, {0, 1}});
BENCHMARK(BM_Dot)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_ImplicitStep)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
