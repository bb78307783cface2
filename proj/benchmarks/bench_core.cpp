#include <benchmark/benchmark.h>

#include <complex>

#include "conjbound/bounds_lab.hpp"
#include "conjbound/circle_measures.hpp"
#include "conjbound/fractional.hpp"
#include "conjbound/harmonic_eval.hpp"
#include "conjbound/kernels.hpp"

using namespace conjbound;

static void BM_SchwarzKernel(benchmark::State& state) {
  const KernelOrder order(static_cast<double>(state.range(0)) / 2.0);
  std::complex<double> z(0.3, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(schwarz_kernel(z, order));
}
BENCHMARK(BM_SchwarzKernel)->Arg(0)->Arg(1)->Arg(3);

static void BM_FracIntegral(benchmark::State& state) {
  const RadialFunction h = RadialFunction::real([](double x) { return x * x * x; });
  for (auto _ : state) benchmark::DoNotOptimize(frac_integral(h, 0.75, 0.8));
}
BENCHMARK(BM_FracIntegral);

static void BM_KernelIdentity(benchmark::State& state) {
  const RadialFunction h = RadialFunction::real(
      [](double x) { return std::sqrt(x) * poisson_kernel(std::polar(x, 1.0), KernelOrder(0.0)); });
  for (auto _ : state) benchmark::DoNotOptimize(frac_derivative(h, FracOrder(0.5), 0.9));
}
BENCHMARK(BM_KernelIdentity);

static void BM_NuExact(benchmark::State& state) {
  const BoundarySet e = BoundarySet::from_intervals({{0.0, 0.4}, {2.0, 2.5}});
  const DiskPoint w(1.0 - 1e-4, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(nu_exact(w, 2.0, e));
}
BENCHMARK(BM_NuExact);

static void BM_CantorEval(benchmark::State& state) {
  HarmonicSpec spec{CircleMeasure({}, {}, CantorGenerator{0.0, kTwoPi, 14, 1.0}), KernelOrder(0.0)};
  const std::complex<double> z = std::polar(1.0 - 1e-4, 0.001);
  for (auto _ : state) benchmark::DoNotOptimize(eval_F(spec, z));
}
BENCHMARK(BM_CantorEval);

static void BM_Thm1Sweep(benchmark::State& state) {
  const BoundarySet e = BoundarySet::point(0.0);
  const SamplingGrid grid = build_grid(e, static_cast<int>(state.range(0)), 64);
  auto u = [](std::complex<double> z) { return poisson_kernel(z, KernelOrder(0.0)); };
  auto v = [](std::complex<double> z) { return conjugate_kernel(z, KernelOrder(0.0)); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_thm1(u, v, GrowthProfile(2.0, 1.0), e, grid));
  }
}
BENCHMARK(BM_Thm1Sweep)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
