// Serial versus OpenMP timings of the hot kernels. The second benchmark
// argument selects the execution mode: 0 = serial reference, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "spectile/density.hpp"
#include "spectile/kernels.hpp"
#include "spectile/quadrature.hpp"
#include "spectile/solver.hpp"
#include "spectile/tiling.hpp"
#include "spectile/window.hpp"

using namespace spectile;

namespace {

Exec mode(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void set_label(benchmark::State& state) { state.SetLabel(state.range(1) ? "parallel" : "serial"); }

void BM_Analysis(benchmark::State& state) {
  const QuadratureGrid grid(static_cast<std::size_t>(state.range(0)));
  const Profile p = SmoothWindow::bump({-0.3, 0.3}).profile();
  const auto samples = sample(p, grid, 0, grid.size());
  const int k = 512;
  std::vector<cplx> out(2 * k + 1);
  for (auto _ : state) {
    kernels::analysis(samples, 0, grid.twiddles(), k, out, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
}

void BM_ExpSum(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<cplx> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = std::exp(-0.001 * static_cast<double>(j));
  std::vector<double> xs(2048);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * 0.37 - 300.0;
  std::vector<cplx> out(xs.size());
  for (auto _ : state) {
    kernels::exp_sum(-0.3, 0.6 / static_cast<double>(n), w, xs, -1.0, out, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
  set_label(state);
}

void BM_ApplyR(benchmark::State& state) {
  const Geometry g;
  SolverConfig cfg;
  cfg.lattice_half_width = static_cast<int>(state.range(0));
  cfg.exec = mode(state);
  const Workspace ws(g, cfg);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  std::vector<double> a(2 * cfg.lattice_half_width + 1);
  for (auto& v : a) v = u(gen);
  const PerturbationSequence alpha(std::move(a));
  for (auto _ : state) benchmark::DoNotOptimize(apply_R(alpha, ws, cfg));
  set_label(state);
}

void BM_TranslateSum(benchmark::State& state) {
  const auto grid = std::make_shared<const QuadratureGrid>();
  const auto f = make_density(SmoothWindow::bump({-0.3, 0.3}).profile(), grid);
  const int n = 2048;
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<double> a(2 * n + 1);
  for (auto& v : a) v = u(gen);
  const PerturbedLattice lat{PerturbationSequence(std::move(a))};
  const auto xs = uniform_grid(-50, 50, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(translate_sum_direct(f, lat, xs, 1.0 / 16, mode(state)));
  set_label(state);
}

}  // namespace

BENCHMARK(BM_Analysis)->ArgsProduct({{4096, 16384}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpSum)->ArgsProduct({{2048, 8192}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyR)->ArgsProduct({{512, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TranslateSum)->ArgsProduct({{512}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
