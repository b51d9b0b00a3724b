// Serial vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <vector>

#include "onreg/kernels.hpp"
#include "onreg/rng.hpp"

using namespace onreg;
using namespace onreg::kernels;

namespace {

struct Data {
  std::vector<double> xs, ys;
  std::size_t d;
  AnchorView view() const { return {xs, ys, d}; }
};

Data make_data(std::size_t n, std::size_t d) {
  Rng rng = make_rng(1, n * 31 + d);
  Data data{{}, {}, d};
  for (std::size_t i = 0; i < n * d; ++i) data.xs.push_back(uniform(rng, -1, 1));
  for (std::size_t i = 0; i < n; ++i) data.ys.push_back(uniform01(rng));
  return data;
}

template <bool Parallel>
void BM_EnvelopeBounds(benchmark::State& state) {
  const Data data = make_data(static_cast<std::size_t>(state.range(0)), 3);
  const std::vector<double> x = {0.1, -0.2, 0.3};
  for (auto _ : state) {
    const Bounds b = Parallel ? omp::envelope_bounds(data.view(), 1.0, x)
                              : serial::envelope_bounds(data.view(), 1.0, x);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WidthIntegral(benchmark::State& state) {
  const Data data = make_data(32, 2);
  const GridSpec grid{2, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    const double v = Parallel ? omp::width_power_integral(data.view(), 1.0, 1.0, grid)
                              : serial::width_power_integral(data.view(), 1.0, 1.0, grid);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.cell_count()));
}

template <bool Parallel>
void BM_SupDistanceMatrix(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Data data = make_data(rows, 8);
  const Loss loss = Loss::power(2.0);
  for (auto _ : state) {
    auto m = Parallel ? omp::sup_distance_matrix(data.xs, rows, 8, loss)
                      : serial::sup_distance_matrix(data.xs, rows, 8, loss);
    benchmark::DoNotOptimize(m.data());
  }
}

}  // namespace

BENCHMARK(BM_EnvelopeBounds<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_EnvelopeBounds<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_WidthIntegral<false>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_WidthIntegral<true>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_SupDistanceMatrix<false>)->Arg(64)->Arg(512);
BENCHMARK(BM_SupDistanceMatrix<true>)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
