#include <benchmark/benchmark.h>

#include "vertexsos/intertwiner.hpp"
#include "vertexsos/q_algebra.hpp"
#include "vertexsos/rng.hpp"
#include "vertexsos/tensor.hpp"
#include "vertexsos/vertex_models.hpp"

using namespace vsos;

namespace {

SquareOperator random_op(std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed);
  SquareOperator m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(i, j) = cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return m;
}

void bm_kron(benchmark::State& state) {
  auto a = random_op(std::size_t(state.range(0)), 1);
  auto b = random_op(std::size_t(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}
BENCHMARK(bm_kron)->Arg(4)->Arg(8)->Arg(16);

void bm_partition_bruteforce(benchmark::State& state) {
  LatticePatch patch;
  patch.m = std::size_t(state.range(0));
  patch.n = 2;
  VertexWeights w;
  w.six = SixVertexWeights{};
  for (auto _ : state)
    benchmark::DoNotOptimize(partition_function_bruteforce(patch, w));
}
BENCHMARK(bm_partition_bruteforce)->Arg(2)->Arg(3);

void bm_partition_transfer(benchmark::State& state) {
  LatticePatch patch;
  patch.m = std::size_t(state.range(0));
  patch.n = 2;
  VertexWeights w;
  w.six = SixVertexWeights{};
  for (auto _ : state) benchmark::DoNotOptimize(partition_function_transfer(patch, w));
}
BENCHMARK(bm_partition_transfer)->Arg(2)->Arg(3)->Arg(5);

void bm_q_exponential(benchmark::State& state) {
  auto x = random_op(9, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(q_exponential(x, cx(0.7, 0), int(state.range(0))));
}
BENCHMARK(bm_q_exponential)->Arg(8)->Arg(24);

void bm_intertwiner_solve(benchmark::State& state) {
  SquareOperator r(4);
  r(0, 0) = r(3, 3) = 0.98;
  r(1, 1) = r(2, 2) = 0.29;
  r(1, 2) = r(2, 1) = 0.64;
  auto gauge = IntertwinerGauge::default_for(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_intertwiner_numeric(r, cx(0.3, 0), cx(0.9, 0), gauge));
}
BENCHMARK(bm_intertwiner_solve);

}  // namespace

BENCHMARK_MAIN();
