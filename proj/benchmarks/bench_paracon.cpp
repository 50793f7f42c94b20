#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "paracon/engine.hpp"
#include "paracon/generators.hpp"
#include "paracon/graphs.hpp"
#include "paracon/matrices.hpp"

using namespace paracon;

namespace {

StackedVector random_state(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  return StackedVector(m, n, gen::gaussian_vector(m * n, rng));
}

void BM_Step(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 8;
  std::mt19937_64 rng(42);
  const Vec y = gen::gaussian_vector(n, rng);
  const auto maps = gen::random_projectors_containing(m, y, rng);
  const auto S = stochastic_from_graph(gen::random_strongly_connected_graph(m, 0.3, rng));
  StackedVector x = random_state(m, n, rng);
  for (auto _ : state) {
    x = step(x, S, maps);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Step)->Arg(4)->Arg(16)->Arg(64);

void BM_ApplyKron(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(42);
  const Mat S = gen::random_positive_stochastic(m, rng);
  const StackedVector x = random_state(m, 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_kron(S, x));
}
BENCHMARK(BM_ApplyKron)->Arg(4)->Arg(16)->Arg(64);

void BM_ComposeGraphs(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(42);
  const auto a = gen::random_self_arced_graph(m, 0.2, rng);
  const auto b = gen::random_self_arced_graph(m, 0.2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(compose_graphs(a, b));
}
BENCHMARK(BM_ComposeGraphs)->Arg(8)->Arg(32)->Arg(128);

void BM_SearchRjsc(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<DirectedGraph> cycle;
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<Arc> arc{{i, (i + 1) % m}};
    cycle.push_back(DirectedGraph::from_arcs(m, arc, true));
  }
  const auto schedule = GraphSchedule::periodic(cycle);
  for (auto _ : state) benchmark::DoNotOptimize(search_rjsc(schedule, m, 100));
}
BENCHMARK(BM_SearchRjsc)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
