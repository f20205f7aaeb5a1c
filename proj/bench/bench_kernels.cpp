// Serial reference against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include "nodetrix/generators.hpp"
#include "nodetrix/kernels.hpp"
#include "nodetrix/metrics.hpp"

using namespace nodetrix;

namespace {

struct Fixture {
  kernels::LinLogSystem sys;
  std::vector<Vec2> pos;
};

Fixture make_linlog(std::size_t n) {
  Rng rng(7);
  std::vector<kernels::WeightedEdge> edges;
  for (std::uint32_t u = 0; u < n; ++u)
    for (int k = 0; k < 3; ++k) {
      const auto v = static_cast<std::uint32_t>(rng.below(n));
      if (v != u) edges.push_back({u, v, 1.0});
    }
  std::vector<Vec2> pos(n);
  for (auto& p : pos) p = {rng.uniform(0, 10), rng.uniform(0, 10)};
  return {kernels::LinLogSystem(n, std::move(edges)), std::move(pos)};
}

void BM_linlog_serial(benchmark::State& state) {
  const Fixture f = make_linlog(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::linlog(f.sys, f.pos, 1.0, 1.0));
}

void BM_linlog_parallel(benchmark::State& state) {
  const Fixture f = make_linlog(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::linlog(f.sys, f.pos, 1.0, 1.0));
}

kernels::Adjacency coauthors() {
  CoauthorshipParams p;
  return simple_adjacency(generate_coauthorship(p));
}

void BM_triangles_serial(benchmark::State& state) {
  const auto adj = coauthors();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::triangles_per_node(adj));
}

void BM_triangles_parallel(benchmark::State& state) {
  const auto adj = coauthors();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::triangles_per_node(adj));
}

}  // namespace

BENCHMARK(BM_linlog_serial)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_linlog_parallel)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_triangles_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_triangles_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
