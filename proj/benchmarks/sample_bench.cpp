#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "dragen/sampler.hpp"

namespace {

constexpr const char* kTree = "data Tree = LeafA | LeafB | LeafC | Node Tree Tree";

void BM_DrawValue(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe(kTree, "Tree");
  const dragen::Sampler sampler(u, dragen::uniform_spec(u, 10, dragen::Strategy::Dragen));
  dragen::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_DrawValue);

void BM_DrawCounts(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe(kTree, "Tree");
  const auto strategy = static_cast<dragen::Strategy>(state.range(0));
  const dragen::Sampler sampler(u, dragen::uniform_spec(u, 10, strategy), 1'000'000);
  std::vector<std::uint64_t> counts(u.constructors().size());
  dragen::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw_counts(rng, counts));
}
BENCHMARK(BM_DrawCounts)->Arg(0)->Arg(1);

void BM_EmpiricalStats(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe(kTree, "Tree");
  const dragen::GenSpec spec = dragen::uniform_spec(u, 10, dragen::Strategy::Dragen);
  for (auto _ : state) benchmark::DoNotOptimize(dragen::empirical_stats(u, spec, 10'000, 1));
}
BENCHMARK(BM_EmpiricalStats)->Unit(benchmark::kMillisecond);

}  // namespace
