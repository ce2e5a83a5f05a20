#include <benchmark/benchmark.h>

#include "dragen/prediction.hpp"

namespace {

constexpr const char* kTree = "data Tree = LeafA | LeafB | LeafC | Node Tree Tree\n";
constexpr const char* kWide =
    "data A = A0 | A1 A B | A2 C C\n"
    "data B = B0 | B1 B A | B2 A\n"
    "data C = C0 | C1 C D | C2 A C\n"
    "data D = D0 Int | D1 D D A\n";

void BM_PredictTree(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe(kTree, "Tree");
  const dragen::ProbMap p = dragen::uniform_probmap(u);
  const auto size = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dragen::predict_constructors(u, p, size));
}
BENCHMARK(BM_PredictTree)->Arg(10)->Arg(100)->Arg(1000);

void BM_PredictFourTypes(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe(kWide, "A");
  const dragen::ProbMap p = dragen::uniform_probmap(u);
  for (auto _ : state) benchmark::DoNotOptimize(dragen::predict_constructors(u, p, 10));
}
BENCHMARK(BM_PredictFourTypes);

void BM_Extinction(benchmark::State& state) {
  const dragen::Universe u = dragen::parse_universe("data T = A | B T T | C T T", "T");
  const dragen::ProbMap p = dragen::uniform_probmap(u);
  for (auto _ : state) benchmark::DoNotOptimize(dragen::extinction_probability(u, p));
}
BENCHMARK(BM_Extinction);

}  // namespace
