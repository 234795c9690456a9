#include <benchmark/benchmark.h>

#include "mdst/center.hpp"
#include "mdst/generators.hpp"

using namespace mdst;

namespace {

WeightedGraph sample(int n) { return random_connected(n, std::min(n * (n - 1) / 2, 3 * n), 10, 42 + static_cast<std::uint64_t>(n)); }

void BM_AllPairs(benchmark::State& st) {
  const auto g = sample(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(all_pairs_distances(g));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_AllPairs)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_AbsoluteCenter(benchmark::State& st) {
  const auto g = sample(static_cast<int>(st.range(0)));
  const auto dt = all_pairs_distances(g);
  const bool skip = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(absolute_center(g, dt, CenterOptions{skip, {}}));
  st.SetComplexityN(st.range(0));
  st.SetLabel(skip ? "skip" : "no-skip");
}
BENCHMARK(BM_AbsoluteCenter)->ArgsProduct({{8, 16, 32, 64, 128, 256}, {0, 1}});

void BM_SolveMdst(benchmark::State& st) {
  const auto g = sample(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_mdst(g));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SolveMdst)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_BruteForceMdst(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = random_connected(n, std::min(n * (n - 1) / 2, kBruteForceMaxM), 10, 7);
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_mdst(g));
}
BENCHMARK(BM_BruteForceMdst)->DenseRange(4, 9);

}  // namespace

BENCHMARK_MAIN();
