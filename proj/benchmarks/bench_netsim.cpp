#include <benchmark/benchmark.h>

#include "mdst/checker.hpp"
#include "mdst/generators.hpp"
#include "mdst/netsim.hpp"

using namespace mdst;

namespace {

// One arbitrary-init composed run per iteration. Counters give the measured
// stabilization time and message cost so they can be plotted against n.
void BM_Stabilize(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto sch = static_cast<SchedulerKind>(st.range(1));
  const auto g = random_connected(n, std::min(n * (n - 1) / 2, 3 * n / 2), 10, 9 + static_cast<std::uint64_t>(n));
  const int hd = diameter_radius(g, all_pairs_distances(g)).hop_diameter;
  double theta = 0.0, psi = 0.0, messages = 0.0, bits = 0.0;
  std::uint64_t seed = 1;
  for (auto _ : st) {
    SimConfig c;
    c.seed = seed++;
    c.arbitrary_init = true;
    c.init_seed = seed * 13;
    c.scheduler = sch;
    c.horizon = 50 * (n + hd * hd);
    Simulator sim(g, c);
    sim.run();
    const auto ev = evaluate_run(sim);
    psi += ev.find("psi")->first_suffix_time.value_or(c.horizon);
    theta += ev.find("theta")->first_suffix_time.value_or(c.horizon);
    messages += static_cast<double>(sim.metrics().messages_sent);
    bits = std::max(bits, static_cast<double>(sim.metrics().peak_state_bits));
  }
  const double it = static_cast<double>(st.iterations());
  st.counters["psi_time"] = psi / it;
  st.counters["theta_time"] = theta / it;
  st.counters["messages"] = messages / it;
  st.counters["peak_state_bits"] = bits;
  st.counters["hop_diameter"] = hd;
  st.SetLabel(to_string(sch));
}
BENCHMARK(BM_Stabilize)
    ->ArgsProduct({{4, 8, 12, 16, 24, 32}, {static_cast<long>(SchedulerKind::Fair), static_cast<long>(SchedulerKind::Adversarial)}})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(5);

// Raw simulator throughput in time units per second on a settled network.
void BM_TimeUnits(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = random_connected(n, 2 * n, 10, 3);
  SimConfig c;
  c.horizon = 1 << 30;
  Simulator sim(g, c);
  for (int t = 0; t < 200; ++t) sim.step();
  for (auto _ : st) sim.step();
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_TimeUnits)->RangeMultiplier(2)->Range(8, 64)->Iterations(2000);

}  // namespace

BENCHMARK_MAIN();
