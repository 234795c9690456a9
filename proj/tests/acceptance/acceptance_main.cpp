// Acceptance suite: one PASS/FAIL line per criterion.
//
//   mdst_acceptance [--log FILE]
//
// Per-run seeds and outcomes of the simulation criteria go to FILE
// (default acceptance_runs.jsonl) as JSON Lines.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdst/center.hpp"
#include "mdst/checker.hpp"
#include "mdst/generators.hpp"
#include "mdst/netsim.hpp"
#include "mdst/scenario.hpp"
#include "mdst/un.hpp"

using namespace mdst;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::ofstream run_log;

void log_run(const std::string& line) {
  if (run_log) run_log << line << '\n';
}

int hop_diameter(const WeightedGraph& g) { return diameter_radius(g, all_pairs_distances(g)).hop_diameter; }

// ---- criterion 3 accumulator -------------------------------------------

struct Sandwich {
  long instances = 0;
  long failures = 0;
  long skip_changed = 0;
  std::string first_failure;

  void check(const WeightedGraph& g, const std::string& label) {
    ++instances;
    const auto dt = all_pairs_distances(g);
    const double D = diameter_radius(g, dt).diameter;
    const auto r = solve_mdst(g);
    const double s = r.center.separation;
    const double noskip = absolute_center(g, dt, CenterOptions{false, {}}).separation;
    if (std::abs(noskip - s) > kTol) ++skip_changed;

    std::vector<Edge> tree_edges;
    for (auto [a, b] : r.tree.edges) tree_edges.push_back({a, b, g.weight(a, b)});
    const WeightedGraph t(g.n(), tree_edges);
    const double DT = diameter_radius(t, all_pairs_distances(t)).diameter;

    const bool ok = D / 2 <= s + kTol && D <= DT + kTol && DT <= 2 * s + kTol && std::abs(DT - r.diameter) <= kTol &&
                    static_cast<int>(tree_edges.size()) == g.n() - 1;
    if (!ok) {
      if (failures == 0)
        first_failure = fmt::format("{}: D={} s={} D(T*)={} reported {}", label, D, s, DT, r.diameter);
      ++failures;
    }
  }
};

Sandwich sandwich;

// ---- 1 ------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  long edges = 0;
  long bad = 0;
  double worst = 0.0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng r(Rng::derive(0xc1, seed));
    const int n = 2 + static_cast<int>(r.below(11));
    const int m = n - 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(n * (n - 1) / 2 - (n - 1) + 1)));
    const auto g = random_connected(n, m, 10, seed);
    const auto dt = all_pairs_distances(g);
    sandwich.check(g, fmt::format("c1 graph {}", seed));
    for (const auto& e : g.edges()) {
      ++edges;
      const auto pairs = candidate_pairs(dt, e.u, e.v);
      const double got = gamma_star(prune_and_sort(pairs), e.w).localmin;
      double grid = kInf;
      const long steps = std::lround(e.w / 1e-4);
      for (long k = 0; k <= steps; ++k) grid = std::min(grid, boundary_eval(pairs, e.w, static_cast<double>(k) * 1e-4));
      grid = std::min(grid, boundary_eval(pairs, e.w, e.w));
      const double diff = std::abs(got - grid);
      worst = std::max(worst, diff);
      if (diff > 1e-4 + kTol) {
        if (bad == 0) first = fmt::format(" first: graph {} edge {}-{} got {} grid {}", seed, e.u, e.v, got, grid);
        ++bad;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0,
          fmt::format("200 graphs, {} edges, {} mismatches, max |diff| {:.3g}, {:.1f}s{}", edges, bad, worst, secs, first)};
}

// ---- 2 ------------------------------------------------------------------

bool connected(int n, const std::vector<Edge>& es) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)];
    return x;
  };
  int parts = n;
  for (const auto& e : es) {
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) {
      p[static_cast<std::size_t>(a)] = b;
      --parts;
    }
  }
  return parts == 1;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  long graphs = 0;
  long instances = 0;
  long bad = 0;
  std::string first;
  auto compare = [&](const WeightedGraph& g, const std::string& label) {
    ++instances;
    const double got = solve_mdst(g).diameter;
    const double want = brute_force_mdst(g);
    if (got != want) {
      if (bad == 0) first = fmt::format(" first: {} got {} want {}", label, got, want);
      ++bad;
    }
  };

  for (int n = 1; n <= 5; ++n) {
    std::vector<std::pair<int, int>> all;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
    const int full = static_cast<int>(all.size());
    for (unsigned mask = 0; mask < (1u << full); ++mask) {
      std::vector<Edge> es;
      for (int i = 0; i < full; ++i)
        if (mask & (1u << i)) es.push_back({all[static_cast<std::size_t>(i)].first, all[static_cast<std::size_t>(i)].second, 1.0});
      if (!connected(n, es)) continue;
      ++graphs;
      // Every assignment from {1, 2, 3}; the all-ones one is the unit-weight case.
      const int m = static_cast<int>(es.size());
      long combos = 1;
      for (int i = 0; i < m; ++i) combos *= 3;
      for (long c = 0; c < combos; ++c) {
        long x = c;
        for (auto& e : es) {
          e.w = static_cast<double>(1 + x % 3);
          x /= 3;
        }
        const WeightedGraph g(n, es);
        compare(g, fmt::format("n={} mask={} weights#{}", n, mask, c));
        if (c % 97 == 0) sandwich.check(g, fmt::format("c2 n={} mask={} weights#{}", n, mask, c));
      }
    }
  }
  const long exhaustive = instances;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng r(Rng::derive(0xc2, seed));
    const int n = 2 + static_cast<int>(r.below(5));
    const int maxm = std::min(n * (n - 1) / 2, kBruteForceMaxM);
    const int m = n - 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(maxm - (n - 1) + 1)));
    const auto g = random_connected(n, m, 10, seed);
    compare(g, fmt::format("random seed {}", seed));
    sandwich.check(g, fmt::format("c2 random {}", seed));
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 300.0,
          fmt::format("{} labeled connected graphs with n <= 5, {} weighted instances, 100 random n <= 6, "
                      "{} mismatches, {:.1f}s{}",
                      graphs, exhaustive, bad, secs, first)};
}

// ---- 3 ------------------------------------------------------------------

Outcome criterion3() {
  return {sandwich.failures == 0 && sandwich.skip_changed == 0 && sandwich.instances > 0,
          fmt::format("{} instances, {} bound failures, {} skip changes{}", sandwich.instances, sandwich.failures,
                      sandwich.skip_changed, sandwich.first_failure.empty() ? "" : " first: " + sandwich.first_failure)};
}

// ---- 4 ------------------------------------------------------------------

Outcome criterion4() {
  long checked = 0;
  long bad = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng r(Rng::derive(0xc4, seed));
    const int n = 2 + static_cast<int>(r.below(11));
    const int m = std::min(n * (n - 1) / 2, n - 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(2 * n))));
    const auto g = random_connected(n, m, 10, seed);
    const auto dt = all_pairs_distances(g);
    const int hd = diameter_radius(g, dt).hop_diameter;
    SimConfig c;
    c.stack = Stack::Apsp;
    c.scheduler = SchedulerKind::Synchronous;
    c.seed = seed;
    c.horizon = hd + 1;
    Simulator sim(g, c);
    for (int i = 0; i <= hd; ++i) {
      if (i > 0) sim.step();
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          if (dt.h(u, v) > i) continue;
          ++checked;
          const Route* rt = find_route(sim.node(u).apsp, static_cast<ProcId>(v + 1));
          if (!rt || rt->d != dt.d(u, v)) {
            if (bad == 0)
              first = fmt::format(" first: graph {} round {} {}->{} got {} want {}", seed, i, u, v, rt ? rt->d : -1.0,
                                  dt.d(u, v));
            ++bad;
          }
        }
    }
  }
  return {bad == 0, fmt::format("50 graphs, {} hop-bounded entries checked, {} violations{}", checked, bad, first)};
}

// ---- 5 and 8 ------------------------------------------------------------

struct StabilizationRuns {
  long runs = 0;
  long theta_ok = 0;
  long order_ok = 0;
  long tree_ok = 0;
  long composition_ok = 0;
  int graphs = 0;
  double worst_fraction = 0.0;
  double secs = 0.0;
  LocalAuditReport audit;
  std::string first_failure;
};

StabilizationRuns stabilization_runs() {
  const auto t0 = Clock::now();
  StabilizationRuns out;
  constexpr int kGraphs = 20;
  constexpr int kRunsPerGraph = 25;
  out.graphs = kGraphs;
  for (int gi = 0; gi < kGraphs; ++gi) {
    Rng r(Rng::derive(0xc5, static_cast<std::uint64_t>(gi)));
    const int n = 4 + static_cast<int>(r.below(13));
    const int m = std::min(n * (n - 1) / 2, n - 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(n + 2))));
    const std::uint64_t graph_seed = 500 + static_cast<std::uint64_t>(gi);
    const auto g = random_connected(n, m, 10, graph_seed);
    const int hd = hop_diameter(g);
    for (int k = 0; k < kRunsPerGraph; ++k) {
      SimConfig c;
      c.seed = Rng::derive(graph_seed, static_cast<std::uint64_t>(k));
      c.arbitrary_init = true;
      c.init_seed = Rng::derive(c.seed, 77);
      c.scheduler = k % 2 ? SchedulerKind::Adversarial : SchedulerKind::Fair;
      c.horizon = 50 * (n + hd * hd);
      Simulator sim(g, c);
      sim.run();
      const auto ev = evaluate_run(sim);
      const auto audit = local_checkability_audit(sim, ev);
      const auto comp = composition_audit(sim, ev);
      const auto* theta = ev.find("theta");
      const auto want = solve_mdst(g, sim.current_ids());
      const auto tree = sim.extracted_tree();
      const bool tree_ok = tree && *tree == want.tree;
      ++out.runs;
      out.theta_ok += theta->stabilized();
      out.order_ok += ev.layered_order;
      out.tree_ok += tree_ok;
      out.composition_ok += comp.passed();
      out.audit.merge(audit);
      if (theta->stabilized())
        out.worst_fraction = std::max(out.worst_fraction, static_cast<double>(*theta->first_suffix_time) / c.horizon);
      auto t = [](const PredicateReport* p) { return p && p->first_suffix_time ? *p->first_suffix_time : -1; };
      log_run(fmt::format("{{\"criterion\":5,\"graph_seed\":{},\"n\":{},\"m\":{},\"scheduler\":\"{}\",\"seed\":{},"
                          "\"init_seed\":{},\"horizon\":{},\"psi\":{},\"psi_prime\":{},\"theta\":{},\"tree_ok\":{},"
                          "\"composition_ok\":{}}}",
                          graph_seed, n, m, to_string(c.scheduler), c.seed, c.init_seed, c.horizon, t(ev.find("psi")),
                          t(ev.find("psi_prime")), t(theta), tree_ok, comp.passed()));
      if ((!theta->stabilized() || !ev.layered_order) && out.first_failure.empty())
        out.first_failure = fmt::format(" first: graph_seed {} seed {} scheduler {}", graph_seed, c.seed,
                                        to_string(c.scheduler));
    }
  }
  out.secs = seconds_since(t0);
  return out;
}

Outcome criterion5(const StabilizationRuns& s) {
  const bool pass = s.theta_ok == s.runs && s.order_ok == s.runs && s.runs >= 500 && s.graphs >= 10 && s.secs < 900.0;
  return {pass, fmt::format("{} runs on {} graphs (n <= 16, fair + adversarial, arbitrary init): theta {}/{}, "
                            "layered order {}/{}, tree equals oracle {}/{}, worst theta time {:.1f}% of horizon, "
                            "{:.1f}s{}",
                            s.runs, s.graphs, s.theta_ok, s.runs, s.order_ok, s.runs, s.tree_ok, s.runs,
                            100.0 * s.worst_fraction, s.secs, s.first_failure)};
}

Outcome criterion8(const StabilizationRuns& s) {
  // Clean starts add audited transitions before any fault.
  LocalAuditReport audit = s.audit;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_connected(14, 22, 10, 800 + seed);
    SimConfig c;
    c.seed = seed;
    c.scheduler = seed % 2 ? SchedulerKind::Fair : SchedulerKind::Adversarial;
    c.horizon = 1500;
    c.faults.push_back({900, FaultKind::CorruptNode, static_cast<int>(seed % 14), 0, 0, 0.0, seed});
    Simulator sim(g, c);
    sim.run();
    audit.merge(local_checkability_audit(sim, evaluate_run(sim)));
  }
  const bool enough = audit.lp_un_checked >= 100000 && audit.lp_apsp_checked >= 100000;
  const bool pass = audit.passed() && audit.witness && enough && s.composition_ok == s.runs;
  return {pass, fmt::format("{} fault-free transitions audited ({} LP edge checks, {} LP' edge checks): {} violations, "
                            "{} all-LP states with {} implication failures, witness {}; {} fault transitions excluded "
                            "({} violations attributed to faults); composition clean in {}/{} runs",
                            audit.transitions, audit.lp_un_checked, audit.lp_apsp_checked, audit.violations.size(),
                            audit.states_all_lp, audit.implication_failures, audit.witness ? "yes" : "no",
                            audit.excluded_fault_transitions, audit.fault_violations.size(), s.composition_ok, s.runs)};
}

// ---- 6 ------------------------------------------------------------------

Outcome criterion6() {
  const auto t0 = Clock::now();
  std::string per_kind;
  bool pass = true;
  for (auto kind : {FaultKind::CorruptNode, FaultKind::CorruptLink, FaultKind::CrashRecover, FaultKind::WeightChange,
                    FaultKind::AddEdge, FaultKind::RemoveEdge}) {
    int ok = 0;
    int worst = 0;
    const int runs = 50;
    for (int seed = 1; seed <= runs; ++seed) {
      Rng r(Rng::derive(0xc6 + static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(seed)));
      const int n = 5 + static_cast<int>(r.below(8));
      const int m = std::min(n * (n - 1) / 2 - 1, n + static_cast<int>(r.below(static_cast<std::uint64_t>(n))));
      const auto g = random_connected(n, m, 10, Rng::derive(0x6, r.next()));
      const int hd = hop_diameter(g);
      const int H = 50 * (n + hd * hd);
      SimConfig c;
      c.seed = static_cast<std::uint64_t>(seed);
      c.horizon = 2 * H;
      c.scheduler = seed % 2 ? SchedulerKind::Fair : SchedulerKind::Adversarial;
      FaultEvent f;
      f.at = H / 2;
      f.kind = kind;
      f.seed = r.next();
      if (kind == FaultKind::CorruptNode || kind == FaultKind::CrashRecover) {
        f.node = static_cast<int>(r.below(static_cast<std::uint64_t>(n)));
      } else if (kind == FaultKind::AddEdge) {
        do {
          f.u = static_cast<int>(r.below(static_cast<std::uint64_t>(n)));
          f.v = static_cast<int>(r.below(static_cast<std::uint64_t>(n)));
        } while (f.u == f.v || g.has_edge(f.u, f.v));
        f.w = static_cast<double>(1 + r.below(10));
      } else {
        std::vector<int> cand;
        for (int i = 0; i < g.m(); ++i)
          if (kind != FaultKind::RemoveEdge || g.removable(g.edge(i).u, g.edge(i).v)) cand.push_back(i);
        const auto& e = g.edge(cand[r.below(cand.size())]);
        f.u = e.u;
        f.v = e.v;
        f.w = static_cast<double>(1 + r.below(10));
      }
      c.faults = {f};
      Simulator sim(g, c);
      sim.run();
      const auto ev = evaluate_run(sim);
      const auto* theta = ev.find("theta");
      const auto want = solve_mdst(sim.graph(), sim.current_ids());
      const auto tree = sim.extracted_tree();
      const bool good = theta->stabilized() && tree && *tree == want.tree;
      ok += good;
      if (theta->stabilized()) worst = std::max(worst, *theta->first_suffix_time - f.at);
      log_run(fmt::format("{{\"criterion\":6,\"kind\":\"{}\",\"n\":{},\"m\":{},\"scheduler\":\"{}\",\"seed\":{},"
                          "\"fault_seed\":{},\"at\":{},\"horizon\":{},\"theta\":{},\"tree_ok\":{}}}",
                          to_string(kind), n, m, to_string(c.scheduler), c.seed, f.seed, f.at, c.horizon,
                          theta->first_suffix_time.value_or(-1), tree && *tree == want.tree));
    }
    pass = pass && ok == runs;
    per_kind += fmt::format("{}{} {}/{} (worst recovery {})", per_kind.empty() ? "" : ", ", to_string(kind), ok, runs, worst);
  }
  return {pass, fmt::format("{}; {:.1f}s", per_kind, seconds_since(t0))};
}

// ---- 7 ------------------------------------------------------------------

Outcome criterion7() {
  Rng rng(Rng::derive(0xc7, 0));
  const int trials = 10000;
  int dup = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<ProcId> ids;
    for (int i = 0; i < 10; ++i) ids.push_back(draw_id(1000, rng));
    dup += check_conflict(ids);
  }
  const double frac = static_cast<double>(dup) / trials;

  int within = 0;
  int worst_slack = 1 << 30;
  double mean = 0.0;
  const int runs = 100;
  for (int seed = 1; seed <= runs; ++seed) {
    Rng r(Rng::derive(0xc7, static_cast<std::uint64_t>(seed)));
    const int n = 10;
    const int m = n - 1 + static_cast<int>(r.below(2 * n));
    const auto g = random_connected(n, m, 10, static_cast<std::uint64_t>(seed));
    const int hd = hop_diameter(g);
    SimConfig c;
    c.stack = Stack::Un;
    c.scheduler = SchedulerKind::Synchronous;
    c.seed = static_cast<std::uint64_t>(seed);
    c.horizon = 2000;
    Simulator sim(g, c);
    for (int t = 0; t < 600; ++t) sim.step();
    const int a = static_cast<int>(r.below(n));
    int b = a;
    while (b == a) b = static_cast<int>(r.below(n));
    sim.node(a).un.id = sim.node(b).un.id;
    sim.resnapshot();
    const int t0 = sim.time();
    sim.run();
    int first_init = -1;
    int first_done = -1;
    for (const auto& x : sim.resets()) {
      if (x.initiated_at <= t0) continue;
      if (first_init < 0) first_init = x.initiated_at;
      if (x.completed_at >= 0 && (first_done < 0 || x.completed_at < first_done)) first_done = x.completed_at;
    }
    const int bound = 2 * hd + n;
    const int latency = first_init >= 0 && first_done >= 0 ? first_done - first_init : -1;
    if (latency >= 0 && latency <= bound) ++within;
    if (latency >= 0) {
      worst_slack = std::min(worst_slack, bound - latency);
      mean += latency;
    }
    log_run(fmt::format("{{\"criterion\":7,\"seed\":{},\"n\":{},\"m\":{},\"hop_diameter\":{},\"forced\":[{},{}],"
                        "\"reset_initiated\":{},\"reset_completed\":{},\"latency\":{},\"bound\":{}}}",
                        seed, n, m, hd, a, b, first_init, first_done, latency, bound));
  }
  mean /= runs;
  return {frac <= 0.13 && within == runs,
          fmt::format("duplicate fraction {:.4f} over {} draws of 10 ids from [1, 1000]; reset latency within "
                      "2*hop_diameter + n in {}/{} forced-conflict runs (mean {:.1f} rounds, min slack {})",
                      frac, trials, within, runs, mean, worst_slack)};
}

// ---- 9 ------------------------------------------------------------------

Outcome criterion9() {
  const std::vector<std::string> scenarios{
      R"({"graph": {"n": 6, "edges": [[0,1,2],[1,2,1],[2,3,3],[3,4,1],[4,5,2],[5,0,1],[1,4,2]]},
          "scheduler": "fair", "seed": 3, "horizon": 800})",
      R"({"graph": {"n": 6, "edges": [[0,1,2],[1,2,1],[2,3,3],[3,4,1],[4,5,2],[5,0,1],[1,4,2]]},
          "init": {"arbitrary": 12}, "scheduler": "adversarial", "seed": 4, "horizon": 1500})",
      R"({"graph": {"n": 6, "edges": [[0,1,2],[1,2,1],[2,3,3],[3,4,1],[4,5,2],[5,0,1],[1,4,2]]},
          "scheduler": "fair", "seed": 5, "horizon": 2500, "faults": [
            {"at": 300, "kind": "corrupt-node", "node": 2}, {"at": 600, "kind": "corrupt-link", "u": 0, "v": 1},
            {"at": 900, "kind": "crash-recover", "node": 4}, {"at": 1200, "kind": "weight-change", "u": 2, "v": 3, "w": 1},
            {"at": 1500, "kind": "add-edge", "u": 0, "v": 3, "w": 4}, {"at": 1800, "kind": "remove-edge", "u": 1, "v": 4}]})",
  };
  int identical = 0;
  int distinct_seed = 0;
  auto run = [](Scenario s) {
    s.config.record_trace = true;
    Simulator sim(s.graph, s.config);
    const auto out = run_scenario(s, sim);
    std::ostringstream trace;
    sim.write_trace(trace);
    return std::pair{trace.str(), out.report_json};
  };
  for (const auto& text : scenarios) {
    const Scenario s = parse_scenario(text);
    const auto a = run(s);
    const auto b = run(s);
    identical += a == b;
    Scenario other = s;
    other.config.seed += 1000;
    distinct_seed += run(other).first != a.first;
  }
  const int total = static_cast<int>(scenarios.size());
  return {identical == total && distinct_seed == total,
          fmt::format("{}/{} scenarios byte-identical on rerun (trace and report), {}/{} differ under another seed",
                      identical, total, distinct_seed, total)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string log_path = "acceptance_runs.jsonl";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--log") == 0 && i + 1 < argc) log_path = argv[++i];
    else {
      std::cerr << "usage: mdst_acceptance [--log FILE]\n";
      return 2;
    }
  }
  run_log.open(log_path);

  int failed = 0;
  auto report = [&](int k, const Outcome& o) {
    std::cout << fmt::format("CRITERION {} {}: {}", k, o.pass ? "PASS" : "FAIL", o.detail) << std::endl;
    failed += !o.pass;
  };
  report(1, criterion1());
  report(2, criterion2());
  report(3, criterion3());
  report(4, criterion4());
  const auto runs = stabilization_runs();
  report(5, criterion5(runs));
  report(6, criterion6());
  report(7, criterion7());
  report(8, criterion8(runs));
  report(9, criterion9());
  std::cout << fmt::format("{} of 9 criteria passed; run log: {}", 9 - failed, log_path) << std::endl;
  return failed == 0 ? 0 : 1;
}
