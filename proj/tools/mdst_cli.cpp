// mdst: solve, simulate and generate graphs from the command line.

#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mdst/center.hpp"
#include "mdst/generators.hpp"
#include "mdst/graph_io.hpp"
#include "mdst/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUnstable = 3;

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    const double w = std::stod(tok, &used);
    if (used != tok.size()) throw mdst::GraphError("bad weight '" + tok + "'");
    out.push_back(w);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdst::ScenarioError("cannot write '" + path + "'");
  out << text;
}

int cmd_solve(const std::string& graph_path) {
  const mdst::WeightedGraph g = mdst::read_graph_file(graph_path);
  const mdst::MdstResult r = mdst::solve_mdst(g);
  std::string edges;
  for (auto [a, b] : r.tree.edges) edges += fmt::format(" {}-{}", a, b);
  std::cout << fmt::format("center {} sep {} diameter {}\n", r.center.location.to_string(), r.center.separation,
                           r.diameter);
  std::cout << "tree" << edges << "\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  std::string scheduler;
  std::string out;
  std::string trace;
  bool dump_tables = false;
};

int cmd_simulate(const SimulateArgs& a) {
  mdst::Scenario s = mdst::load_scenario(a.scenario);
  if (a.seed) s.config.seed = *a.seed;
  if (a.horizon) {
    if (*a.horizon <= 0) throw mdst::ScenarioError("horizon must be positive");
    s.config.horizon = *a.horizon;
  }
  if (!a.scheduler.empty()) s.config.scheduler = mdst::parse_scheduler(a.scheduler);
  s.config.record_trace = !a.trace.empty();

  mdst::Simulator sim(s.graph, s.config);
  if (a.dump_tables) {
    sim.dump_tables(std::cout);
    while (sim.step()) sim.dump_tables(std::cout);
  }
  const mdst::RunOutcome out = mdst::run_scenario(s, sim);
  if (!a.trace.empty()) {
    std::ostringstream t;
    sim.write_trace(t);
    write_text(a.trace, t.str());
  }
  if (!a.out.empty()) write_text(a.out, out.report_json);

  std::ostream& log = a.dump_tables || a.out == "-" ? std::cerr : std::cout;
  for (const auto& p : out.evaluation.predicates) {
    if (p.stabilized()) log << fmt::format("{}: stabilized at {}\n", p.name, *p.first_suffix_time);
    else log << fmt::format("{}: did not stabilize within horizon\n", p.name);
  }
  return out.stabilized() ? kExitOk : kExitUnstable;
}

struct GenArgs {
  std::string family;
  int n = 0;
  int m = 0;
  int wmax = 10;
  double w = 1.0;
  std::string weights;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  mdst::WeightedGraph g{1, {}};
  if (a.family == "path") {
    std::vector<double> ws = a.weights.empty() ? std::vector<double>(static_cast<std::size_t>(std::max(a.n - 1, 0)), a.w)
                                               : parse_weights(a.weights);
    if (!a.weights.empty() && a.n != 0 && static_cast<int>(ws.size()) != a.n - 1)
      throw mdst::GraphError(fmt::format("path with n={} needs {} weights", a.n, a.n - 1));
    g = mdst::path_graph(ws);
  } else if (a.family == "cycle") {
    g = mdst::cycle_graph(a.n, a.w);
  } else if (a.family == "star") {
    g = mdst::star_graph(a.n, a.w);
  } else if (a.family == "complete") {
    g = mdst::complete_graph(a.n, a.w);
  } else if (a.family == "random") {
    g = mdst::random_connected(a.n, a.m, a.wmax, a.seed);
  } else {
    throw mdst::GraphError("unknown family '" + a.family + "'");
  }
  write_text(a.out, mdst::format_graph(g));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum diameter spanning trees: sequential solver and self-stabilizing network simulator"};
  app.require_subcommand(1);

  std::string graph_path;
  auto* solve = app.add_subcommand("solve", "Absolute center and minimum diameter spanning tree of a graph file");
  solve->add_option("--graph", graph_path, "Graph file")->required();

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write the run report");
  sim->add_option("--scenario", sa.scenario, "Scenario JSON file")->required();
  sim->add_option("--seed", sa.seed, "Override the scheduler seed");
  sim->add_option("--horizon", sa.horizon, "Override the horizon (time units)");
  sim->add_option("--scheduler", sa.scheduler, "fair | adversarial | synchronous");
  sim->add_option("--out", sa.out, "Report JSON file ('-' for stdout)");
  sim->add_option("--trace", sa.trace, "Trace JSON Lines file ('-' for stdout)");
  sim->add_flag("--dump-tables", sa.dump_tables, "Print every node's routing table after each time unit");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a generated graph file");
  gen->add_option("family", ga.family, "path | cycle | star | complete | random")->required();
  gen->add_option("--n", ga.n, "Vertex count");
  gen->add_option("--m", ga.m, "Edge count (random)");
  gen->add_option("--wmax", ga.wmax, "Largest integer weight (random)");
  gen->add_option("--w", ga.w, "Uniform weight (path, cycle, star, complete)");
  gen->add_option("--weights", ga.weights, "Comma-separated path weights");
  gen->add_option("--seed", ga.seed, "Generator seed (random)");
  gen->add_option("--out", ga.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return cmd_solve(graph_path);
    if (*sim) return cmd_simulate(sa);
    if (*gen) return cmd_gen(ga);
  } catch (const mdst::GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mdst::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
