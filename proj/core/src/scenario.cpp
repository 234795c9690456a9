#include "mdst/scenario.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mdst/center.hpp"
#include "mdst/graph_io.hpp"

namespace mdst {
namespace {

using json = nlohmann::ordered_json;

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, _] : j.items())
    if (!allowed.count(k)) throw ScenarioError(fmt::format("{}: unknown field '{}'", where, k));
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ScenarioError(fmt::format("{}: missing field '{}'", where, key));
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ScenarioError(fmt::format("{}: field '{}' has the wrong type", where, key));
  }
}

int get_vertex(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ScenarioError(fmt::format("{}: '{}' must be an integer", where, key));
  return get<int>(j, key, where);
}

WeightedGraph inline_graph(const json& j) {
  only_keys(j, {"n", "edges"}, "graph");
  const int n = get<int>(j, "n", "graph");
  std::vector<Edge> edges;
  const json& es = j.at("edges");
  if (!es.is_array()) throw ScenarioError("graph: 'edges' must be an array");
  for (const auto& e : es) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number())
      throw ScenarioError("graph: each edge must be [u, v, w]");
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return WeightedGraph(n, std::move(edges));
}

FaultEvent parse_fault(const json& j, std::size_t index, std::uint64_t scenario_seed) {
  const std::string where = fmt::format("faults[{}]", index);
  if (!j.is_object()) throw ScenarioError(where + ": must be an object");
  FaultEvent f;
  f.kind = parse_fault_kind(get<std::string>(j, "kind", where));
  f.at = get<int>(j, "at", where);
  f.seed = j.contains("seed") ? get<std::uint64_t>(j, "seed", where) : Rng::derive(scenario_seed, 1000 + index);
  switch (f.kind) {
    case FaultKind::CorruptNode:
    case FaultKind::CrashRecover:
      only_keys(j, {"at", "kind", "node", "seed"}, where);
      f.node = get_vertex(j, "node", where);
      break;
    case FaultKind::CorruptLink:
    case FaultKind::RemoveEdge:
      only_keys(j, {"at", "kind", "u", "v", "seed"}, where);
      f.u = get_vertex(j, "u", where);
      f.v = get_vertex(j, "v", where);
      break;
    case FaultKind::WeightChange:
    case FaultKind::AddEdge:
      only_keys(j, {"at", "kind", "u", "v", "w", "seed"}, where);
      f.u = get_vertex(j, "u", where);
      f.v = get_vertex(j, "v", where);
      f.w = get<double>(j, "w", where);
      break;
  }
  return f;
}

json fault_json(const FaultEvent& f) {
  json j;
  j["at"] = f.at;
  j["kind"] = to_string(f.kind);
  switch (f.kind) {
    case FaultKind::CorruptNode:
    case FaultKind::CrashRecover: j["node"] = f.node; break;
    case FaultKind::CorruptLink:
    case FaultKind::RemoveEdge:
      j["u"] = f.u;
      j["v"] = f.v;
      break;
    case FaultKind::WeightChange:
    case FaultKind::AddEdge:
      j["u"] = f.u;
      j["v"] = f.v;
      j["w"] = f.w;
      break;
  }
  j["seed"] = f.seed;
  return j;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json tree_json(const SpanningTree& t) {
  json edges = json::array();
  for (auto [a, b] : t.edges) edges.push_back({a, b});
  return edges;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  only_keys(j, {"graph", "protocol", "init", "scheduler", "seed", "horizon", "faults"}, "scenario");

  Scenario s;
  SimConfig& c = s.config;
  if (!j.contains("graph")) throw ScenarioError("scenario: missing field 'graph'");
  const json& g = j.at("graph");
  if (g.is_string()) {
    s.graph_source = g.get<std::string>();
    std::filesystem::path p(s.graph_source);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.graph = read_graph_file(p.string());
  } else if (g.is_object()) {
    s.graph = inline_graph(g);
  } else {
    throw ScenarioError("scenario: 'graph' must be a path or an inline graph object");
  }

  try {
    c.stack = parse_stack(j.value("protocol", std::string("composed")));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  c.seed = j.contains("seed") ? get<std::uint64_t>(j, "seed", "scenario") : 1;
  c.scheduler = parse_scheduler(j.value("scheduler", std::string("fair")));
  c.horizon = get<int>(j, "horizon", "scenario");
  if (c.horizon <= 0) throw ScenarioError("scenario: horizon must be positive");

  if (j.contains("init")) {
    const json& init = j.at("init");
    if (init.is_string()) {
      if (init.get<std::string>() != "clean") throw ScenarioError("scenario: init must be \"clean\" or {\"arbitrary\": seed}");
    } else if (init.is_object() && init.size() == 1 && init.contains("arbitrary") &&
               init.at("arbitrary").is_number_unsigned()) {
      c.arbitrary_init = true;
      c.init_seed = init.at("arbitrary").get<std::uint64_t>();
    } else {
      throw ScenarioError("scenario: init must be \"clean\" or {\"arbitrary\": seed}");
    }
  }

  if (j.contains("faults")) {
    const json& fs = j.at("faults");
    if (!fs.is_array()) throw ScenarioError("scenario: 'faults' must be an array");
    for (std::size_t i = 0; i < fs.size(); ++i) c.faults.push_back(parse_fault(fs[i], i, c.seed));
    validate_faults(s.graph, c.faults);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open scenario file '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.parent_path());
}

namespace {

json scenario_object(const Scenario& s) {
  json j;
  if (!s.graph_source.empty()) {
    j["graph"] = s.graph_source;
  } else {
    json g;
    g["n"] = s.graph.n();
    json es = json::array();
    for (const auto& e : s.graph.edges()) es.push_back({e.u, e.v, e.w});
    g["edges"] = es;
    j["graph"] = g;
  }
  const SimConfig& c = s.config;
  j["protocol"] = to_string(c.stack);
  if (c.arbitrary_init) j["init"] = {{"arbitrary", c.init_seed}};
  else j["init"] = "clean";
  j["scheduler"] = to_string(c.scheduler);
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  json fs = json::array();
  for (const auto& f : c.faults) fs.push_back(fault_json(f));
  j["faults"] = fs;
  return j;
}

}  // namespace

std::string scenario_json(const Scenario& s) { return scenario_object(s).dump(2); }

std::string run_report_json(const Scenario& s, const Simulator& sim, const RunEvaluation& ev,
                            const LocalAuditReport& audit, const CompositionReport& comp) {
  json r;
  r["scenario"] = scenario_object(s);

  json seeds;
  seeds["scheduler"] = sim.config().seed;
  seeds["init"] = sim.config().arbitrary_init ? json(sim.config().init_seed) : json(nullptr);
  json fseeds = json::array();
  for (const auto& f : sim.config().faults) fseeds.push_back(f.seed);
  seeds["faults"] = fseeds;
  r["seeds"] = seeds;

  json preds = json::array();
  for (const auto& p : ev.predicates) {
    json pj;
    pj["name"] = p.name;
    pj["from"] = p.from;
    pj["first_suffix_time"] = p.first_suffix_time ? json(*p.first_suffix_time) : json(nullptr);
    pj["status"] = p.stabilized() ? "stabilized" : "did not stabilize within horizon";
    pj["truth"] = p.truth_string();
    preds.push_back(pj);
  }
  r["predicates"] = preds;
  r["layered_order"] = ev.layered_order;

  json la;
  la["states_all_lp"] = audit.states_all_lp;
  la["implication_failures"] = audit.implication_failures;
  la["witness"] = audit.witness;
  la["transitions"] = audit.transitions;
  la["lp_un_checked"] = audit.lp_un_checked;
  la["lp_apsp_checked"] = audit.lp_apsp_checked;
  la["excluded_fault_transitions"] = audit.excluded_fault_transitions;
  la["violations"] = audit.violations.size();
  la["fault_attributed_violations"] = audit.fault_violations.size();
  la["passed"] = audit.passed();
  json ca;
  ca["psi_suffix"] = comp.psi_suffix ? json(*comp.psi_suffix) : json(nullptr);
  ca["nodes_checked"] = comp.nodes_checked;
  ca["cross_writes"] = comp.cross_writes.size();
  ca["unfair_units"] = comp.unfair_units;
  ca["passed"] = comp.passed();
  r["audits"] = {{"local_checkability", la}, {"composition", ca}};

  json fin;
  const auto ids = sim.current_ids();
  const auto tree = sim.extracted_tree();
  fin["tree"] = tree ? tree_json(*tree) : json(nullptr);
  fin["tree_diameter"] = tree ? number_or_null(tree_diameter(sim.graph(), *tree)) : json(nullptr);
  if (runs_mdst(sim.config().stack)) {
    const MdstResult oracle = solve_mdst(sim.graph(), ids);
    json oj;
    oj["center"] = oracle.center.location.to_string();
    oj["separation"] = oracle.center.separation;
    oj["mdst_diameter"] = oracle.diameter;
    oj["tree"] = tree_json(oracle.tree);
    fin["oracle"] = oj;
    fin["tree_matches_oracle"] = tree && *tree == oracle.tree;
  }
  json idj = json::array();
  for (auto x : ids) idj.push_back(x);
  fin["ids"] = idj;
  r["final"] = fin;

  const SimMetrics& m = sim.metrics();
  json mj;
  mj["time_units"] = m.time_units;
  mj["messages_sent"] = m.messages_sent;
  mj["messages_rejected"] = m.messages_rejected;
  mj["deliveries"] = m.deliveries;
  mj["frees"] = m.frees;
  mj["actions"] = m.actions;
  mj["faults_applied"] = m.faults_applied;
  mj["peak_state_bits"] = m.peak_state_bits;
  mj["resets_initiated"] = m.resets_initiated;
  mj["waves_completed"] = m.waves_completed;
  r["metrics"] = mj;

  json rs = json::array();
  for (const auto& x : sim.resets()) {
    json xj;
    xj["initiator"] = x.key.initiator;
    xj["initiated_at"] = x.initiated_at;
    xj["completed_at"] = x.completed_at >= 0 ? json(x.completed_at) : json(nullptr);
    xj["released_at"] = x.released_at >= 0 ? json(x.released_at) : json(nullptr);
    xj["aborted"] = x.aborted;
    rs.push_back(xj);
  }
  r["resets"] = rs;
  r["notes"] = json::array({"theta is evaluated on node states only; link queue contents are not part of the configuration"});
  return r.dump(2) + "\n";
}

RunOutcome run_scenario(const Scenario& s, Simulator& sim) {
  sim.run();
  RunOutcome out;
  out.evaluation = evaluate_run(sim);
  out.local_audit = local_checkability_audit(sim, out.evaluation);
  out.composition = composition_audit(sim, out.evaluation);
  out.report_json = run_report_json(s, sim, out.evaluation, out.local_audit, out.composition);
  return out;
}

}  // namespace mdst
