#include "mdst/checker.hpp"

#include <algorithm>
#include <cmath>

#include "mdst/center.hpp"

namespace mdst {
namespace {

bool knows(const NodeSnapshot& a, ProcId id) { return std::binary_search(a.finite_ids.begin(), a.finite_ids.end(), id); }

const WeightedGraph& graph_of(const Simulator& sim, const Snapshot& s) {
  return sim.versions().at(static_cast<std::size_t>(s.graph_version)).graph;
}

// Unique ids, and every node's list is exactly the set of ids in use.
bool naming_correct(const Snapshot& s) {
  std::vector<ProcId> ids;
  for (const auto& n : s.nodes) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) return false;
  return std::all_of(s.nodes.begin(), s.nodes.end(), [&](const NodeSnapshot& n) { return n.id_list == ids; });
}

}  // namespace

std::string PredicateReport::truth_string() const {
  std::string s;
  s.reserve(truth.size());
  for (char c : truth) s.push_back(c ? '1' : '0');
  return s;
}

bool eval_lp_un(const Snapshot& s, int u, int v) {
  const auto& a = s.nodes.at(static_cast<std::size_t>(u));
  const auto& b = s.nodes.at(static_cast<std::size_t>(v));
  return a.phase == 3 && b.phase == 3 && a.list_dupfree && b.list_dupfree;
}

bool eval_lp_apsp(const Snapshot& s, int u, int v) {
  const auto& a = s.nodes.at(static_cast<std::size_t>(u));
  const auto& b = s.nodes.at(static_cast<std::size_t>(v));
  return knows(a, b.id) && knows(b, a.id);
}

bool eval_psi(const Snapshot& s, const WeightedGraph& g) {
  if (g.n() == 1) return eval_lp_un(s, 0, 0);
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return eval_lp_un(s, e.u, e.v); });
}

bool eval_psi_prime(const Snapshot& s, const WeightedGraph& g) {
  if (g.n() == 1) return eval_lp_apsp(s, 0, 0);
  return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return eval_lp_apsp(s, e.u, e.v); });
}

bool eval_theta(const Snapshot& s, double oracle_sep) {
  return std::all_of(s.nodes.begin(), s.nodes.end(),
                     [&](const NodeSnapshot& n) { return std::abs(n.upbound - oracle_sep) <= 1e-9; });
}

PredicateReport stabilization_time(std::string name, std::vector<char> truth, int from) {
  PredicateReport r;
  r.name = std::move(name);
  r.from = std::max(from, 0);
  const int len = static_cast<int>(truth.size());
  int k = len;
  while (k > r.from && truth[static_cast<std::size_t>(k - 1)]) --k;
  if (k < len) r.first_suffix_time = k;
  r.truth = std::move(truth);
  return r;
}

const PredicateReport* RunEvaluation::find(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

bool RunEvaluation::all_stabilized() const {
  return std::all_of(predicates.begin(), predicates.end(), [](const PredicateReport& p) { return p.stabilized(); });
}

bool layered_order(const std::vector<PredicateReport>& layers) {
  for (std::size_t i = 1; i < layers.size(); ++i) {
    const auto& lo = layers[i - 1].first_suffix_time;
    const auto& hi = layers[i].first_suffix_time;
    if (hi && (!lo || *lo > *hi)) return false;
  }
  return true;
}

RunEvaluation evaluate_run(const Simulator& sim) {
  RunEvaluation ev;
  const Stack stack = sim.config().stack;
  for (const auto& v : sim.versions()) ev.oracle_separation.push_back(absolute_center(v.graph).separation);
  const int from = sim.last_fault_time() + 1;
  std::vector<char> psi, psi_prime, theta;
  for (const auto& s : sim.snapshots()) {
    const auto& g = graph_of(sim, s);
    psi.push_back(eval_psi(s, g));
    if (runs_apsp(stack)) psi_prime.push_back(eval_psi_prime(s, g));
    if (runs_mdst(stack))
      theta.push_back(eval_theta(s, ev.oracle_separation[static_cast<std::size_t>(s.graph_version)]));
  }
  ev.predicates.push_back(stabilization_time("psi", std::move(psi), from));
  if (runs_apsp(stack)) ev.predicates.push_back(stabilization_time("psi_prime", std::move(psi_prime), from));
  if (runs_mdst(stack)) ev.predicates.push_back(stabilization_time("theta", std::move(theta), from));

  ev.layered_order = layered_order(ev.predicates);
  return ev;
}

void LocalAuditReport::merge(const LocalAuditReport& o) {
  states_all_lp += o.states_all_lp;
  implication_failures += o.implication_failures;
  witness = witness || o.witness;
  transitions += o.transitions;
  lp_un_checked += o.lp_un_checked;
  lp_apsp_checked += o.lp_apsp_checked;
  excluded_fault_transitions += o.excluded_fault_transitions;
  violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  fault_violations.insert(fault_violations.end(), o.fault_violations.begin(), o.fault_violations.end());
}

LocalAuditReport local_checkability_audit(const Simulator& sim, const RunEvaluation& ev) {
  LocalAuditReport r;
  const auto& snaps = sim.snapshots();
  const auto faults = sim.fault_times();
  const int first_fault = faults.empty() ? static_cast<int>(snaps.size()) : *std::min_element(faults.begin(), faults.end());
  const PredicateReport* psi = ev.find("psi");
  const int psi_from = psi && psi->first_suffix_time ? *psi->first_suffix_time : static_cast<int>(snaps.size());
  const bool clean = !sim.config().arbitrary_init;
  const bool apsp = runs_apsp(sim.config().stack);

  auto in_scope = [&](int k) { return (clean && k <= first_fault) || k >= psi_from; };

  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const Snapshot& s = snaps[k];
    if (!in_scope(static_cast<int>(k)) || !psi->truth[k]) continue;
    ++r.states_all_lp;
    if (naming_correct(s)) r.witness = true;
    else ++r.implication_failures;
  }

  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    const int t = static_cast<int>(k);
    if (!in_scope(t)) continue;
    const Snapshot& s = snaps[k];
    const Snapshot& s2 = snaps[k + 1];
    const bool fault = std::find(faults.begin(), faults.end(), t) != faults.end();
    const auto& g = graph_of(sim, s);
    const auto& g2 = graph_of(sim, s2);
    if (fault) ++r.excluded_fault_transitions;
    else ++r.transitions;
    const bool psi_here = psi->truth[k] != 0;
    for (const auto& e : g.edges()) {
      if (!g2.has_edge(e.u, e.v)) continue;
      if (eval_lp_un(s, e.u, e.v)) {
        if (!fault) ++r.lp_un_checked;
        if (!eval_lp_un(s2, e.u, e.v)) (fault ? r.fault_violations : r.violations).push_back({t, e.u, e.v, "lp_un", fault});
      }
      if (apsp && psi_here && eval_lp_apsp(s, e.u, e.v)) {
        if (!fault) ++r.lp_apsp_checked;
        if (!eval_lp_apsp(s2, e.u, e.v))
          (fault ? r.fault_violations : r.violations).push_back({t, e.u, e.v, "lp_apsp", fault});
      }
    }
  }
  return r;
}

CompositionReport composition_audit(const std::vector<Snapshot>& snaps, std::optional<int> psi_suffix,
                                    const std::vector<long>& actions_per_unit_min) {
  CompositionReport r;
  r.psi_suffix = psi_suffix;
  for (long a : actions_per_unit_min)
    if (a < 1) ++r.unfair_units;
  if (!psi_suffix) return r;
  for (std::size_t k = static_cast<std::size_t>(*psi_suffix) + 1; k < snaps.size(); ++k) {
    const auto& prev = snaps[k - 1].nodes;
    const auto& cur = snaps[k].nodes;
    for (std::size_t v = 0; v < cur.size() && v < prev.size(); ++v) {
      ++r.nodes_checked;
      const int t = static_cast<int>(k);
      const int node = static_cast<int>(v);
      if (cur[v].id != prev[v].id) r.cross_writes.push_back({t, node, "id"});
      if (cur[v].id_list != prev[v].id_list) r.cross_writes.push_back({t, node, "id_list"});
      if (cur[v].n_seen != prev[v].n_seen) r.cross_writes.push_back({t, node, "n_seen"});
    }
  }
  return r;
}

CompositionReport composition_audit(const Simulator& sim, const RunEvaluation& ev) {
  const PredicateReport* psi = ev.find("psi");
  return composition_audit(sim.snapshots(), psi ? psi->first_suffix_time : std::nullopt,
                           sim.metrics().actions_per_unit_min);
}

}  // namespace mdst
