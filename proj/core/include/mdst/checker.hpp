#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdst/netsim.hpp"

namespace mdst {

/// Truth of one predicate over every logged configuration, and the earliest
/// time from which it holds until the horizon.
struct PredicateReport {
  std::string name;
  std::vector<char> truth;
  int from = 0;  // first configuration considered (after the last fault)
  std::optional<int> first_suffix_time;

  [[nodiscard]] bool stabilized() const { return first_suffix_time.has_value(); }
  [[nodiscard]] std::string truth_string() const;
};

/// Both endpoints in phase 3 with duplicate-free id lists.
[[nodiscard]] bool eval_lp_un(const Snapshot& s, int u, int v);
/// Both endpoints hold a finite distance to each other.
[[nodiscard]] bool eval_lp_apsp(const Snapshot& s, int u, int v);
[[nodiscard]] bool eval_psi(const Snapshot& s, const WeightedGraph& g);
[[nodiscard]] bool eval_psi_prime(const Snapshot& s, const WeightedGraph& g);
/// Every node's upbound equals the oracle separation within 1e-9.
[[nodiscard]] bool eval_theta(const Snapshot& s, double oracle_sep);

[[nodiscard]] PredicateReport stabilization_time(std::string name, std::vector<char> truth, int from);

struct RunEvaluation {
  std::vector<PredicateReport> predicates;  // psi, then psi_prime and theta when the stack runs them
  std::vector<double> oracle_separation;    // per graph version
  bool layered_order = true;

  [[nodiscard]] const PredicateReport* find(const std::string& name) const;
  [[nodiscard]] bool all_stabilized() const;
};

/// Each predicate may only settle once the one before it has.
[[nodiscard]] bool layered_order(const std::vector<PredicateReport>& layers);

[[nodiscard]] RunEvaluation evaluate_run(const Simulator& sim);

struct AuditViolation {
  int t = 0;  // transition t -> t+1
  int u = 0;
  int v = 0;
  std::string predicate;
  bool fault = false;  // a fault was applied during this transition
};

/// Sampling-based local checkability audit: (i) implication from all local
/// predicates to the global one on sampled states, (ii) a witnessing
/// legitimate state, (iii) per-edge stability over fault-free transitions.
struct LocalAuditReport {
  long states_all_lp = 0;
  long implication_failures = 0;
  bool witness = false;
  long transitions = 0;
  long lp_un_checked = 0;
  long lp_apsp_checked = 0;
  long excluded_fault_transitions = 0;
  std::vector<AuditViolation> violations;       // fault-free, counted against (iii)
  std::vector<AuditViolation> fault_violations;  // attributed to an injected fault

  void merge(const LocalAuditReport& o);
  [[nodiscard]] bool passed() const { return violations.empty() && implication_failures == 0; }
};

/// Transitions are audited from clean epochs: a clean start up to and
/// including its first fault transition, and from the naming suffix
/// onwards. LP' is audited on transitions whose source satisfies psi.
[[nodiscard]] LocalAuditReport local_checkability_audit(const Simulator& sim, const RunEvaluation& ev);

struct CompositionViolation {
  int t = 0;
  int node = 0;
  std::string what;
};

struct CompositionReport {
  std::optional<int> psi_suffix;
  long nodes_checked = 0;
  std::vector<CompositionViolation> cross_writes;
  long unfair_units = 0;  // units in which some node did not act

  [[nodiscard]] bool passed() const { return cross_writes.empty() && unfair_units == 0; }
};

/// After the naming suffix no write may touch what the routing and center
/// layers read from naming: the node's id, its id list and its size estimate.
[[nodiscard]] CompositionReport composition_audit(const std::vector<Snapshot>& snaps, std::optional<int> psi_suffix,
                                                  const std::vector<long>& actions_per_unit_min);
[[nodiscard]] CompositionReport composition_audit(const Simulator& sim, const RunEvaluation& ev);

}  // namespace mdst
