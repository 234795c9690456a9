#pragma once

#include <filesystem>
#include <string>

#include "mdst/checker.hpp"
#include "mdst/graph.hpp"
#include "mdst/netsim.hpp"

namespace mdst {

/// A simulation request. `graph_source` is the path as written in the file
/// (empty for inline graphs).
struct Scenario {
  std::string graph_source;
  WeightedGraph graph{1, {}};
  SimConfig config;
};

/// Throws ScenarioError on malformed JSON, unknown fields or bad values,
/// GraphError on invalid graphs. Relative graph paths resolve against base_dir.
[[nodiscard]] Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& file);

[[nodiscard]] std::string scenario_json(const Scenario& s);

struct RunOutcome {
  RunEvaluation evaluation;
  LocalAuditReport local_audit;
  CompositionReport composition;
  std::string report_json;
  [[nodiscard]] bool stabilized() const { return evaluation.all_stabilized(); }
};

/// Runs the simulation to its horizon, evaluates it and builds the report.
[[nodiscard]] RunOutcome run_scenario(const Scenario& s, Simulator& sim);
[[nodiscard]] std::string run_report_json(const Scenario& s, const Simulator& sim, const RunEvaluation& ev,
                                          const LocalAuditReport& audit, const CompositionReport& comp);

}  // namespace mdst
