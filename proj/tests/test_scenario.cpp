#include <gtest/gtest.h>

#include "json.hpp"

#include "mdst/graph_io.hpp"
#include "mdst/scenario.hpp"

using namespace mdst;
using nlohmann::json;

namespace {

const std::filesystem::path kData = MDST_DATA_DIR;

const char* kInline = R"({"graph": {"n": 3, "edges": [[0, 1, 1], [1, 2, 2]]}, "horizon": 200})";

}  // namespace

TEST(ScenarioParse, InlineGraphAndDefaults) {
  const auto s = parse_scenario(kInline);
  EXPECT_TRUE(s.graph_source.empty());
  EXPECT_EQ(s.graph.n(), 3);
  EXPECT_EQ(s.graph.weight(1, 2), 2.0);
  EXPECT_EQ(s.config.stack, Stack::Composed);
  EXPECT_EQ(s.config.scheduler, SchedulerKind::Fair);
  EXPECT_EQ(s.config.seed, 1u);
  EXPECT_EQ(s.config.horizon, 200);
  EXPECT_FALSE(s.config.arbitrary_init);
  EXPECT_TRUE(s.config.faults.empty());
}

TEST(ScenarioParse, AllFields) {
  const auto s = parse_scenario(R"({
    "graph": "path3.graph", "protocol": "apsp", "init": {"arbitrary": 9},
    "scheduler": "adversarial", "seed": 4, "horizon": 50,
    "faults": [{"at": 10, "kind": "corrupt-link", "u": 0, "v": 1, "seed": 3},
               {"at": 20, "kind": "weight-change", "u": 1, "v": 2, "w": 5},
               {"at": 30, "kind": "add-edge", "u": 0, "v": 2, "w": 1}]})",
                                kData);
  EXPECT_EQ(s.graph_source, "path3.graph");
  EXPECT_EQ(s.graph, read_graph_file(kData / "path3.graph"));
  EXPECT_EQ(s.config.stack, Stack::Apsp);
  EXPECT_TRUE(s.config.arbitrary_init);
  EXPECT_EQ(s.config.init_seed, 9u);
  EXPECT_EQ(s.config.scheduler, SchedulerKind::Adversarial);
  EXPECT_EQ(s.config.seed, 4u);
  ASSERT_EQ(s.config.faults.size(), 3u);
  EXPECT_EQ(s.config.faults[0].kind, FaultKind::CorruptLink);
  EXPECT_EQ(s.config.faults[0].seed, 3u);
  EXPECT_EQ(s.config.faults[1].w, 5.0);
  EXPECT_EQ(s.config.faults[2].kind, FaultKind::AddEdge);
}

TEST(ScenarioParse, FaultSeedsDefaultPerIndex) {
  const auto s = parse_scenario(
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 20,
          "faults": [{"at": 1, "kind": "corrupt-node", "node": 0}, {"at": 2, "kind": "corrupt-node", "node": 0}]})");
  EXPECT_NE(s.config.faults[0].seed, s.config.faults[1].seed);
  const auto t = parse_scenario(
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 20,
          "faults": [{"at": 1, "kind": "corrupt-node", "node": 0}, {"at": 2, "kind": "corrupt-node", "node": 0}]})");
  EXPECT_EQ(s.config.faults[0].seed, t.config.faults[0].seed);
}

TEST(ScenarioParse, Rejections) {
  const std::vector<std::string> bad{
      "{",
      "[]",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 0})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "colour": 1})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "scheduler": "lazy"})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "protocol": "ospf"})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "init": "messy"})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "faults": [{"at": 1, "kind": "meteor"}]})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": 10, "faults": [{"at": 1, "kind": "remove-edge", "u": 0, "v": 1}]})",
      R"({"graph": {"n": 2, "edges": [[0, 1, 1]]}, "horizon": "ten"})",
      R"({"horizon": 10})",
  };
  for (const auto& text : bad) EXPECT_THROW((void)parse_scenario(text), std::invalid_argument) << text;
  EXPECT_THROW((void)parse_scenario(R"({"graph": {"n": 3, "edges": [[0, 1, 1]]}, "horizon": 10})"), GraphError);
  EXPECT_THROW((void)parse_scenario(R"({"graph": "missing.graph", "horizon": 10})", kData), std::invalid_argument);
}

TEST(ScenarioRun, ReportShape) {
  const auto s = parse_scenario(kInline);
  Simulator sim(s.graph, s.config);
  const auto out = run_scenario(s, sim);
  EXPECT_TRUE(out.stabilized());
  const auto j = json::parse(out.report_json);
  for (const char* key : {"scenario", "predicates", "layered_order", "audits", "final", "metrics", "resets"})
    EXPECT_TRUE(j.contains(key)) << key;
  ASSERT_EQ(j["predicates"].size(), 3u);
  EXPECT_EQ(j["predicates"][0]["name"], "psi");
  EXPECT_EQ(j["predicates"][2]["status"], "stabilized");
  EXPECT_EQ(j["predicates"][2]["truth"].get<std::string>().size(), 201u);
  EXPECT_EQ(j["final"]["tree_matches_oracle"], true);
  EXPECT_DOUBLE_EQ(j["final"]["oracle"]["separation"].get<double>(), 1.5);
  EXPECT_EQ(j["audits"]["composition"]["passed"], true);
}

TEST(ScenarioRun, ShortHorizonDoesNotStabilize) {
  auto s = parse_scenario(kInline);
  s.config.horizon = 1;
  Simulator sim(s.graph, s.config);
  const auto out = run_scenario(s, sim);
  EXPECT_FALSE(out.stabilized());
  const auto j = json::parse(out.report_json);
  EXPECT_EQ(j["predicates"][2]["status"], "did not stabilize within horizon");
  EXPECT_TRUE(j["predicates"][2]["first_suffix_time"].is_null());
}

TEST(ScenarioRun, ReportIsDeterministic) {
  const auto s = load_scenario(kData / "arbitrary.json");
  Simulator a(s.graph, s.config);
  Simulator b(s.graph, s.config);
  EXPECT_EQ(run_scenario(s, a).report_json, run_scenario(s, b).report_json);
}

TEST(ScenarioRun, SampleScenariosStabilize) {
  for (const char* name : {"clean.json", "arbitrary.json", "faults.json", "inline.json"}) {
    const auto s = load_scenario(kData / name);
    Simulator sim(s.graph, s.config);
    const auto out = run_scenario(s, sim);
    EXPECT_TRUE(out.stabilized()) << name;
    EXPECT_TRUE(out.local_audit.passed()) << name;
    EXPECT_TRUE(out.composition.passed()) << name;
  }
}
