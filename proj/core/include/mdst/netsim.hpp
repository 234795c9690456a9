#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdst/graph.hpp"
#include "mdst/node.hpp"
#include "mdst/rng.hpp"

namespace mdst {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SchedulerKind { Fair, Adversarial, Synchronous };

[[nodiscard]] SchedulerKind parse_scheduler(const std::string& s);
[[nodiscard]] std::string to_string(SchedulerKind k);

enum class FaultKind { CorruptNode, CorruptLink, CrashRecover, WeightChange, RemoveEdge, AddEdge };

[[nodiscard]] FaultKind parse_fault_kind(const std::string& s);
[[nodiscard]] std::string to_string(FaultKind k);

/// Applied at the start of unit `at`, i.e. to configuration `at`.
struct FaultEvent {
  int at = 0;
  FaultKind kind = FaultKind::CorruptNode;
  int node = -1;
  int u = -1;
  int v = -1;
  double w = 0.0;
  std::uint64_t seed = 0;
};

struct SimConfig {
  Stack stack = Stack::Composed;
  SchedulerKind scheduler = SchedulerKind::Fair;
  std::uint64_t seed = 1;
  bool arbitrary_init = false;
  std::uint64_t init_seed = 0;
  int horizon = 100;
  std::vector<FaultEvent> faults;
  bool record_trace = false;
};

struct TraceRecord {
  int t = 0;
  std::string actor;
  std::string label;
  std::string digest;
  std::string info;  // preformatted JSON object body, may be empty
};

/// Per-node view of a configuration, enough to evaluate every predicate.
struct NodeSnapshot {
  int phase = 0;
  ProcId id = 0;
  bool list_dupfree = false;
  int n_seen = 0;
  std::vector<ProcId> id_list;     // sorted
  std::vector<ProcId> finite_ids;  // destinations with a finite distance
  double upbound = kInf;
  int tree_parent = kTreeNotReady;
};

struct Snapshot {
  int t = 0;
  std::uint64_t digest = 0;
  int graph_version = 0;
  std::vector<NodeSnapshot> nodes;
};

struct GraphVersion {
  int since = 0;  // first configuration index it applies to
  WeightedGraph graph;
};

struct ResetRecord {
  WaveKey key;
  int initiated_at = 0;
  int completed_at = -1;
  int released_at = -1;  // first configuration in which no node holds the key
  bool aborted = false;
};

struct SimMetrics {
  int time_units = 0;
  long messages_sent = 0;
  long messages_rejected = 0;
  long deliveries = 0;
  long frees = 0;
  long actions = 0;
  long faults_applied = 0;
  std::size_t peak_state_bits = 0;
  long resets_initiated = 0;
  long waves_completed = 0;
  std::vector<long> actions_per_unit_min;  // min over nodes of actions in each unit
};

/// Discrete-time simulator of unit-capacity FIFO links. Each unit, every
/// stored message is delivered and every node acts once; the interleaving
/// is drawn from the seeded scheduler.
/// Applies the faults in time order to a copy of g and throws ScenarioError
/// on the first one that does not fit the graph it would hit.
void validate_faults(const WeightedGraph& g, std::vector<FaultEvent> faults);

class Simulator {
 public:
  Simulator(WeightedGraph g, SimConfig cfg);

  /// Executes one time unit. Returns false once the horizon is reached.
  bool step();
  void run();

  /// Test hooks.
  NodeState& node(int v) { return nodes_.at(static_cast<std::size_t>(v)); }
  const NodeState& node(int v) const { return nodes_.at(static_cast<std::size_t>(v)); }
  [[nodiscard]] NodeContext context(int v) const;
  /// Stores f unless the queue from -> to is occupied.
  [[nodiscard]] bool send(int from, int to, Frame f);
  /// Delivers the stored message on from -> to, if any, and frees the link.
  bool receive(int from, int to);
  [[nodiscard]] bool queue_occupied(int from, int to) const;
  /// Applies a fault to the current configuration, outside the schedule.
  void inject(const FaultEvent& f);
  /// Re-snapshots the current configuration after external edits.
  void resnapshot();

  [[nodiscard]] int time() const { return t_; }
  [[nodiscard]] const SimConfig& config() const { return cfg_; }
  [[nodiscard]] const WeightedGraph& graph() const { return versions_.back().graph; }
  [[nodiscard]] const std::vector<GraphVersion>& versions() const { return versions_; }
  [[nodiscard]] const std::vector<Snapshot>& snapshots() const { return snaps_; }
  [[nodiscard]] const std::vector<TraceRecord>& trace() const { return trace_; }
  [[nodiscard]] const std::vector<ResetRecord>& resets() const { return resets_; }
  [[nodiscard]] const SimMetrics& metrics() const { return metrics_; }
  [[nodiscard]] int last_fault_time() const;
  /// Units whose transitions began with a fault, scheduled or injected.
  [[nodiscard]] std::vector<int> fault_times() const;

  /// Ids and extracted tree of the current configuration.
  [[nodiscard]] std::vector<std::uint64_t> current_ids() const;
  [[nodiscard]] std::optional<SpanningTree> extracted_tree() const;

  void write_trace(std::ostream& out) const;
  /// One JSON line per node with its routing table.
  void dump_tables(std::ostream& out) const;

 private:
  void apply_fault(const FaultEvent& f, std::size_t index);
  void act(int v);
  Snapshot take_snapshot() const;
  void log(int t, std::string actor, std::string label, std::string digest, std::string info = {});
  void rebuild_ports(int v);
  void track_resets(int t, int v, const UnEvents& ev);
  std::vector<WaveKey> make_key_pool(Rng& rng) const;
  std::vector<ProcId> id_pool() const;

  SimConfig cfg_;
  std::vector<FaultEvent> injected_;
  std::vector<GraphVersion> versions_;
  std::vector<NodeState> nodes_;
  std::vector<Rng> node_rng_;
  Rng sched_rng_;
  std::map<std::pair<int, int>, std::optional<Frame>> queues_;
  std::vector<ProcId> fixed_ids_;
  std::vector<Snapshot> snaps_;
  std::vector<TraceRecord> trace_;
  std::vector<ResetRecord> resets_;
  SimMetrics metrics_;
  std::vector<long> acted_;
  int t_ = 0;
};

}  // namespace mdst
