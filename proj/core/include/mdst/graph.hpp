#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdst {

/// Absolute tolerance used for every floating-point equality in this library.
inline constexpr double kEps = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised for malformed graph instances (self-loops, parallel edges,
/// non-positive weights, disconnected vertex sets, out-of-range indices).
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  int u = 0;  // always u < v
  int v = 0;
  double w = 0.0;
};

/// Connected, undirected, positively weighted simple graph.
///
/// Edges are kept normalized (u < v) and sorted lexicographically, so that
/// edge indices are stable for a given edge set. Instances are immutable;
/// the `with_*` helpers return modified copies and re-validate.
class WeightedGraph {
 public:
  struct Arc {
    int to;
    int edge;  // index into edges()
  };

  WeightedGraph(int n, std::vector<Edge> edges);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int m() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Edge& edge(int i) const { return edges_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] std::span<const Arc> neighbors(int v) const;

  /// Index of edge {a, b}, or -1 when absent.
  [[nodiscard]] int find_edge(int a, int b) const;
  [[nodiscard]] double weight(int a, int b) const;
  [[nodiscard]] bool has_edge(int a, int b) const { return find_edge(a, b) >= 0; }
  [[nodiscard]] double max_weight() const;

  [[nodiscard]] WeightedGraph with_weight(int a, int b, double w) const;
  [[nodiscard]] WeightedGraph without_edge(int a, int b) const;
  [[nodiscard]] WeightedGraph with_edge(int a, int b, double w) const;

  /// True when removing {a, b} keeps the graph connected.
  [[nodiscard]] bool removable(int a, int b) const;

  friend bool operator==(const WeightedGraph& x, const WeightedGraph& y);

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adj_;
};

/// A vertex, or a point on edge {from, to} at distance `alpha` from `from`.
struct GeneralNode {
  int from = 0;
  int to = -1;  // -1 for a vertex
  double alpha = 0.0;

  static GeneralNode vertex(int v) { return GeneralNode{v, -1, 0.0}; }
  static GeneralNode on_edge(int from, int to, double alpha) { return GeneralNode{from, to, alpha}; }

  [[nodiscard]] bool is_vertex() const { return to < 0; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const GeneralNode&, const GeneralNode&) = default;
};

/// Exact shortest-path weights plus, for each pair, the fewest edges over all
/// weight-shortest paths.
struct DistanceTable {
  int n = 0;
  std::vector<double> dist;
  std::vector<int> hops;

  [[nodiscard]] double d(int u, int v) const { return dist[static_cast<std::size_t>(u * n + v)]; }
  [[nodiscard]] int h(int u, int v) const { return hops[static_cast<std::size_t>(u * n + v)]; }
};

struct SpanningTree {
  std::vector<std::pair<int, int>> edges;  // sorted, each pair (a < b)
  GeneralNode root;
  std::vector<int> parent;  // parent vertex, -1 for the root side(s)

  friend bool operator==(const SpanningTree& x, const SpanningTree& y) { return x.edges == y.edges; }
};

struct GraphMetrics {
  double diameter = 0.0;
  double radius = 0.0;
  int hop_diameter = 0;
};

[[nodiscard]] DistanceTable all_pairs_distances(const WeightedGraph& g);

/// d(gamma, z) = min(alpha + d(from, z), w - alpha + d(to, z)).
[[nodiscard]] double general_distance(const WeightedGraph& g, const DistanceTable& dt,
                                      const GeneralNode& gamma, int z);

[[nodiscard]] double separation(const WeightedGraph& g, const DistanceTable& dt, const GeneralNode& gamma);

[[nodiscard]] GraphMetrics diameter_radius(const WeightedGraph& g, const DistanceTable& dt);

/// Process identifiers used for tie-breaking. An empty span means
/// "use the internal vertex index".
using IdMap = std::span<const std::uint64_t>;

/// Neighbor of `w` that is the next hop on a weight-shortest path toward
/// `target`: minimizes (weight, hops, id). Returns -1 when w == target.
[[nodiscard]] int next_hop(const WeightedGraph& g, const DistanceTable& dt, int w, int target, IdMap ids = {});

/// Shortest-path tree rooted at a general node.
///
/// For an interior edge point on {u, v} every vertex is assigned to the side
/// (u or v) through which it is closest, ties going to `root.from`.
/// Vertices route by `next_hop` toward their side's endpoint; the edge {u, v}
/// joins the two halves when both are non-empty.
[[nodiscard]] SpanningTree shortest_path_tree(const WeightedGraph& g, const DistanceTable& dt,
                                              const GeneralNode& root, IdMap ids = {});

[[nodiscard]] double tree_diameter(const WeightedGraph& g, const SpanningTree& t);

/// Verifies that `t` has n-1 distinct edges of g and spans V without cycles.
[[nodiscard]] bool is_spanning_tree(const WeightedGraph& g, const SpanningTree& t);

}  // namespace mdst
