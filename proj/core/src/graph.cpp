#include "mdst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include <fmt/format.h>

namespace mdst {
namespace {

bool connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = n;
  for (const Edge& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

std::uint64_t id_of(IdMap ids, int v) { return ids.empty() ? static_cast<std::uint64_t>(v) : ids[static_cast<std::size_t>(v)]; }

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw GraphError("graph must have at least one vertex");
  for (Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
      throw GraphError(fmt::format("edge ({}, {}) references a vertex outside 0..{}", e.u, e.v, n_ - 1));
    if (e.u == e.v) throw GraphError(fmt::format("self-loop at vertex {}", e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw GraphError(fmt::format("edge ({}, {}) has non-positive weight {}", e.u, e.v, e.w));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw GraphError(fmt::format("parallel edge ({}, {})", edges_[i].u, edges_[i].v));
  }
  if (!connected(n_, edges_)) throw GraphError("graph is not connected");

  adj_.resize(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adj_[static_cast<std::size_t>(e.u)].push_back({e.v, static_cast<int>(i)});
    adj_[static_cast<std::size_t>(e.v)].push_back({e.u, static_cast<int>(i)});
  }
  for (auto& row : adj_) std::sort(row.begin(), row.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
}

std::span<const WeightedGraph::Arc> WeightedGraph::neighbors(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range(fmt::format("vertex {} out of range", v));
  return adj_[static_cast<std::size_t>(v)];
}

int WeightedGraph::find_edge(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) return -1;
  for (const Arc& arc : adj_[static_cast<std::size_t>(a)])
    if (arc.to == b) return arc.edge;
  return -1;
}

double WeightedGraph::weight(int a, int b) const {
  int i = find_edge(a, b);
  if (i < 0) throw GraphError(fmt::format("no edge ({}, {})", a, b));
  return edges_[static_cast<std::size_t>(i)].w;
}

double WeightedGraph::max_weight() const {
  double w = 0.0;
  for (const Edge& e : edges_) w = std::max(w, e.w);
  return w;
}

WeightedGraph WeightedGraph::with_weight(int a, int b, double w) const {
  int i = find_edge(a, b);
  if (i < 0) throw GraphError(fmt::format("no edge ({}, {})", a, b));
  auto edges = edges_;
  edges[static_cast<std::size_t>(i)].w = w;
  return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::without_edge(int a, int b) const {
  int i = find_edge(a, b);
  if (i < 0) throw GraphError(fmt::format("no edge ({}, {})", a, b));
  auto edges = edges_;
  edges.erase(edges.begin() + i);
  if (!connected(n_, edges)) throw GraphError(fmt::format("removing ({}, {}) disconnects the graph", a, b));
  return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::with_edge(int a, int b, double w) const {
  if (has_edge(a, b)) throw GraphError(fmt::format("edge ({}, {}) already present", a, b));
  auto edges = edges_;
  edges.push_back({a, b, w});
  return WeightedGraph(n_, std::move(edges));
}

bool WeightedGraph::removable(int a, int b) const {
  int i = find_edge(a, b);
  if (i < 0) return false;
  auto edges = edges_;
  edges.erase(edges.begin() + i);
  return connected(n_, edges);
}

bool operator==(const WeightedGraph& x, const WeightedGraph& y) {
  if (x.n_ != y.n_ || x.edges_.size() != y.edges_.size()) return false;
  for (std::size_t i = 0; i < x.edges_.size(); ++i) {
    const Edge& a = x.edges_[i];
    const Edge& b = y.edges_[i];
    if (a.u != b.u || a.v != b.v || a.w != b.w) return false;
  }
  return true;
}

std::string GeneralNode::to_string() const {
  if (is_vertex()) return fmt::format("v{}", from);
  return fmt::format("{}-{}@{}", from, to, alpha);
}

DistanceTable all_pairs_distances(const WeightedGraph& g) {
  const int n = g.n();
  DistanceTable dt;
  dt.n = n;
  dt.dist.assign(static_cast<std::size_t>(n * n), kInf);
  dt.hops.assign(static_cast<std::size_t>(n * n), std::numeric_limits<int>::max());

  using Item = std::tuple<double, int, int>;  // (dist, hops, vertex)
  for (int s = 0; s < n; ++s) {
    double* d = dt.dist.data() + static_cast<std::ptrdiff_t>(s) * n;
    int* h = dt.hops.data() + static_cast<std::ptrdiff_t>(s) * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[s] = 0.0;
    h[s] = 0;
    pq.emplace(0.0, 0, s);
    while (!pq.empty()) {
      auto [du, hu, u] = pq.top();
      pq.pop();
      if (du != d[u] || hu != h[u]) continue;
      for (const auto& arc : g.neighbors(u)) {
        double nd = du + g.edge(arc.edge).w;
        int nh = hu + 1;
        int v = arc.to;
        bool better = nd < d[v] - kEps || (std::abs(nd - d[v]) <= kEps && nh < h[v]);
        if (better) {
          d[v] = std::min(nd, d[v]);
          h[v] = nh;
          pq.emplace(d[v], nh, v);
        }
      }
    }
  }
  return dt;
}

double general_distance(const WeightedGraph& g, const DistanceTable& dt, const GeneralNode& gamma, int z) {
  if (gamma.is_vertex()) return dt.d(gamma.from, z);
  const double w = g.weight(gamma.from, gamma.to);
  return std::min(gamma.alpha + dt.d(gamma.from, z), w - gamma.alpha + dt.d(gamma.to, z));
}

double separation(const WeightedGraph& g, const DistanceTable& dt, const GeneralNode& gamma) {
  double s = 0.0;
  for (int z = 0; z < g.n(); ++z) s = std::max(s, general_distance(g, dt, gamma, z));
  return s;
}

GraphMetrics diameter_radius(const WeightedGraph& g, const DistanceTable& dt) {
  GraphMetrics m;
  m.radius = kInf;
  for (int v = 0; v < g.n(); ++v) {
    double s = separation(g, dt, GeneralNode::vertex(v));
    m.diameter = std::max(m.diameter, s);
    m.radius = std::min(m.radius, s);
    for (int z = 0; z < g.n(); ++z) m.hop_diameter = std::max(m.hop_diameter, dt.h(v, z));
  }
  return m;
}

int next_hop(const WeightedGraph& g, const DistanceTable& dt, int w, int target, IdMap ids) {
  if (w == target) return -1;
  int best = -1;
  double best_d = kInf;
  int best_h = 0;
  for (const auto& arc : g.neighbors(w)) {
    double cand = g.edge(arc.edge).w + dt.d(arc.to, target);
    int cand_h = 1 + dt.h(arc.to, target);
    bool take = false;
    if (best < 0 || cand < best_d - kEps) {
      take = true;
    } else if (std::abs(cand - best_d) <= kEps) {
      take = cand_h < best_h || (cand_h == best_h && id_of(ids, arc.to) < id_of(ids, best));
    }
    if (take) {
      best = arc.to;
      best_d = cand;
      best_h = cand_h;
    }
  }
  return best;
}

SpanningTree shortest_path_tree(const WeightedGraph& g, const DistanceTable& dt, const GeneralNode& root, IdMap ids) {
  const int n = g.n();
  SpanningTree t;
  t.root = root;
  t.parent.assign(static_cast<std::size_t>(n), -1);

  if (root.is_vertex()) {
    for (int w = 0; w < n; ++w) t.parent[static_cast<std::size_t>(w)] = next_hop(g, dt, w, root.from, ids);
  } else {
    const int u = root.from, v = root.to;
    const double a = root.alpha, om = g.weight(u, v);
    auto u_side = [&](int w) { return dt.d(w, u) + a <= dt.d(w, v) + om - a + kEps; };
    for (int w = 0; w < n; ++w) {
      if (w == u || w == v) continue;
      t.parent[static_cast<std::size_t>(w)] = next_hop(g, dt, w, u_side(w) ? u : v, ids);
    }
    const bool u_own = u_side(u);
    const bool v_own = !u_side(v);
    if (!u_own) t.parent[static_cast<std::size_t>(u)] = next_hop(g, dt, u, v, ids);
    if (!v_own) t.parent[static_cast<std::size_t>(v)] = next_hop(g, dt, v, u, ids);
    if (u_own && v_own) t.parent[static_cast<std::size_t>(u)] = v;
  }

  for (int w = 0; w < n; ++w) {
    int p = t.parent[static_cast<std::size_t>(w)];
    if (p >= 0) t.edges.emplace_back(std::min(w, p), std::max(w, p));
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.edges.erase(std::unique(t.edges.begin(), t.edges.end()), t.edges.end());
  return t;
}

double tree_diameter(const WeightedGraph& g, const SpanningTree& t) {
  const int n = g.n();
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : t.edges) {
    double w = g.weight(a, b);
    adj[static_cast<std::size_t>(a)].emplace_back(b, w);
    adj[static_cast<std::size_t>(b)].emplace_back(a, w);
  }
  double best = 0.0;
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1.0);
    dist[static_cast<std::size_t>(s)] = 0.0;
    stack.assign(1, s);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (auto [y, w] : adj[static_cast<std::size_t>(x)]) {
        if (dist[static_cast<std::size_t>(y)] < 0.0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + w;
          best = std::max(best, dist[static_cast<std::size_t>(y)]);
          stack.push_back(y);
        }
      }
    }
  }
  return best;
}

bool is_spanning_tree(const WeightedGraph& g, const SpanningTree& t) {
  if (static_cast<int>(t.edges.size()) != g.n() - 1) return false;
  std::vector<Edge> edges;
  for (auto [a, b] : t.edges) {
    if (!g.has_edge(a, b)) return false;
    edges.push_back({a, b, 1.0});
  }
  for (std::size_t i = 1; i < t.edges.size(); ++i)
    if (t.edges[i] == t.edges[i - 1]) return false;
  return connected(g.n(), edges);
}

}  // namespace mdst
