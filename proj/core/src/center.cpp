#include "mdst/center.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace mdst {
namespace {

std::uint64_t id_of(IdMap ids, int v) { return ids.empty() ? static_cast<std::uint64_t>(v) : ids[static_cast<std::size_t>(v)]; }

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

}  // namespace

std::vector<CandidatePair> candidate_pairs(const DistanceTable& dt, int from, int to) {
  std::vector<CandidatePair> out;
  out.reserve(static_cast<std::size_t>(dt.n));
  for (int z = 0; z < dt.n; ++z) out.push_back({dt.d(from, z), dt.d(to, z), z});
  return out;
}

BoundaryList prune_and_sort(std::vector<CandidatePair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const CandidatePair& x, const CandidatePair& y) {
    if (x.a != y.a) return x.a > y.a;
    if (x.b != y.b) return x.b > y.b;
    return x.z < y.z;
  });
  BoundaryList L;
  double max_b = -kInf;
  for (const auto& p : pairs) {
    if (p.b > max_b) {
      L.pairs.push_back(p);
      max_b = p.b;
    }
  }
  return L;
}

double boundary_eval(const std::vector<CandidatePair>& pairs, double w, double alpha) {
  double s = 0.0;
  for (const auto& p : pairs) s = std::max(s, std::min(alpha + p.a, w - alpha + p.b));
  return s;
}

EdgeMinimum gamma_star(const BoundaryList& L, double w) {
  const auto& P = L.pairs;
  EdgeMinimum best{0.0, boundary_eval(P, w, 0.0)};
  auto consider = [&](double alpha) {
    alpha = std::clamp(alpha, 0.0, w);
    double v = boundary_eval(P, w, alpha);
    if (v < best.localmin - kEps || (std::abs(v - best.localmin) <= kEps && alpha < best.alpha)) best = {alpha, v};
  };
  for (std::size_t i = 0; i + 1 < P.size(); ++i) consider(0.5 * (w + P[i].b - P[i + 1].a));
  consider(w);
  return best;
}

EdgeMinimum edge_center(const WeightedGraph& g, const DistanceTable& dt, int from, int to) {
  return gamma_star(prune_and_sort(candidate_pairs(dt, from, to)), g.weight(from, to));
}

bool edge_skip_bound(const DistanceTable& dt, int u, int v, double best) {
  double bound = 0.0;
  for (int z = 0; z < dt.n; ++z) bound = std::max(bound, std::min(dt.d(u, z), dt.d(v, z)));
  return bound >= best;
}

CenterResult absolute_center(const WeightedGraph& g, const DistanceTable& dt, CenterOptions opt) {
  const int n = g.n();
  int arg_r = 0;
  double r = kInf;
  for (int v = 0; v < n; ++v) {
    double s = separation(g, dt, GeneralNode::vertex(v));
    if (s < r - kEps || (std::abs(s - r) <= kEps && id_of(opt.ids, v) < id_of(opt.ids, arg_r))) {
      r = std::min(r, s);
      arg_r = v;
    }
  }

  struct Oriented {
    int from, to;
  };
  std::vector<Oriented> order;
  for (const Edge& e : g.edges()) {
    if (id_of(opt.ids, e.u) < id_of(opt.ids, e.v))
      order.push_back({e.u, e.v});
    else
      order.push_back({e.v, e.u});
  }
  std::sort(order.begin(), order.end(), [&](const Oriented& x, const Oriented& y) {
    auto kx = std::pair(id_of(opt.ids, x.from), id_of(opt.ids, x.to));
    auto ky = std::pair(id_of(opt.ids, y.from), id_of(opt.ids, y.to));
    return kx < ky;
  });

  CenterResult res{GeneralNode::vertex(arg_r), r};
  for (const auto& e : order) {
    if (opt.use_skip && edge_skip_bound(dt, e.from, e.to, res.separation)) continue;
    EdgeMinimum m = edge_center(g, dt, e.from, e.to);
    if (m.localmin < res.separation - kEps) res = {GeneralNode::on_edge(e.from, e.to, m.alpha), m.localmin};
  }
  return res;
}

CenterResult absolute_center(const WeightedGraph& g, CenterOptions opt) {
  return absolute_center(g, all_pairs_distances(g), opt);
}

MdstResult solve_mdst(const WeightedGraph& g, IdMap ids) {
  DistanceTable dt = all_pairs_distances(g);
  MdstResult out;
  out.center = absolute_center(g, dt, {true, ids});
  out.tree = shortest_path_tree(g, dt, out.center.location, ids);
  out.diameter = tree_diameter(g, out.tree);
  return out;
}

CenterResult brute_force_center(const WeightedGraph& g, const DistanceTable& dt, double grid_step) {
  if (!(grid_step > 0.0)) throw GraphError("grid step must be positive");
  CenterResult best{GeneralNode::vertex(0), kInf};
  for (int v = 0; v < g.n(); ++v) {
    double s = separation(g, dt, GeneralNode::vertex(v));
    if (s < best.separation) best = {GeneralNode::vertex(v), s};
  }
  for (const Edge& e : g.edges()) {
    auto pairs = candidate_pairs(dt, e.u, e.v);
    const long steps = static_cast<long>(std::floor(e.w / grid_step));
    for (long k = 0; k <= steps + 1; ++k) {
      double alpha = std::min(e.w, static_cast<double>(k) * grid_step);
      double s = boundary_eval(pairs, e.w, alpha);
      if (s < best.separation) best = {GeneralNode::on_edge(e.u, e.v, alpha), s};
    }
  }
  return best;
}

double brute_force_mdst(const WeightedGraph& g) {
  const int n = g.n(), m = g.m();
  if (n > kBruteForceMaxN || m > kBruteForceMaxM)
    throw GraphError(fmt::format("brute force limited to n <= {} and m <= {} (got n={}, m={})", kBruteForceMaxN,
                                 kBruteForceMaxM, n, m));
  if (n == 1) return 0.0;
  double best = kInf;
  const int k = n - 1;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  SpanningTree t;
  while (true) {
    Dsu dsu(n);
    bool ok = true;
    t.edges.clear();
    for (int i : pick) {
      const Edge& e = g.edge(i);
      if (!dsu.unite(e.u, e.v)) {
        ok = false;
        break;
      }
      t.edges.emplace_back(e.u, e.v);
    }
    if (ok) best = std::min(best, tree_diameter(g, t));
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace mdst
