#include "mdst/generators.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mdst/rng.hpp"

namespace mdst {

WeightedGraph path_graph(const std::vector<double>& weights) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i)
    edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), weights[i]});
  return WeightedGraph(static_cast<int>(weights.size()) + 1, std::move(edges));
}

WeightedGraph cycle_graph(int n, double w) {
  if (n < 3) throw GraphError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(int n, double w) {
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({0, i, w});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph complete_graph(int n, double w) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_connected(int n, int m, int wmax, std::uint64_t seed) {
  const long max_m = static_cast<long>(n) * (n - 1) / 2;
  if (n < 1 || m < n - 1 || m > max_m)
    throw GraphError(fmt::format("infeasible random graph: n={} m={} (need {} <= m <= {})", n, m, n - 1, max_m));
  if (wmax < 1) throw GraphError("wmax must be >= 1");
  Rng rng(seed);
  auto weight = [&] { return static_cast<double>(rng.between(1, wmax)); };

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  std::vector<char> used(static_cast<std::size_t>(n * n), 0);
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    used[static_cast<std::size_t>(a * n + b)] = used[static_cast<std::size_t>(b * n + a)] = 1;
    edges.push_back({a, b, weight()});
  };
  for (int i = 1; i < n; ++i) {
    int a = order[static_cast<std::size_t>(i)];
    int b = order[rng.below(static_cast<std::uint64_t>(i))];
    add(a, b);
  }
  std::vector<std::pair<int, int>> rest;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!used[static_cast<std::size_t>(a * n + b)]) rest.emplace_back(a, b);
  for (int k = n - 1; k < m; ++k) {
    std::size_t pick = rng.below(rest.size());
    add(rest[pick].first, rest[pick].second);
    rest[pick] = rest.back();
    rest.pop_back();
  }
  return WeightedGraph(n, std::move(edges));
}

}  // namespace mdst
