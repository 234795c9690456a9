#pragma once

#include <cstdint>
#include <vector>

#include "mdst/graph.hpp"

namespace mdst {

/// Path 0-1-...-(k) with the given edge weights (k = weights.size()).
[[nodiscard]] WeightedGraph path_graph(const std::vector<double>& weights);
[[nodiscard]] WeightedGraph cycle_graph(int n, double w = 1.0);
/// Vertex 0 is the hub.
[[nodiscard]] WeightedGraph star_graph(int n, double w = 1.0);
[[nodiscard]] WeightedGraph complete_graph(int n, double w = 1.0);

/// Random connected graph with integer weights in [1, wmax]: a random
/// spanning tree first, then uniformly chosen extra edges.
/// Throws GraphError when m is outside [n-1, n(n-1)/2].
[[nodiscard]] WeightedGraph random_connected(int n, int m, int wmax, std::uint64_t seed);

}  // namespace mdst
