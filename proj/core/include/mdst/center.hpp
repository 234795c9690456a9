#pragma once

#include <vector>

#include "mdst/graph.hpp"

namespace mdst {

struct CandidatePair {
  double a = 0.0;  // d(from, z)
  double b = 0.0;  // d(to, z)
  int z = 0;
};

/// Antichain of candidate pairs: a strictly descending, b strictly ascending.
struct BoundaryList {
  std::vector<CandidatePair> pairs;
};

struct CenterResult {
  GeneralNode location;
  double separation = 0.0;
};

struct EdgeMinimum {
  double alpha = 0.0;
  double localmin = 0.0;
};

/// One pair (d[from][z], d[to][z]) per vertex z.
[[nodiscard]] std::vector<CandidatePair> candidate_pairs(const DistanceTable& dt, int from, int to);

[[nodiscard]] BoundaryList prune_and_sort(std::vector<CandidatePair> pairs);

/// max over pairs of min(alpha + a, w - alpha + b).
[[nodiscard]] double boundary_eval(const std::vector<CandidatePair>& pairs, double w, double alpha);

/// Minimum of the upper boundary over [0, w]: consecutive tent crossings and
/// both endpoints are evaluated; ties go to the smallest alpha.
[[nodiscard]] EdgeMinimum gamma_star(const BoundaryList& L, double w);

/// Convenience: candidate_pairs + prune_and_sort + gamma_star for edge {from, to}.
[[nodiscard]] EdgeMinimum edge_center(const WeightedGraph& g, const DistanceTable& dt, int from, int to);

/// True when edge {u, v} cannot beat `best`: max_z min(d[u][z], d[v][z]) >= best.
[[nodiscard]] bool edge_skip_bound(const DistanceTable& dt, int u, int v, double best);

struct CenterOptions {
  bool use_skip = true;
  IdMap ids = {};
};

/// Absolute center. Edge points are oriented from the endpoint with the
/// smaller id. A vertex of minimum separation is returned unless some edge
/// point is strictly better; among edge points the first in (id_from, id_to)
/// order attaining the minimum wins.
[[nodiscard]] CenterResult absolute_center(const WeightedGraph& g, const DistanceTable& dt, CenterOptions opt = {});
[[nodiscard]] CenterResult absolute_center(const WeightedGraph& g, CenterOptions opt = {});

struct MdstResult {
  SpanningTree tree;
  double diameter = 0.0;
  CenterResult center;
};

[[nodiscard]] MdstResult solve_mdst(const WeightedGraph& g, IdMap ids = {});

/// Grid-search oracle over all vertices and every edge at alpha = k * step.
[[nodiscard]] CenterResult brute_force_center(const WeightedGraph& g, const DistanceTable& dt, double grid_step);

inline constexpr int kBruteForceMaxN = 9;
inline constexpr int kBruteForceMaxM = 12;

/// Minimum tree diameter over every spanning tree, by edge-subset enumeration.
/// Throws GraphError above n = 9 or m = 12.
[[nodiscard]] double brute_force_mdst(const WeightedGraph& g);

}  // namespace mdst
