#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdst/center.hpp"
#include "mdst/generators.hpp"
#include "mdst/rng.hpp"

using namespace mdst;

namespace {

WeightedGraph path_au_uv() { return path_graph({1.0, 2.0}); }

std::vector<std::pair<double, double>> ab(const BoundaryList& L) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : L.pairs) out.emplace_back(p.a, p.b);
  return out;
}

using AB = std::vector<std::pair<double, double>>;

std::vector<CandidatePair> pairs_of(const AB& v) {
  std::vector<CandidatePair> out;
  int z = 0;
  for (auto [a, b] : v) out.push_back({a, b, z++});
  return out;
}

double grid_min(const std::vector<CandidatePair>& pairs, double w, double step) {
  double best = kInf;
  long steps = static_cast<long>(std::floor(w / step));
  for (long k = 0; k <= steps; ++k) best = std::min(best, boundary_eval(pairs, w, static_cast<double>(k) * step));
  return std::min(best, boundary_eval(pairs, w, w));
}

}  // namespace

TEST(CandidatePairs, Examples) {
  auto dt = all_pairs_distances(path_au_uv());
  EXPECT_EQ(ab({candidate_pairs(dt, 1, 2)}), (AB{{1, 3}, {0, 2}, {2, 0}}));
  auto de = all_pairs_distances(path_graph({4.0}));
  EXPECT_EQ(ab({candidate_pairs(de, 0, 1)}), (AB{{0, 4}, {4, 0}}));
  auto dtri = all_pairs_distances(complete_graph(3));
  EXPECT_EQ(ab({candidate_pairs(dtri, 0, 1)}), (AB{{0, 1}, {1, 0}, {1, 1}}));
}

TEST(PruneAndSort, Examples) {
  EXPECT_EQ(ab(prune_and_sort(pairs_of({{1, 3}, {0, 2}, {2, 0}}))), (AB{{2, 0}, {1, 3}}));
  EXPECT_EQ(ab(prune_and_sort(pairs_of({{0, 4}, {4, 0}}))), (AB{{4, 0}, {0, 4}}));
  EXPECT_EQ(ab(prune_and_sort(pairs_of({{1, 1}, {1, 1}, {0, 1}}))), (AB{{1, 1}}));
  EXPECT_EQ(ab(prune_and_sort(pairs_of({{2, 1}, {2, 5}, {1, 7}}))), (AB{{2, 5}, {1, 7}}));
}

TEST(PruneAndSort, AntichainAndCoverage) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    AB raw;
    int k = 1 + static_cast<int>(rng.below(9));
    for (int i = 0; i < k; ++i) raw.emplace_back(rng.between(0, 6), rng.between(0, 6));
    auto L = prune_and_sort(pairs_of(raw));
    for (std::size_t i = 1; i < L.pairs.size(); ++i) {
      EXPECT_GT(L.pairs[i - 1].a, L.pairs[i].a);
      EXPECT_LT(L.pairs[i - 1].b, L.pairs[i].b);
    }
    for (auto [a, b] : raw) {
      bool covered = std::any_of(L.pairs.begin(), L.pairs.end(), [&](const CandidatePair& p) { return a <= p.a && b <= p.b; });
      EXPECT_TRUE(covered);
    }
  }
}

TEST(GammaStar, Examples) {
  auto m1 = gamma_star(prune_and_sort(pairs_of({{4, 0}, {0, 4}})), 4.0);
  EXPECT_EQ(m1.alpha, 2.0);
  EXPECT_EQ(m1.localmin, 2.0);
  auto m2 = gamma_star(prune_and_sort(pairs_of({{2, 0}, {1, 3}})), 2.0);
  EXPECT_EQ(m2.alpha, 0.5);
  EXPECT_EQ(m2.localmin, 1.5);
  auto m3 = gamma_star(prune_and_sort(pairs_of({{1, 1}})), 1.0);
  EXPECT_EQ(m3.alpha, 0.0);
  EXPECT_EQ(m3.localmin, 1.0);
}

TEST(BoundaryEval, Examples) {
  auto single = pairs_of({{0, 4}, {4, 0}});
  EXPECT_EQ(boundary_eval(single, 4.0, 0.0), 4.0);
  EXPECT_EQ(boundary_eval(single, 4.0, 2.0), 2.0);
  auto g = path_au_uv();
  auto dt = all_pairs_distances(g);
  auto pairs = candidate_pairs(dt, 1, 2);
  EXPECT_EQ(boundary_eval(pairs, 2.0, 1.0), 2.0);
  EXPECT_EQ(boundary_eval(pairs, 2.0, 1.0), separation(g, dt, GeneralNode::on_edge(1, 2, 1.0)));
}

TEST(GammaStar, MatchesGridOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    int n = 2 + static_cast<int>(seed % 11);
    int m = std::min(n * (n - 1) / 2, n - 1 + static_cast<int>(seed % 9));
    auto g = random_connected(n, m, 10, seed + 900);
    auto dt = all_pairs_distances(g);
    for (const Edge& e : g.edges()) {
      auto pairs = candidate_pairs(dt, e.u, e.v);
      auto gs = edge_center(g, dt, e.u, e.v);
      double step = 1e-3;
      double oracle = grid_min(pairs, e.w, step);
      EXPECT_LE(gs.localmin, oracle + 1e-9);
      EXPECT_GE(gs.localmin, oracle - step - 1e-9);
      EXPECT_NEAR(boundary_eval(pairs, e.w, gs.alpha), gs.localmin, 1e-12);
      for (int k = 0; k <= 20; ++k) {
        double a = e.w * k / 20.0;
        EXPECT_EQ(boundary_eval(pairs, e.w, a), separation(g, dt, GeneralNode::on_edge(e.u, e.v, a)));
      }
    }
  }
}

TEST(EdgeSkipBound, Examples) {
  auto g = path_au_uv();
  auto dt = all_pairs_distances(g);
  for (const Edge& e : g.edges()) EXPECT_FALSE(edge_skip_bound(dt, e.u, e.v, kInf));
  EXPECT_TRUE(edge_skip_bound(dt, 0, 1, 1.5));
  EXPECT_GE(edge_center(g, dt, 0, 1).localmin, 1.5);
}

TEST(EdgeSkipBound, IsLowerBoundOnEdgeMinimum) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = random_connected(8, 12, 9, seed + 77);
    auto dt = all_pairs_distances(g);
    double half_d = diameter_radius(g, dt).diameter / 2.0;
    for (const Edge& e : g.edges()) {
      double lm = edge_center(g, dt, e.u, e.v).localmin;
      double bound = 0.0;
      for (int z = 0; z < g.n(); ++z) bound = std::max(bound, std::min(dt.d(e.u, z), dt.d(e.v, z)));
      EXPECT_LE(bound, lm + 1e-9);
      EXPECT_GE(lm, half_d - 1e-9);
    }
  }
}

TEST(AbsoluteCenter, Examples) {
  auto e = absolute_center(path_graph({4.0}));
  EXPECT_EQ(e.location, GeneralNode::on_edge(0, 1, 2.0));
  EXPECT_EQ(e.separation, 2.0);
  auto p = absolute_center(path_au_uv());
  EXPECT_EQ(p.location, GeneralNode::on_edge(1, 2, 0.5));
  EXPECT_EQ(p.separation, 1.5);
  auto t = absolute_center(complete_graph(3));
  EXPECT_TRUE(t.location.is_vertex());
  EXPECT_EQ(t.separation, 1.0);
}

TEST(AbsoluteCenter, OrientationFollowsIds) {
  std::vector<std::uint64_t> ids{30, 20, 10};  // reversed
  auto c = absolute_center(path_au_uv(), {true, ids});
  // edge {1,2}: vertex 2 has the smaller id, alpha measured from it
  EXPECT_EQ(c.location, GeneralNode::on_edge(2, 1, 1.5));
  EXPECT_EQ(c.separation, 1.5);
}

TEST(AbsoluteCenter, SkipDoesNotChangeResult) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int n = 2 + static_cast<int>(seed % 11);
    int m = std::min(n * (n - 1) / 2, n - 1 + static_cast<int>(seed % 13));
    auto g = random_connected(n, m, 10, seed + 4000);
    auto dt = all_pairs_distances(g);
    auto a = absolute_center(g, dt, {true, {}});
    auto b = absolute_center(g, dt, {false, {}});
    EXPECT_EQ(a.separation, b.separation);
    EXPECT_EQ(a.location, b.location);
    auto bf = brute_force_center(g, dt, 1e-3);
    EXPECT_NEAR(a.separation, bf.separation, 1e-3);
    EXPECT_LE(a.separation, bf.separation + 1e-9);
    EXPECT_NEAR(separation(g, dt, a.location), a.separation, 1e-9);
    auto gm = diameter_radius(g, dt);
    EXPECT_GE(a.separation, gm.diameter / 2.0 - 1e-9);
  }
}

TEST(Mdst, Examples) {
  auto tri = complete_graph(3);
  auto r1 = solve_mdst(tri);
  EXPECT_EQ(r1.diameter, 2.0);
  EXPECT_EQ(r1.tree.edges.size(), 2u);
  auto c4 = cycle_graph(4);
  auto r2 = solve_mdst(c4);
  EXPECT_EQ(r2.diameter, 3.0);
  ASSERT_TRUE(is_spanning_tree(c4, r2.tree));
  EXPECT_FALSE(r2.center.location.is_vertex());
  auto tree = path_graph({1.0, 2.0, 3.0});
  std::vector<std::pair<int, int>> all{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(solve_mdst(tree).tree.edges, all);
}

TEST(BruteForceCenter, Examples) {
  auto e = path_graph({4.0});
  auto r = brute_force_center(e, all_pairs_distances(e), 0.1);
  EXPECT_NEAR(r.location.alpha, 2.0, 1e-9);
  EXPECT_NEAR(r.separation, 2.0, 1e-9);
  auto p = path_au_uv();
  EXPECT_NEAR(brute_force_center(p, all_pairs_distances(p), 1e-3).separation, 1.5, 1e-3);
  auto t = complete_graph(3);
  EXPECT_EQ(brute_force_center(t, all_pairs_distances(t), 0.25).separation, 1.0);
}

TEST(BruteForceMdst, Examples) {
  EXPECT_EQ(brute_force_mdst(complete_graph(3)), 2.0);
  EXPECT_EQ(brute_force_mdst(cycle_graph(4)), 3.0);
  EXPECT_EQ(brute_force_mdst(complete_graph(4)), 2.0);
  EXPECT_EQ(brute_force_mdst(WeightedGraph(1, {})), 0.0);
  EXPECT_THROW((void)brute_force_mdst(complete_graph(6)), GraphError);  // m = 15
}

TEST(Mdst, MatchesBruteForceAndBounds) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    int n = 2 + static_cast<int>(seed % 6);
    int m = std::min({n * (n - 1) / 2, n - 1 + static_cast<int>(seed % 7), kBruteForceMaxM});
    auto g = random_connected(n, m, 3, seed + 123);
    auto r = solve_mdst(g);
    EXPECT_EQ(r.diameter, brute_force_mdst(g)) << "seed " << seed;
    auto dt = all_pairs_distances(g);
    auto gm = diameter_radius(g, dt);
    EXPECT_LE(gm.diameter, r.diameter);
    EXPECT_LE(r.diameter, 2.0 * r.center.separation + 1e-9);
  }
}
