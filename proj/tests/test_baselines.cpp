#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "gsgan/baselines.hpp"
#include "checks.hpp"

using namespace gsgan;

namespace {

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  return Graph::from_edges(n, e);
}

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }
Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<NodeId>(i));
  return Graph::from_edges(leaves + 1, e);
}
Graph two_triangles() { return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

std::set<Edge> edge_set(const Graph& g) { return {g.edges().begin(), g.edges().end()}; }

bool is_subset(const Graph& sub, const Graph& g) {
  for (const Edge& e : sub.edges())
    if (!g.has_edge(e)) return false;
  return true;
}

}  // namespace

TEST(Jc, Examples) {
  EXPECT_EQ(sparsify_jc(complete(3), 3).edge_count(), 3u);
  EXPECT_EQ(edge_set(sparsify_jc(path3(), 1)), (std::set<Edge>{{0, 1}}));
  auto tt = sparsify_jc(two_triangles(), 6);
  EXPECT_FALSE(tt.has_edge(2, 3));
  EXPECT_EQ(tt.edge_count(), 6u);
  EXPECT_THROW(sparsify_jc(path3(), 3), std::invalid_argument);
}

TEST(Jc, RankingMatchesJaccard) {
  std::mt19937_64 rng(3);
  Graph g = oracle::random_graph(20, 0.3, rng);
  const auto ranking = jaccard_ranking(g);
  EXPECT_EQ(ranking.entries().size(), g.edge_count());
  for (const auto& r : ranking.entries()) EXPECT_EQ(r.score, jaccard(g, r.pair.u, r.pair.v));
}

TEST(Bc, Examples) {
  auto p = edge_betweenness<double>(path3());
  EXPECT_EQ(p, (std::vector<double>{2, 2}));
  auto k = edge_betweenness<double>(complete(3));
  EXPECT_EQ(k, (std::vector<double>{1, 1, 1}));
  auto s = edge_betweenness<double>(star(3));
  EXPECT_EQ(s, (std::vector<double>{3, 3, 3}));
  EXPECT_THROW(sparsify_bc(path3(), 3), std::invalid_argument);
}

TEST(Bc, TreeEdgesCountSeparatedPairs) {
  // path 0-1-2-3-4: edge (i,i+1) separates (i+1)(4-i) pairs
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(edge_betweenness<double>(g), (std::vector<double>{4, 6, 6, 4}));
}

TEST(Bc, ExhaustiveOracleOnSmallGraphs) {
  auto mismatch = checks::betweenness_oracle();
  EXPECT_FALSE(mismatch) << *mismatch;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    Graph g = oracle::random_graph(8, 0.5, rng);
    const auto expected = oracle::edge_betweenness(g);
    const auto approx = edge_betweenness<double>(g);
    for (std::size_t i = 0; i < approx.size(); ++i)
      ASSERT_NEAR(approx[i], oracle::to_double(expected[i]), 1e-12) << "seed " << seed;
  }
}

TEST(Random, IdentityAndSeeded) {
  std::mt19937_64 gen(4);
  Graph g = oracle::random_graph(20, 0.3, gen);
  Rng a(1), b(1);
  EXPECT_EQ(sparsify_random(g, g.edge_count(), a), g);
  Rng c(5), d(5);
  EXPECT_EQ(sparsify_random(g, 10, c), sparsify_random(g, 10, d));
  EXPECT_THROW(sparsify_random(g, g.edge_count() + 1, a), std::invalid_argument);
}

TEST(Random, UniformOverK4Edges) {
  Graph k4 = complete(4);
  Rng rng(11);
  std::map<Edge, int> hits;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) ++hits[sparsify_random(k4, 1, rng).edges().front()];
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(trials * p * (1 - p));
  ASSERT_EQ(hits.size(), 6u);
  for (const auto& [e, c] : hits) EXPECT_NEAR(c, trials * p, 3 * sigma);
}

TEST(LocalKeep, Formula) {
  EXPECT_EQ(local_keep_count(4, 0.5), 2u);
  EXPECT_EQ(local_keep_count(1, 0.5), 1u);
  EXPECT_EQ(local_keep_count(7, 1.0), 7u);
  EXPECT_EQ(local_keep_count(9, 0.5), 3u);
  EXPECT_EQ(local_keep_count(0, 0.5), 0u);
}

TEST(Lspar, ExponentOneKeepsEverything) {
  std::mt19937_64 gen(6);
  Graph g = oracle::random_graph(25, 0.2, gen);
  EXPECT_EQ(local_filter_union(g, jaccard_local_order(g), 1.0).size(), g.edge_count());
}

TEST(Lspar, StarHalfExponent) {
  Graph s = star(4);
  auto order = jaccard_local_order(s);
  EXPECT_EQ(local_keep_count(s.degree(0), 0.5), 2u);
  // center keeps 2, every leaf keeps its only edge, so the union is all 4
  EXPECT_EQ(local_filter_union(s, order, 0.5).size(), 4u);
}

TEST(Ld, StarLeavesKeepHub) {
  Graph s = star(5);
  auto order = degree_local_order(s);
  for (NodeId leaf = 1; leaf <= 5; ++leaf) EXPECT_EQ(order[static_cast<std::size_t>(leaf)].front(), 0);
  EXPECT_EQ(local_filter_union(s, order, 0.3).size(), 5u);
  EXPECT_EQ(local_filter_union(s, order, 1.0).size(), 5u);
}

TEST(Baselines, ExactBudgetSubsetDeterministic) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = oracle::random_graph(30, 0.15, gen);
    if (g.edge_count() == 0) continue;
    std::uniform_int_distribution<std::size_t> budget(0, g.edge_count());
    const std::size_t d = budget(gen);
    Rng r1(trial), r2(trial);
    for (const auto& [out, again] : {std::pair{sparsify_jc(g, d), sparsify_jc(g, d)},
                                     std::pair{sparsify_bc(g, d), sparsify_bc(g, d)},
                                     std::pair{sparsify_random(g, d, r1), sparsify_random(g, d, r2)},
                                     std::pair{sparsify_lspar(g, d), sparsify_lspar(g, d)},
                                     std::pair{sparsify_ld(g, d), sparsify_ld(g, d)}}) {
      EXPECT_EQ(out.edge_count(), d);
      EXPECT_EQ(out.node_count(), g.node_count());
      EXPECT_TRUE(is_subset(out, g));
      EXPECT_EQ(out, again);
    }
  }
}
