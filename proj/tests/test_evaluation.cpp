#include <gtest/gtest.h>

#include <sstream>

#include "gsgan/community.hpp"
#include "gsgan/partition.hpp"
#include "gsgan/sbm.hpp"
#include "checks.hpp"

using namespace gsgan;

using checks::random_partition;

namespace {

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  return Graph::from_edges(n, e);
}

Graph two_triangles() { return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

Partition labels(std::vector<std::int64_t> l) { return Partition{std::move(l)}; }


}  // namespace

TEST(Ari, WorkedExamples) {
  auto mismatch = checks::ari_worked_examples();
  EXPECT_FALSE(mismatch) << *mismatch;
  EXPECT_THROW(ari(labels({0, 1}), labels({0})), std::invalid_argument);
}

TEST(Ari, OracleErrorBound) { EXPECT_LT(checks::ari_oracle_error(), 1e-12); }

TEST(Ari, MatchesPairCountingOracle) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = size(rng);
    auto a = random_partition(n, rng);
    auto b = random_partition(n, rng);
    const double got = ari(a, b);
    EXPECT_NEAR(got, oracle::pair_counting_ari(a, b), 1e-12) << trial;
    EXPECT_EQ(got, ari(b, a));
    if (a.community_count() > 1 && a.community_count() < n) EXPECT_EQ(ari(a, a), 1.0);
  }
}

TEST(Modularity, Examples) {
  EXPECT_EQ(modularity(two_triangles(), Partition::single_block(6)), 0.0);
  // m=7, each side holds 3 edges and degree 7: 2 (3/7 - 1/4) = 5/14
  const auto split = labels({0, 0, 0, 1, 1, 1});
  EXPECT_NEAR(modularity(two_triangles(), split), 5.0 / 14.0, 1e-15);
  EXPECT_NEAR(oracle::modularity(two_triangles(), split), 5.0 / 14.0, 1e-15);
  EXPECT_NEAR(modularity(complete(3), Partition::singletons(3)), -1.0 / 3.0, 1e-15);
  EXPECT_EQ(modularity(Graph::from_edges(3, {}), Partition::singletons(3)), 0.0);
  EXPECT_THROW(modularity(complete(3), Partition::singletons(2)), std::invalid_argument);
}

TEST(Modularity, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = oracle::random_graph(size(rng), 0.25, rng);
    auto p = random_partition(g.node_count(), rng);
    const double q = modularity(g, p);
    EXPECT_NEAR(q, oracle::modularity(g, p), 1e-12);
    EXPECT_GE(q, -0.5);
    EXPECT_LT(q, 1.0);
  }
}

TEST(Louvain, EdgelessGivesSingletons) {
  Rng rng(1);
  EXPECT_EQ(louvain(Graph::from_edges(4, {}), rng).community_count(), 4u);
  EXPECT_EQ(louvain(Graph::from_edges(0, {}), rng).size(), 0u);
}

TEST(Louvain, FindsExhaustiveOptimum) {
  Partition best;
  oracle::best_modularity(two_triangles(), &best);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(louvain(two_triangles(), rng).normalized(), best.normalized());
  }
  oracle::best_modularity(complete(5), &best);
  EXPECT_EQ(best.community_count(), 1u);
  Rng rng(3);
  EXPECT_EQ(louvain(complete(5), rng).community_count(), 1u);
}

TEST(LabelPropagation, Examples) {
  Rng rng(1);
  EXPECT_EQ(label_propagation(Graph::from_edges(3, {}), rng).community_count(), 3u);
  std::vector<Edge> e;
  for (NodeId base : {0, 4})
    for (NodeId u = 0; u < 4; ++u)
      for (NodeId v = u + 1; v < 4; ++v) e.emplace_back(base + u, base + v);
  Graph k4k4 = Graph::from_edges(8, e);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    auto p = label_propagation(k4k4, r).normalized();
    EXPECT_EQ(p, labels({0, 0, 0, 0, 1, 1, 1, 1}));
    Rng k(seed);
    EXPECT_EQ(label_propagation(complete(3), k).community_count(), 1u);
  }
}

TEST(LabelPropagation, ConvergedLabelsAreLocalMajorities) {
  std::mt19937_64 gen(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = oracle::random_graph(40, 0.1, gen);
    Rng rng(seed);
    auto p = label_propagation(g, rng);
    for (std::size_t u = 0; u < g.node_count(); ++u) {
      const auto& adj = g.neighbors(static_cast<NodeId>(u));
      if (adj.empty()) continue;
      std::map<std::int64_t, int> freq;
      for (NodeId v : adj) ++freq[p.labels[static_cast<std::size_t>(v)]];
      int top = 0;
      for (auto [l, c] : freq) top = std::max(top, c);
      EXPECT_EQ(freq[p.labels[u]], top) << "seed " << seed << " node " << u;
    }
  }
}

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_modularity(Graph::from_edges(4, {})).community_count(), 4u);
  Partition best;
  oracle::best_modularity(two_triangles(), &best);
  EXPECT_EQ(greedy_modularity(two_triangles()).normalized(), best.normalized());
  EXPECT_EQ(greedy_modularity(Graph::from_edges(2, {{0, 1}})).community_count(), 1u);
  EXPECT_EQ(greedy_modularity(two_triangles()), greedy_modularity(two_triangles()));
}

TEST(Detection, NeverWorseThanSingletons) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = oracle::random_graph(30, 0.15, gen);
    const double base = modularity(g, Partition::singletons(g.node_count()));
    Rng rng(trial);
    EXPECT_GE(modularity(g, louvain(g, rng)), base - 1e-12);
    EXPECT_GE(modularity(g, greedy_modularity(g)), base - 1e-12);
  }
}

TEST(Detection, SmallGraphsReachExhaustiveOptimum) {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_graph(8, 0.4, gen);
    if (g.edge_count() == 0) continue;
    const double best = oracle::best_modularity(g);
    EXPECT_LE(modularity(g, greedy_modularity(g)), best + 1e-12);
    Rng rng(trial);
    EXPECT_LE(modularity(g, louvain(g, rng)), best + 1e-12);
  }
}

TEST(Detection, SeededDispatchIsDeterministic) {
  SBMSpec spec;
  spec.block_sizes = {50, 50};
  spec.seed = 3;
  Graph g = sbm_generate(spec).graph;
  for (auto algo : {DetectionAlgorithm::Louvain, DetectionAlgorithm::LabelPropagation, DetectionAlgorithm::Greedy})
    EXPECT_EQ(detect(g, algo, 11), detect(g, algo, 11)) << to_string(algo);
  EXPECT_EQ(parse_detection_algorithm("labelprop"), DetectionAlgorithm::LabelPropagation);
  EXPECT_THROW(parse_detection_algorithm("spectral"), InputError);
}

TEST(Timing, NonNegativeAndScalesWithSize) {
  auto run = [](std::size_t blocks) {
    SBMSpec spec;
    spec.block_sizes.assign(blocks, 100);
    spec.p_in = 0.1;
    spec.p_out = 0.001;
    spec.seed = 1;
    Graph g = sbm_generate(spec).graph;
    std::vector<double> t;
    for (int k = 0; k < 5; ++k) {
      auto [p, secs] = timed([&] { return detect(g, DetectionAlgorithm::LabelPropagation, 1); });
      EXPECT_GE(secs, 0.0);
      t.push_back(secs);
    }
    return median(t);
  };
  EXPECT_GE(run(50), run(5));
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}
