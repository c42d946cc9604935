#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <ctrlrob/generators.hpp>
#include <ctrlrob/metrics.hpp>

#include "oracles.hpp"

using namespace ctrlrob;

TEST(Heterogeneity, Examples) {
  EXPECT_EQ(heterogeneity(directed_cycle(9), DegreeSide::out).value, 1.0);
  EXPECT_EQ(heterogeneity(directed_cycle(9), DegreeSide::in).value, 1.0);
  EXPECT_DOUBLE_EQ(heterogeneity(out_star(4), DegreeSide::out).value, 4.0);
  EXPECT_THROW(heterogeneity(DirectedGraph(3), DegreeSide::out), std::domain_error);
}

TEST(HeterogeneityCurve, MatchesRecomputationOnSurvivors) {
  Rng gen(1);
  const auto g = oracle::random_graph(12, 0.25, gen);
  for (DegreeSide side : {DegreeSide::out, DegreeSide::in}) {
    const auto c = heterogeneity_curve(g, 77, 1, side);
    auto rng = stream_rng(77, 0);
    std::vector<NodeId> order(12);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> alive(12, 1);
    for (std::size_t i = 0; i < 12; ++i) {
      if (i > 0) alive[order[i - 1]] = 0;
      const auto h = induced_subgraph(g, alive);
      if (h.edge_count() == 0) {
        EXPECT_FALSE(c.defined(i));
        EXPECT_TRUE(std::isnan(c.mean[i]));
      } else {
        ASSERT_TRUE(c.defined(i));
        EXPECT_NEAR(c.mean[i], heterogeneity(h, side).value, 1e-12);
      }
    }
  }
}

TEST(HeterogeneityCurve, CycleStaysFlatThenGrows) {
  const auto c = heterogeneity_curve(directed_cycle(20), 3, 50, DegreeSide::out);
  EXPECT_EQ(c.mean[0], 1.0);
  EXPECT_LT(c.mean[1], 1.1);
  EXPECT_GT(c.mean[15], c.mean[1]);
}

TEST(HeterogeneityCurve, SfStartsAboveEr) {
  GeneratorParams p;
  p.nodes = 300;
  p.edges = 1500;
  p.seed = 2;
  p.model = Model::SF;
  const auto sf = heterogeneity_curve(generate(p), 1, 5, DegreeSide::out);
  p.model = Model::ER;
  const auto er = heterogeneity_curve(generate(p), 1, 5, DegreeSide::out);
  EXPECT_GT(sf.mean[0], er.mean[0]);
}

TEST(Disconnection, SixCycleExamples) {
  const auto g = directed_cycle(6);
  EXPECT_EQ(removals_to_disconnect(g, std::vector<NodeId>{0, 2, 1, 3, 4}), 2u);
  // Removing two adjacent nodes leaves one chain; removing 3 next splits it into {2} and {4, 5}.
  EXPECT_EQ(removals_to_disconnect(g, std::vector<NodeId>{0, 1, 3, 2, 4}), 3u);
  EXPECT_EQ(removals_to_disconnect(g, std::vector<NodeId>{0, 1, 2, 3, 4}), 5u);
}

TEST(Disconnection, AlreadyDisconnected) {
  const DirectedGraph g(4, {{0, 1}, {2, 3}});
  const auto r = disconnection_threshold(g, 1, 10);
  for (double x : r.thresholds) EXPECT_EQ(x, 0.0);
}

TEST(Disconnection, AgreesWithDirectRecomputation) {
  Rng gen(4);
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_graph(10, 0.2, gen);
    std::vector<NodeId> order(10);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), gen);
    std::size_t expect = 9;
    std::vector<char> alive(10, 1);
    for (std::size_t i = 0; i < 9; ++i) {
      if (i > 0) alive[order[i - 1]] = 0;
      if (weak_component_count(induced_subgraph(g, alive)) > 1) {
        expect = i;
        break;
      }
    }
    EXPECT_EQ(removals_to_disconnect(g, order), expect);
  }
}

TEST(Disconnection, DeterministicAndBounded) {
  const auto g = directed_cycle(30);
  const auto a = disconnection_threshold(g, 5, 40, 1);
  const auto b = disconnection_threshold(g, 5, 40, 3);
  EXPECT_EQ(a.removals, b.removals);
  for (auto r : a.removals) EXPECT_LE(r, 29u);
}

TEST(Boxplot, QuartilesAndOutliers) {
  const auto b = boxplot({1, 2, 3, 4, 5, 6, 7, 8, 100});
  EXPECT_DOUBLE_EQ(b.median, 5.0);
  EXPECT_DOUBLE_EQ(b.q1, 3.0);
  EXPECT_DOUBLE_EQ(b.q3, 7.0);
  EXPECT_DOUBLE_EQ(b.min, 1.0);
  EXPECT_DOUBLE_EQ(b.max, 8.0);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_EQ(b.outliers[0], 100.0);
}

TEST(DegreeDistribution, Examples) {
  EXPECT_EQ(degree_distribution(directed_cycle(5), DegreeSide::out), (DegreeHistogram{{1, 5}}));
  EXPECT_EQ(degree_distribution(out_star(4), DegreeSide::out), (DegreeHistogram{{0, 3}, {3, 1}}));
  Rng gen(6);
  const auto g = oracle::random_graph(15, 0.3, gen);
  std::size_t total = 0;
  for (auto [k, c] : degree_distribution(g, DegreeSide::in)) total += c;
  EXPECT_EQ(total, 15u);
}

TEST(Features, SixCycle) {
  const auto f = basic_features(directed_cycle(6));
  EXPECT_DOUBLE_EQ(f.average_degree, 1.0);
  EXPECT_DOUBLE_EQ(f.average_path_length, 3.0);
  EXPECT_DOUBLE_EQ(f.average_betweenness, 10.0);
  EXPECT_EQ(f.clustering, 0.0);
  EXPECT_EQ(f.heterogeneity_out, 1.0);
}

TEST(Features, UnreachablePairGivesInfinitePathLength) {
  EXPECT_EQ(average_path_length(directed_chain(4)), std::numeric_limits<double>::infinity());
}

TEST(Features, ClusteringOfTriangleShadow) {
  EXPECT_DOUBLE_EQ(clustering_coefficient(directed_cycle(3)), 1.0);
  // Triangle plus a pendant: 1 triangle, 5 connected triples.
  EXPECT_DOUBLE_EQ(clustering_coefficient(DirectedGraph(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}})), 3.0 / 5.0);
}

TEST(Features, PathStatisticsMatchPathEnumeration) {
  Rng gen(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + uniform_index(gen, 6);
    const auto g = oracle::random_graph(n, 0.2 + 0.1 * static_cast<double>(t % 5), gen);
    const auto ref = oracle::all_pairs_paths(g);
    const double apl = average_path_length(g);
    if (std::isinf(ref.apl)) EXPECT_TRUE(std::isinf(apl));
    else EXPECT_NEAR(apl, ref.apl, 1e-12);
    const auto bc = betweenness(g);
    for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(bc[v], ref.betweenness[v], 1e-9);
  }
}
