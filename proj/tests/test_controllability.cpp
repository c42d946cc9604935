#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <ctrlrob/controllability.hpp>
#include <ctrlrob/random.hpp>

#include "oracles.hpp"

using namespace ctrlrob;

TEST(StructuralDrivers, Examples) {
  EXPECT_EQ(structural_drivers(directed_cycle(6)).value, 1u);
  EXPECT_EQ(structural_drivers(DirectedGraph(4)).value, 4u);
  EXPECT_EQ(structural_drivers(out_star(4)).value, 3u);
  EXPECT_THROW(structural_drivers(DirectedGraph(0)), std::invalid_argument);
}

TEST(StructuralDrivers, MatchingResultInvariants) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto g = oracle::random_graph(1 + uniform_index(rng, 9), 0.3, rng);
    const auto m = maximum_matching(g);
    std::vector<int> tail_used(g.node_count(), 0), head_used(g.node_count(), 0);
    for (const auto& e : m.matched_pairs) {
      EXPECT_TRUE(g.has_edge(e.from, e.to));
      EXPECT_EQ(tail_used[e.from]++, 0);
      EXPECT_EQ(head_used[e.to]++, 0);
    }
    EXPECT_EQ(m.unmatched_nodes.size(), g.node_count() - m.size());
    for (NodeId v : m.unmatched_nodes) EXPECT_EQ(head_used[v], 0);
  }
}

TEST(StructuralDrivers, AgreesWithBruteForceMatching) {
  Rng rng(17);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 7);
    const auto g = oracle::random_graph(n, 0.1 + 0.1 * static_cast<double>(uniform_index(rng, 6)), rng);
    const std::size_t expect = std::max<std::size_t>(1, n - oracle::max_matching_brute_force(g));
    EXPECT_EQ(structural_drivers(g).value, expect);
  }
}

TEST(StructuralDrivers, InvariantUnderRelabeling) {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto g = oracle::random_graph(8, 0.2, rng);
    std::vector<NodeId> perm(8);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(structural_drivers(g).value, structural_drivers(relabel(g, perm)).value);
  }
}

TEST(MatchingEngine, IncrementalRemovalMatchesRebuild) {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    const auto g = oracle::random_graph(30, 0.08, rng);
    MatchingEngine engine(g);
    std::vector<NodeId> order(30);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> alive(30, 1);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      engine.remove(order[i]);
      alive[order[i]] = 0;
      EXPECT_EQ(engine.driver_count(), structural_drivers(induced_subgraph(g, alive)).value);
    }
  }
}

TEST(MatchingEngine, RejectsDeadNode) {
  const auto g = directed_cycle(3);
  MatchingEngine e(g);
  e.remove(1);
  EXPECT_THROW(e.remove(1), std::invalid_argument);
}

TEST(ExactDrivers, Examples) {
  EXPECT_EQ(adjacency_rank(directed_cycle(6)), 6u);
  EXPECT_EQ(exact_drivers(directed_cycle(6)).value, 1u);
  EXPECT_EQ(exact_drivers(DirectedGraph(4)).value, 4u);
  EXPECT_EQ(adjacency_rank(directed_chain(5)), 4u);
  EXPECT_EQ(exact_drivers(directed_chain(5)).value, 1u);
  EXPECT_THROW(exact_drivers(DirectedGraph(0)), std::invalid_argument);
}

TEST(ExactDrivers, RankAgreesWithRationalElimination) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto g = oracle::random_graph(1 + uniform_index(rng, 8), 0.35, rng);
    EXPECT_EQ(adjacency_rank(g), oracle::rational_rank(adjacency_matrix(g)));
  }
}

TEST(ExactDrivers, ModularPathAgreesWithBigIntegerPath) {
  Rng rng(37);
  for (int t = 0; t < 6; ++t) {
    const auto g = oracle::random_graph(70, 0.03 + 0.02 * t, rng);
    const auto a = adjacency_matrix(g);
    const std::size_t exact = exact_rank(a);
    EXPECT_EQ(modular_rank(a, kRankPrimeA), exact);
    EXPECT_EQ(modular_rank(a, kRankPrimeB), exact);
    EXPECT_EQ(adjacency_rank(g), exact);
  }
}

TEST(ExactDrivers, ModularRankCanDropForSmallPrime) {
  // det [[1,1],[1,-1]] = -2, so the rank over GF(2) is 1 while over Q it is 2.
  const DenseMatrix m{{1, 1}, {1, -1}};
  EXPECT_EQ(exact_rank(m), 2u);
  EXPECT_EQ(modular_rank(m, 2), 1u);
}

TEST(DriverCount, Bounds) {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const auto g = oracle::random_graph(1 + uniform_index(rng, 10), 0.3, rng);
    for (auto c : {Criterion::structural, Criterion::exact}) {
      const auto d = driver_count(g, c);
      EXPECT_GE(d.value, 1u);
      EXPECT_LE(d.value, g.node_count());
      EXPECT_EQ(d.criterion, c);
    }
  }
}

TEST(NdDensity, Examples) {
  EXPECT_EQ(nd_density({1, Criterion::structural}, 6), Rational(1, 6));
  EXPECT_EQ(nd_density({4, Criterion::structural}, 4), Rational(1));
  EXPECT_EQ(nd_density({3, Criterion::structural}, 4), Rational(3, 4));
  EXPECT_THROW(nd_density({1, Criterion::structural}, 0), std::invalid_argument);
}

TEST(Criterion, Parse) {
  EXPECT_EQ(parse_criterion("exact"), Criterion::exact);
  EXPECT_EQ(parse_criterion("structural"), Criterion::structural);
  EXPECT_THROW(parse_criterion("fuzzy"), std::invalid_argument);
}
