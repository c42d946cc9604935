#include <gtest/gtest.h>

#include <ctrlrob/enc_rer.hpp>
#include <ctrlrob/generators.hpp>
#include <ctrlrob/metrics.hpp>

#include "oracles.hpp"

using namespace ctrlrob;

TEST(EncBounds, Examples) {
  EXPECT_EQ(enc_bounds(1000, 5000).lower, 5u);
  EXPECT_EQ(enc_bounds(1000, 5000).upper, 5u);
  EXPECT_EQ(enc_bounds(4, 6).lower, 1u);
  EXPECT_EQ(enc_bounds(4, 6).upper, 2u);
  EXPECT_EQ(enc_bounds(5, 10).lower, 2u);
  EXPECT_EQ(enc_bounds(5, 10).upper, 2u);
  EXPECT_THROW(enc_bounds(0, 0), std::invalid_argument);
}

TEST(CheckEnc, CycleSatisfied) { EXPECT_TRUE(check_enc(directed_cycle(7)).satisfied()); }

TEST(CheckEnc, OutStarViolated) {
  const auto r = check_enc(out_star(4));
  EXPECT_FALSE(r.satisfied());
  EXPECT_EQ(r.bounds.lower, 0u);
  EXPECT_EQ(r.bounds.upper, 1u);
  ASSERT_EQ(r.violation_count(), 1u);
  EXPECT_EQ(r.violations[0].node, 0u);
  EXPECT_EQ(r.violations[0].side, DegreeSide::out);
  EXPECT_EQ(r.violations[0].degree, 3u);
  EXPECT_FALSE(r.violations[0].below);
}

TEST(CheckEnc, ListedDegreesLieOutsideBand) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_graph(9, 0.3, rng);
    const auto r = check_enc(g);
    for (const auto& v : r.violations) EXPECT_FALSE(r.bounds.contains(v.degree));
    EXPECT_EQ(r.satisfied(), violation_mass(g) == 0);
  }
}

TEST(RerStep, DonatesSurplusOutEdge) {
  const DirectedGraph g(5, {{0, 1}, {0, 2}, {2, 3}, {3, 4}, {4, 0}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = make_rng(seed);
    const auto r = rer_step(g, rng);
    EXPECT_EQ(degrees(r.graph).out, std::vector<std::size_t>(5, 1));
    EXPECT_EQ(r.graph.edge_count(), 5u);
    EXPECT_TRUE(r.operation.rule == 1 || r.operation.rule == 2);
    EXPECT_EQ(r.operation.added, (Edge{1, 2}));
  }
}

TEST(RerStep, RejectsSatisfiedGraph) {
  auto rng = make_rng(0);
  EXPECT_THROW(rer_step(directed_cycle(5), rng), std::logic_error);
}

TEST(RerStep, BandPartnersAvoidStall) {
  // Bounds [0, 1]: node 0 has out-degree 2 but nobody lies strictly below the band.
  const DirectedGraph g(3, {{0, 1}, {0, 2}});
  RerOptions strict;
  strict.band_partners = false;
  auto rng = make_rng(0);
  EXPECT_THROW(rer_step(g, rng, strict), RectificationStalled);
  const auto r = rectify(g, RerBudget::unlimited(), 0, strict);
  EXPECT_EQ(r.trace.terminal, RerTermination::stalled);
  EXPECT_EQ(r.trace.applied, 0u);

  const auto fixed = rer_step(g, rng);
  EXPECT_TRUE(check_enc(fixed.graph).satisfied());
}

TEST(RerStep, ConservesCountsAndMovesOneEndpoint) {
  Rng gen(3);
  for (int t = 0; t < 200; ++t) {
    const auto g = oracle::random_graph(10, 0.25, gen);
    if (g.edge_count() == 0 || check_enc(g).satisfied()) continue;
    auto rng = make_rng(static_cast<std::uint64_t>(t));
    const auto before_mass = violation_mass(g);
    const auto r = rer_step(g, rng);
    EXPECT_EQ(r.graph.node_count(), g.node_count());
    EXPECT_EQ(r.graph.edge_count(), g.edge_count());
    EXPECT_TRUE(g.has_edge(r.operation.deleted.from, r.operation.deleted.to));
    EXPECT_FALSE(g.has_edge(r.operation.added.from, r.operation.added.to));
    EXPECT_TRUE(r.graph.has_edge(r.operation.added.from, r.operation.added.to));
    const bool same_tail = r.operation.deleted.from == r.operation.added.from;
    const bool same_head = r.operation.deleted.to == r.operation.added.to;
    EXPECT_NE(same_tail, same_head);
    EXPECT_LT(violation_mass(r.graph), before_mass);
  }
}

TEST(Rectify, CycleNeedsNothing) {
  const auto r = rectify(directed_cycle(8), RerBudget::of(10), 1);
  EXPECT_EQ(r.trace.applied, 0u);
  EXPECT_EQ(r.trace.terminal, RerTermination::enc_satisfied);
}

TEST(Rectify, UnlimitedReachesEncAndUnitHeterogeneity) {
  GeneratorParams p;
  p.model = Model::SF;
  p.nodes = 200;
  p.edges = 1000;
  p.seed = 4;
  const auto g = generate(p);
  const auto r = rectify(g, RerBudget::unlimited(), 9);
  EXPECT_EQ(r.trace.terminal, RerTermination::enc_satisfied);
  EXPECT_TRUE(check_enc(r.graph).satisfied());
  EXPECT_EQ(r.trace.operations.size(), r.trace.applied);
  EXPECT_EQ(heterogeneity(r.graph, DegreeSide::out).value, 1.0);
  EXPECT_EQ(heterogeneity(r.graph, DegreeSide::in).value, 1.0);
}

TEST(Rectify, BudgetIsRespectedAndDeterministic) {
  Rng gen(5);
  const auto g = oracle::random_graph(60, 0.1, gen);
  const auto a = rectify(g, RerBudget::of(7), 42);
  const auto b = rectify(g, RerBudget::of(7), 42);
  EXPECT_EQ(a.trace.applied, 7u);
  EXPECT_EQ(a.trace.terminal, RerTermination::budget_exhausted);
  EXPECT_EQ(a.graph, b.graph);
  // A larger budget with the same seed continues the same trajectory.
  const auto c = rectify(g, RerBudget::of(12), 42);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(a.trace.operations[k].added, c.trace.operations[k].added);
}

TEST(Rectify, IndivisibleEdgeCountTerminates) {
  Rng gen(8);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(15, 0.2, gen);
    const auto r = rectify(g, RerBudget::unlimited(), static_cast<std::uint64_t>(t));
    EXPECT_EQ(r.trace.terminal, RerTermination::enc_satisfied) << t;
    EXPECT_TRUE(check_enc(r.graph).satisfied());
  }
}

TEST(RerBudget, Parse) {
  EXPECT_TRUE(RerBudget::parse("unlimited").is_unlimited());
  EXPECT_EQ(RerBudget::parse("500"), RerBudget::of(500));
  EXPECT_EQ(RerBudget::unlimited().cap(), 1'000'000'000u);
  EXPECT_THROW(RerBudget::parse("-3"), std::invalid_argument);
  EXPECT_THROW(RerBudget::parse("ten"), std::invalid_argument);
}
