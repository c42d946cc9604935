#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include <ctrlrob/graph.hpp>
#include <ctrlrob/random.hpp>

using namespace ctrlrob;

namespace {

DirectedGraph random_graph(std::size_t n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && coin(rng)) edges.push_back({u, v});
  return DirectedGraph(n, edges);
}

std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), NodeId{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST(Degrees, CycleIsOneRegular) {
  const auto d = degrees(directed_cycle(6));
  EXPECT_EQ(d.in, std::vector<std::size_t>(6, 1));
  EXPECT_EQ(d.out, std::vector<std::size_t>(6, 1));
}

TEST(Degrees, OutStar) {
  const auto d = degrees(out_star(4));
  EXPECT_EQ(d.out, (std::vector<std::size_t>{3, 0, 0, 0}));
  EXPECT_EQ(d.in, (std::vector<std::size_t>{0, 1, 1, 1}));
}

TEST(Degrees, EmptyGraph) {
  const auto d = degrees(DirectedGraph(3));
  EXPECT_EQ(d.in, std::vector<std::size_t>(3, 0));
  EXPECT_EQ(d.out, std::vector<std::size_t>(3, 0));
}

TEST(Graph, RejectsSelfLoopsAndCollapsesDuplicates) {
  EXPECT_THROW(DirectedGraph(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(DirectedGraph(3, {{0, 3}}), std::out_of_range);
  const DirectedGraph g(3, {{0, 1}, {0, 1}, {1, 2}});
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Graph, SparsityQuery) {
  EXPECT_TRUE(DirectedGraph(100, {{0, 1}}).is_sparse());
  EXPECT_FALSE(complete_digraph(4).is_sparse());
}

TEST(RemoveNode, CycleBecomesChain) {
  const auto g = remove_node(directed_cycle(6), 0);
  // Node k+1 becomes k, so the surviving arcs 1->2..4->5 form the chain 0->1->2->3->4.
  EXPECT_EQ(g, directed_chain(5));
}

TEST(RemoveNode, SingleNodeToEmpty) {
  const auto g = remove_node(DirectedGraph(1), 0);
  EXPECT_EQ(g.node_count(), 0u);
}

TEST(RemoveNode, StarCenter) {
  const auto g = remove_node(out_star(4), 0);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(RemoveNode, OutOfRange) { EXPECT_THROW(remove_node(directed_cycle(3), 3), std::out_of_range); }

TEST(RemoveNode, RemovesExactlyIncidentEdgesAndDegreesMatch) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_graph(7, 0.4, rng);
    const NodeId v = static_cast<NodeId>(uniform_index(rng, 7));
    const auto h = remove_node(g, v);
    EXPECT_EQ(h.edge_count(), g.edge_count() - g.in_degree(v) - g.out_degree(v));
    // Degrees of survivors: original degree minus arcs to or from v.
    const auto d = degrees(h);
    for (NodeId u = 0; u < 7; ++u) {
      if (u == v) continue;
      const NodeId w = u < v ? u : u - 1;
      EXPECT_EQ(d.out[w], g.out_degree(u) - (g.has_edge(u, v) ? 1 : 0));
      EXPECT_EQ(d.in[w], g.in_degree(u) - (g.has_edge(v, u) ? 1 : 0));
    }
  }
}

TEST(WeakConnectivity, Examples) {
  EXPECT_TRUE(is_weakly_connected(directed_cycle(6)));
  EXPECT_FALSE(is_weakly_connected(DirectedGraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})));
  EXPECT_TRUE(is_weakly_connected(directed_chain(3)));
  EXPECT_THROW(is_weakly_connected(DirectedGraph(0)), std::invalid_argument);
}

TEST(CanonicalForm, CycleLabelings) {
  const DirectedGraph a(3, {{0, 1}, {1, 2}, {2, 0}});
  const DirectedGraph b(3, {{0, 2}, {2, 1}, {1, 0}});
  EXPECT_EQ(canonical_form(a), canonical_form(b));
  EXPECT_NE(canonical_form(a), canonical_form(directed_chain(3)));
}

TEST(CanonicalForm, AllElevenEdgeFourNodeGraphsCoincide) {
  std::set<std::uint64_t> codes;
  const auto full = complete_digraph(4);
  for (const auto& missing : full.edges()) {
    std::vector<Edge> edges;
    for (const auto& e : full.edges())
      if (!(e == missing)) edges.push_back(e);
    codes.insert(canonical_form(DirectedGraph(4, edges)).code);
  }
  EXPECT_EQ(codes.size(), 1u);
}

TEST(CanonicalForm, InvariantUnderRandomRelabeling) {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    const auto g = random_graph(n, 0.45, rng);
    const auto perm = random_permutation(n, rng);
    EXPECT_EQ(canonical_form(g), canonical_form(relabel(g, perm)));
  }
}

TEST(CanonicalForm, DistinguishesNonIsomorphicGraphs) {
  // Oracle: two graphs are isomorphic iff some permutation maps one edge set onto the other.
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_graph(5, 0.35, rng);
    const auto b = random_graph(5, 0.35, rng);
    std::vector<NodeId> perm(5);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    bool iso = false;
    do {
      if (relabel(a, perm) == b) iso = true;
    } while (!iso && std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(iso, canonical_form(a) == canonical_form(b));
  }
}

TEST(CanonicalForm, RoundTripAndSizeGuard) {
  const auto g = directed_cycle(5);
  const auto form = canonical_form(g);
  EXPECT_EQ(canonical_form(from_canonical_form(form)), form);
  EXPECT_EQ(canonical_representative(g), from_canonical_form(form));
  EXPECT_THROW(canonical_form(DirectedGraph(9)), std::invalid_argument);
}
