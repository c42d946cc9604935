#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "mutable_graph.hpp"
#include "random.hpp"

namespace ctrlrob {

enum class Model : std::uint8_t { ER, SW, SF, QSN, RTN, RRN };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::ER: return "ER";
    case Model::SW: return "SW";
    case Model::SF: return "SF";
    case Model::QSN: return "QSN";
    case Model::RTN: return "RTN";
    case Model::RRN: return "RRN";
  }
  return "?";
}

inline Model parse_model(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Model m : {Model::ER, Model::SW, Model::SF, Model::QSN, Model::RTN, Model::RRN})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown model '" + s + "' (expected ER, SW, SF, QSN, RTN or RRN)");
}

struct GeneratorParams {
  Model model{Model::ER};
  std::size_t nodes{0};
  std::size_t edges{0};
  std::size_t sw_neighbors{2};        // K: ring neighbours on each side
  double sf_sigma{0.999};             // weight exponent; degree exponent is 1 + 1/sigma
  double sf_theta{1.0};               // weight offset
  std::optional<double> qsn_q;        // snapback probability; solved from (N, M) when unset
  std::size_t qsn_layer{2};           // r: snapback stride
  std::uint64_t seed{0};

  /// p_RG = M / (N(N-1)).
  double p_rg() const {
    if (nodes < 2) return 0.0;
    return static_cast<double>(edges) / (static_cast<double>(nodes) * static_cast<double>(nodes - 1));
  }

  void validate() const {
    if (nodes == 0) throw std::invalid_argument("generator: node count must be positive");
    const std::size_t max_edges = nodes * (nodes - 1);
    if (edges > max_edges)
      throw std::invalid_argument("generator: " + std::to_string(edges) + " edges exceed N(N-1) = " +
                                  std::to_string(max_edges));
    if (!(sf_sigma >= 0.0 && sf_sigma < 1.0))
      throw std::invalid_argument("generator: sigma must lie in [0, 1)");
    if (!(sf_theta > -1.0)) throw std::invalid_argument("generator: theta must exceed -1");
    if (qsn_q && !(*qsn_q >= 0.0 && *qsn_q <= 1.0))
      throw std::invalid_argument("generator: q must lie in [0, 1]");
    if (qsn_layer == 0) throw std::invalid_argument("generator: QSN layer must be positive");
    if (sw_neighbors == 0) throw std::invalid_argument("generator: SW neighbour count must be positive");
  }
};

namespace detail {

inline void check_edge_target(std::size_t n, std::size_t m) {
  if (n != 0 && m > n * (n - 1))
    throw std::invalid_argument("edge target " + std::to_string(m) + " exceeds N(N-1) = " +
                                std::to_string(n * (n - 1)));
}

/// Adds k distinct absent ordered pairs, uniformly among the absent pairs.
inline void add_uniform_edges(MutableDigraph& g, std::size_t k, Rng& rng) {
  const std::size_t n = g.node_count();
  const std::size_t absent = n * (n - 1) - g.edge_count();
  if (k > absent) throw std::invalid_argument("not enough absent pairs to add");
  if (k == 0) return;
  if (absent >= 4 * k) {
    // rejection sampling: every absent pair is equally likely at each draw
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    while (k > 0) {
      const NodeId u = node(rng);
      const NodeId v = node(rng);
      if (u == v || g.has(u, v)) continue;
      g.add(u, v);
      --k;
    }
    return;
  }
  std::vector<Edge> pool;
  pool.reserve(absent);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && !g.has(u, v)) pool.push_back({u, v});
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
    g.add(pool[i].from, pool[i].to);
  }
}

/// Removes k present edges chosen uniformly.
inline void remove_uniform_edges(MutableDigraph& g, std::size_t k, Rng& rng) {
  if (k == 0) return;
  std::vector<Edge> pool;
  pool.reserve(g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.out(u)) pool.push_back({u, v});
  std::sort(pool.begin(), pool.end());  // insertion history must not leak into the draw
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
    g.erase(pool[i].from, pool[i].to);
  }
}

inline void adjust_edges(MutableDigraph& g, std::size_t target, Rng& rng) {
  check_edge_target(g.node_count(), target);
  if (g.edge_count() < target) add_uniform_edges(g, target - g.edge_count(), rng);
  else remove_uniform_edges(g, g.edge_count() - target, rng);
}

inline void add_if_absent(MutableDigraph& g, NodeId u, NodeId v) {
  if (u != v && !g.has(u, v)) g.add(u, v);
}

/// Distinct undirected neighbours of v.
inline std::vector<NodeId> neighbours(const MutableDigraph& g, NodeId v) {
  std::vector<NodeId> out = g.out(v);
  for (NodeId u : g.in(v))
    if (!g.has(v, u)) out.push_back(u);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool adjacent(const MutableDigraph& g, NodeId a, NodeId b) { return g.has(a, b) || g.has(b, a); }

// Growth models count "do nothing" draws; past this many the remainder is
// filled by uniform additions.
inline constexpr std::size_t kGrowthRetryCap = 1'000'000;

}  // namespace detail

/// Adds or removes uniformly random edges until the graph has exactly m_target edges.
inline DirectedGraph adjust_edge_count(const DirectedGraph& g, std::size_t m_target, Rng& rng) {
  detail::MutableDigraph work(g);
  detail::adjust_edges(work, m_target, rng);
  return work.freeze();
}

inline DirectedGraph adjust_edge_count(const DirectedGraph& g, std::size_t m_target, std::uint64_t seed) {
  auto rng = make_rng(seed);
  return adjust_edge_count(g, m_target, rng);
}

/// Erdos-Renyi: every unordered pair gets one edge of random direction with probability p_RG.
inline DirectedGraph gen_er(const GeneratorParams& p) {
  p.validate();
  auto rng = make_rng(p.seed);
  detail::MutableDigraph g(p.nodes);
  std::bernoulli_distribution connect(p.p_rg());
  std::bernoulli_distribution forward(0.5);
  for (NodeId i = 0; i < p.nodes; ++i)
    for (NodeId j = i + 1; j < p.nodes; ++j)
      if (connect(rng)) {
        if (forward(rng)) g.add(i, j);
        else g.add(j, i);
      }
  detail::adjust_edges(g, p.edges, rng);
  return g.freeze();
}

/// Newman-Watts small world: ring with edges i -> i+k (k = 1..K), then uniform additions.
inline DirectedGraph gen_sw(const GeneratorParams& p) {
  p.validate();
  const std::size_t base = p.sw_neighbors * p.nodes;
  if (p.nodes <= 2 * p.sw_neighbors)
    throw std::invalid_argument("SW: need N > 2K for a simple base ring");
  if (p.edges < base)
    throw std::invalid_argument("SW: M = " + std::to_string(p.edges) + " is below the " +
                                std::to_string(base) + " base ring edges");
  auto rng = make_rng(p.seed);
  detail::MutableDigraph g(p.nodes);
  for (std::size_t i = 0; i < p.nodes; ++i)
    for (std::size_t k = 1; k <= p.sw_neighbors; ++k)
      g.add(static_cast<NodeId>(i), static_cast<NodeId>((i + k) % p.nodes));
  detail::add_uniform_edges(g, p.edges - base, rng);
  return g.freeze();
}

/// Weight of 1-based node i in the scale-free model: (i + theta)^(-sigma).
inline double sf_weight(std::size_t i, double sigma, double theta) {
  return std::pow(static_cast<double>(i) + theta, -sigma);
}

/// Static scale-free model: tails and heads drawn in proportion to node weights.
inline DirectedGraph gen_sf(const GeneratorParams& p) {
  p.validate();
  if (p.nodes < 2 && p.edges > 0) throw std::invalid_argument("SF: need at least 2 nodes");
  auto rng = make_rng(p.seed);
  std::vector<double> weights(p.nodes);
  for (std::size_t i = 0; i < p.nodes; ++i) weights[i] = sf_weight(i + 1, p.sf_sigma, p.sf_theta);
  std::discrete_distribution<NodeId> pick(weights.begin(), weights.end());
  detail::MutableDigraph g(p.nodes);
  std::size_t misses = 0;
  while (g.edge_count() < p.edges && misses < detail::kGrowthRetryCap) {
    const NodeId i = pick(rng);
    NodeId j = pick(rng);
    while (j == i) j = pick(rng);
    if (g.has(i, j)) {
      ++misses;
      continue;
    }
    g.add(i, j);
  }
  detail::adjust_edges(g, p.edges, rng);
  return g.freeze();
}

/// Number of (node, stride) snapback candidates for the one-layer QSN.
inline std::size_t qsn_candidate_count(std::size_t n, std::size_t r) {
  std::size_t count = 0;
  for (std::size_t i = r + 1; i <= n; ++i) count += (i - 1) / r;  // l with i - l*r >= 1
  return count;
}

/// q giving an expected N-1 + q*C = M edges before adjustment, clamped to [0, 1].
inline double qsn_solved_q(std::size_t n, std::size_t m, std::size_t r) {
  const std::size_t c = qsn_candidate_count(n, r);
  if (c == 0 || m + 1 <= n) return 0.0;
  return std::clamp(static_cast<double>(m - (n - 1)) / static_cast<double>(c), 0.0, 1.0);
}

/// q-snapback network: chain 1 -> 2 -> ... -> N plus backward edges i -> i - l*r.
inline DirectedGraph gen_qsn(const GeneratorParams& p) {
  p.validate();
  auto rng = make_rng(p.seed);
  const double q = p.qsn_q.value_or(qsn_solved_q(p.nodes, p.edges, p.qsn_layer));
  std::bernoulli_distribution snap(q);
  detail::MutableDigraph g(p.nodes);
  for (std::size_t i = 1; i < p.nodes; ++i) g.add(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  // 1-based node i has id i-1
  for (std::size_t i = p.qsn_layer + 1; i <= p.nodes; ++i)
    for (std::size_t l = 1; l * p.qsn_layer < i; ++l)
      if (snap(rng)) detail::add_if_absent(g, static_cast<NodeId>(i - 1), static_cast<NodeId>(i - l * p.qsn_layer - 1));
  detail::adjust_edges(g, p.edges, rng);
  return g.freeze();
}

/// Random triangle network grown by directed triangle closure from a seed triangle.
inline DirectedGraph gen_rtn(const GeneratorParams& p) {
  p.validate();
  if (p.nodes < 3) throw std::invalid_argument("RTN: need at least 3 nodes");
  auto rng = make_rng(p.seed);
  detail::MutableDigraph g(p.nodes);
  g.add(0, 1);
  g.add(1, 2);
  g.add(2, 0);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(p.nodes - 1));
  std::size_t misses = 0;
  while (g.edge_count() < p.edges && misses < detail::kGrowthRetryCap) {
    const NodeId i = node(rng);
    const NodeId j = node(rng);
    if (i == j || detail::adjacent(g, i, j)) {
      ++misses;
      continue;
    }
    const auto nbrs = detail::neighbours(g, j);
    if (nbrs.empty()) {
      ++misses;
      continue;
    }
    const NodeId k = nbrs[uniform_index(rng, nbrs.size())];
    const bool j_to_k = g.has(j, k);
    const Edge first = j_to_k ? Edge{i, j} : Edge{j, i};
    const Edge second = j_to_k ? Edge{k, i} : Edge{i, k};
    if (g.has(second.from, second.to)) {
      ++misses;
      continue;
    }
    g.add(first.from, first.to);
    g.add(second.from, second.to);
  }
  detail::adjust_edges(g, p.edges, rng);
  return g.freeze();
}

/// Random rectangle network grown by directed 4-cycle closure from a seed rectangle.
inline DirectedGraph gen_rrn(const GeneratorParams& p) {
  p.validate();
  if (p.nodes < 4) throw std::invalid_argument("RRN: need at least 4 nodes");
  auto rng = make_rng(p.seed);
  detail::MutableDigraph g(p.nodes);
  for (NodeId v = 0; v < 4; ++v) g.add(v, (v + 1) % 4);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(p.nodes - 1));
  std::size_t misses = 0;
  while (g.edge_count() < p.edges && misses < detail::kGrowthRetryCap) {
    const NodeId i = node(rng);
    const NodeId j = node(rng);
    const NodeId k = node(rng);
    if (i == j || j == k || i == k || detail::adjacent(g, i, j) || detail::adjacent(g, j, k) ||
        detail::adjacent(g, i, k)) {
      ++misses;
      continue;
    }
    const auto nbrs = detail::neighbours(g, k);
    if (nbrs.empty()) {
      ++misses;
      continue;
    }
    const NodeId w = nbrs[uniform_index(rng, nbrs.size())];
    const bool k_to_w = g.has(k, w);
    const Edge closing = k_to_w ? Edge{w, i} : Edge{j, w};
    if (g.has(closing.from, closing.to)) {
      ++misses;
      continue;
    }
    if (k_to_w) {
      g.add(w, i);
      g.add(i, j);
      g.add(j, k);
    } else {
      g.add(k, i);
      g.add(i, j);
      g.add(j, w);
    }
  }
  detail::adjust_edges(g, p.edges, rng);
  return g.freeze();
}

inline DirectedGraph generate(const GeneratorParams& p) {
  switch (p.model) {
    case Model::ER: return gen_er(p);
    case Model::SW: return gen_sw(p);
    case Model::SF: return gen_sf(p);
    case Model::QSN: return gen_qsn(p);
    case Model::RTN: return gen_rtn(p);
    case Model::RRN: return gen_rrn(p);
  }
  throw std::invalid_argument("generate: unknown model");
}

}  // namespace ctrlrob
