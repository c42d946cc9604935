#pragma once

// Slow reference implementations used to cross-check the library.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <ctrlrob/controllability.hpp>
#include <ctrlrob/graph.hpp>
#include <ctrlrob/random.hpp>

namespace oracle {

using ctrlrob::DirectedGraph;
using ctrlrob::Edge;
using ctrlrob::NodeId;
using ctrlrob::Rational;

inline DirectedGraph random_graph(std::size_t n, double p, ctrlrob::Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && coin(rng)) edges.push_back({u, v});
  return DirectedGraph(n, edges);
}

namespace detail {

inline std::size_t best_matching(const DirectedGraph& g, NodeId u, std::vector<char>& head_used,
                                 const std::vector<char>& alive) {
  if (u == g.node_count()) return 0;
  std::size_t best = best_matching(g, u + 1, head_used, alive);  // u left unmatched
  if (!alive[u]) return best;
  for (NodeId v : g.out_neighbors(u)) {
    if (!alive[v] || head_used[v]) continue;
    head_used[v] = 1;
    best = std::max(best, 1 + best_matching(g, u + 1, head_used, alive));
    head_used[v] = 0;
  }
  return best;
}

}  // namespace detail

/// Largest matching found by trying every choice of out-edge (or none) for each tail.
inline std::size_t max_matching_brute_force(const DirectedGraph& g, const std::vector<char>& alive) {
  std::vector<char> head_used(g.node_count(), 0);
  return detail::best_matching(g, 0, head_used, alive);
}

inline std::size_t max_matching_brute_force(const DirectedGraph& g) {
  return max_matching_brute_force(g, std::vector<char>(g.node_count(), 1));
}

inline std::size_t drivers_brute_force(const DirectedGraph& g, const std::vector<char>& alive) {
  const auto live = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), 1));
  return std::max<std::size_t>(1, live - max_matching_brute_force(g, alive));
}

/// Rank by textbook Gaussian elimination over the rationals.
inline std::size_t rational_rank(const ctrlrob::DenseMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// <R_c> by walking all N! removal orders with brute-force matchings on each survivor set.
inline Rational exhaustive_rc_brute_force(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  Rational total = 0;
  std::size_t orders = 0;
  do {
    std::vector<char> alive(n, 1);
    Rational rc = 0;
    for (std::size_t i = 1; i < n; ++i) {
      alive[perm[i - 1]] = 0;
      rc += Rational(static_cast<long long>(drivers_brute_force(g, alive)), static_cast<long long>(n - i));
    }
    total += rc / static_cast<long long>(n - 1);
    ++orders;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<long long>(orders);
}

struct PathStats {
  double apl{0.0};  // +inf if some ordered pair is unreachable
  std::vector<double> betweenness;
};

/// Enumerates every simple directed path to get shortest distances, path counts and betweenness.
inline PathStats all_pairs_paths(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  PathStats out;
  out.betweenness.assign(n, 0.0);
  double total = 0.0;
  bool unreachable = false;
  for (NodeId s = 0; s < n; ++s)
    for (NodeId t = 0; t < n; ++t) {
      if (s == t) continue;
      std::size_t shortest = kNone;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> path{s};
      std::vector<char> on_path(n, 0);
      on_path[s] = 1;
      auto dfs = [&](auto& self, NodeId v) -> void {
        if (v == t) {
          const std::size_t len = path.size() - 1;
          if (len < shortest) {
            shortest = len;
            paths.clear();
          }
          if (len == shortest) paths.push_back(path);
          return;
        }
        for (NodeId w : g.out_neighbors(v)) {
          if (on_path[w]) continue;
          on_path[w] = 1;
          path.push_back(w);
          self(self, w);
          path.pop_back();
          on_path[w] = 0;
        }
      };
      dfs(dfs, s);
      if (shortest == kNone) {
        unreachable = true;
        continue;
      }
      total += static_cast<double>(shortest);
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.size(); ++k)
          out.betweenness[p[k]] += 1.0 / static_cast<double>(paths.size());
    }
  out.apl = unreachable ? std::numeric_limits<double>::infinity()
                        : total / (static_cast<double>(n) * static_cast<double>(n - 1));
  return out;
}

}  // namespace oracle
