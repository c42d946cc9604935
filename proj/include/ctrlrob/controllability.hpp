#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "graph.hpp"

namespace ctrlrob {

using Rational = boost::multiprecision::cpp_rational;

enum class Criterion : std::uint8_t { structural, exact };

inline const char* to_string(Criterion c) { return c == Criterion::structural ? "structural" : "exact"; }

inline Criterion parse_criterion(const std::string& s) {
  if (s == "structural") return Criterion::structural;
  if (s == "exact") return Criterion::exact;
  throw std::invalid_argument("unknown criterion '" + s + "' (expected structural or exact)");
}

/// A maximum matching E*: matched nodes are the heads of matched edges.
struct MatchingResult {
  std::vector<Edge> matched_pairs;
  std::vector<NodeId> unmatched_nodes;

  std::size_t size() const noexcept { return matched_pairs.size(); }
};

struct DriverCount {
  std::size_t value{1};
  Criterion criterion{Criterion::structural};
};

/**
 * Hopcroft-Karp matching on the bipartite split of a directed graph
 * (out-copies on the left, in-copies on the right) restricted to a set of
 * live nodes.
 *
 * Nodes can be removed one at a time; the matching is repaired from the
 * previous maximum instead of being rebuilt.
 */
class MatchingEngine {
 public:
  explicit MatchingEngine(const DirectedGraph& g) : MatchingEngine(g, 0) {
    augment_to_maximum();
  }

  /// Starts from the subgraph induced by the nodes with alive[v] != 0.
  MatchingEngine(const DirectedGraph& g, std::span<const char> alive) : MatchingEngine(g, 0) {
    if (alive.size() != g.node_count()) throw std::invalid_argument("alive mask size mismatch");
    live_count_ = 0;
    for (std::size_t v = 0; v < alive.size(); ++v) {
      alive_[v] = alive[v] ? 1 : 0;
      live_count_ += alive_[v];
    }
    augment_to_maximum();
  }

  // The engine keeps a pointer to the graph.
  explicit MatchingEngine(DirectedGraph&&) = delete;
  MatchingEngine(DirectedGraph&&, std::span<const char>) = delete;

  std::size_t live_count() const noexcept { return live_count_; }
  std::size_t matching_size() const noexcept { return matching_size_; }
  bool is_alive(NodeId v) const { return alive_.at(v) != 0; }

  /// max{1, live - |E*|}; the empty graph is rejected.
  std::size_t driver_count() const {
    if (live_count_ == 0) throw std::domain_error("driver count of an empty node set");
    return std::max<std::size_t>(1, live_count_ - matching_size_);
  }

  void remove(NodeId v) {
    if (v >= alive_.size() || !alive_[v])
      throw std::invalid_argument("MatchingEngine::remove: node " + std::to_string(v) +
                                  " is not live");
    alive_[v] = 0;
    --live_count_;
    bool freed = false;
    if (match_left_[v] != kFree) {
      match_right_[match_left_[v]] = kFree;
      match_left_[v] = kFree;
      --matching_size_;
      freed = true;
    }
    if (match_right_[v] != kFree) {
      match_left_[match_right_[v]] = kFree;
      match_right_[v] = kFree;
      --matching_size_;
      freed = true;
    }
    // A matching that loses no edge stays maximum after a vertex deletion.
    if (freed) augment_to_maximum();
  }

  MatchingResult result() const {
    MatchingResult r;
    for (NodeId u = 0; u < match_left_.size(); ++u)
      if (match_left_[u] != kFree) r.matched_pairs.push_back({u, match_left_[u]});
    for (NodeId v = 0; v < match_right_.size(); ++v)
      if (alive_[v] && match_right_[v] == kFree) r.unmatched_nodes.push_back(v);
    return r;
  }

 private:
  static constexpr NodeId kFree = std::numeric_limits<NodeId>::max();
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  // Allocates without matching.
  MatchingEngine(const DirectedGraph& g, int)
      : graph_(&g),
        alive_(g.node_count(), 1),
        live_count_(g.node_count()),
        match_left_(g.node_count(), kFree),
        match_right_(g.node_count(), kFree),
        layer_(g.node_count(), 0),
        cursor_(g.node_count(), 0) {}

  void augment_to_maximum() {
    while (build_layers()) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (NodeId u = 0; u < match_left_.size(); ++u)
        if (alive_[u] && match_left_[u] == kFree && augment_from(u)) ++matching_size_;
    }
  }

  // BFS from all free live left vertices; true if some free right vertex is reachable.
  bool build_layers() {
    std::queue<NodeId> queue;
    for (NodeId u = 0; u < match_left_.size(); ++u) {
      if (alive_[u] && match_left_[u] == kFree) {
        layer_[u] = 0;
        queue.push(u);
      } else {
        layer_[u] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop();
      for (NodeId v : graph_->out_neighbors(u)) {
        if (!alive_[v]) continue;
        const NodeId w = match_right_[v];
        if (w == kFree) {
          found = true;
        } else if (layer_[w] == kInf) {
          layer_[w] = layer_[u] + 1;
          queue.push(w);
        }
      }
    }
    return found;
  }

  bool augment_from(NodeId u) {
    auto nbrs = graph_->out_neighbors(u);
    for (; cursor_[u] < nbrs.size(); ++cursor_[u]) {
      const NodeId v = nbrs[cursor_[u]];
      if (!alive_[v]) continue;
      const NodeId w = match_right_[v];
      if (w == kFree || (layer_[w] == layer_[u] + 1 && augment_from(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    layer_[u] = kInf;
    return false;
  }

  const DirectedGraph* graph_;
  std::vector<char> alive_;
  std::size_t live_count_;
  std::vector<NodeId> match_left_;
  std::vector<NodeId> match_right_;
  std::vector<std::size_t> layer_;
  std::vector<std::size_t> cursor_;
  std::size_t matching_size_{0};
};

inline MatchingResult maximum_matching(const DirectedGraph& g) { return MatchingEngine(g).result(); }

inline DriverCount structural_drivers(const DirectedGraph& g) {
  if (g.empty()) throw std::invalid_argument("structural_drivers: graph has no nodes");
  return {MatchingEngine(g).driver_count(), Criterion::structural};
}

// ---------------------------------------------------------------------------
// Adjacency rank
// ---------------------------------------------------------------------------

using DenseMatrix = std::vector<std::vector<std::int64_t>>;

inline DenseMatrix adjacency_matrix(const DirectedGraph& g) {
  DenseMatrix a(g.node_count(), std::vector<std::int64_t>(g.node_count(), 0));
  for (const auto& e : g.edges()) a[e.from][e.to] = 1;
  return a;
}

/// Rank over Q by Bareiss fraction-free elimination on big integers.
inline std::size_t exact_rank(const DenseMatrix& m) {
  using boost::multiprecision::cpp_int;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::vector<cpp_int>> a(rows, std::vector<cpp_int>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];

  cpp_int prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev_pivot;
      a[i][col] = 0;
    }
    prev_pivot = a[rank][col];
    ++rank;
  }
  return rank;
}

/// Rank over GF(p); never exceeds the rank over Q.
inline std::size_t modular_rank(const DenseMatrix& m, std::uint64_t prime) {
  using u128 = unsigned __int128;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::int64_t x = m[i][j] % static_cast<std::int64_t>(prime);
      a[i][j] = static_cast<std::uint64_t>(x < 0 ? x + static_cast<std::int64_t>(prime) : x);
    }
  auto mulmod = [prime](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<u128>(x) * y % prime);
  };
  auto powmod = [&](std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (; exp; exp >>= 1, base = mulmod(base, base))
      if (exp & 1) r = mulmod(r, base);
    return r;
  };

  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const std::uint64_t inv = powmod(a[rank][col], prime - 2);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      const std::uint64_t factor = mulmod(a[i][col], inv);
      for (std::size_t j = col; j < cols; ++j) {
        const std::uint64_t sub = mulmod(factor, a[rank][j]);
        a[i][j] = a[i][j] >= sub ? a[i][j] - sub : a[i][j] + prime - sub;
      }
    }
    ++rank;
  }
  return rank;
}

/// Below this size exact_drivers always takes the big-integer route.
inline constexpr std::size_t kExactRankNodeLimit = 64;

// Two primes below 2^62; rank mod p < rank over Q needs p to divide every
// maximal nonzero minor, so taking the larger of two ranks is safe in practice.
inline constexpr std::uint64_t kRankPrimeA = 4611686018427387847ULL;
inline constexpr std::uint64_t kRankPrimeB = 4611686018427387817ULL;

inline std::size_t adjacency_rank(const DirectedGraph& g) {
  const auto a = adjacency_matrix(g);
  if (g.node_count() <= kExactRankNodeLimit) return exact_rank(a);
  return std::max(modular_rank(a, kRankPrimeA), modular_rank(a, kRankPrimeB));
}

inline DriverCount exact_drivers(const DirectedGraph& g) {
  if (g.empty()) throw std::invalid_argument("exact_drivers: graph has no nodes");
  return {std::max<std::size_t>(1, g.node_count() - adjacency_rank(g)), Criterion::exact};
}

inline DriverCount driver_count(const DirectedGraph& g, Criterion criterion) {
  return criterion == Criterion::structural ? structural_drivers(g) : exact_drivers(g);
}

/// n_D = N_D / current size.
inline Rational nd_density(const DriverCount& d, std::size_t current_size) {
  if (current_size == 0) throw std::invalid_argument("nd_density: network size must be positive");
  return Rational(static_cast<long long>(d.value), static_cast<long long>(current_size));
}

}  // namespace ctrlrob
