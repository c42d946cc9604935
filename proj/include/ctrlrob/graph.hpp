#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctrlrob {

using NodeId = std::uint32_t;

struct Edge {
  NodeId from{0};
  NodeId to{0};

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// In/out degree sequences indexed by node id.
struct DegreeVector {
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
};

enum class DegreeSide : std::uint8_t { in, out };

inline const char* to_string(DegreeSide side) { return side == DegreeSide::in ? "in" : "out"; }

/**
 * Immutable simple directed graph over nodes 0..N-1.
 *
 * Edges are kept sorted (by tail, then head) with CSR adjacency in both
 * directions. Self-loops are rejected; duplicate edges collapse.
 */
class DirectedGraph {
 public:
  DirectedGraph() = default;

  explicit DirectedGraph(std::size_t node_count)
      : node_count_(node_count), out_offsets_(node_count + 1, 0), in_offsets_(node_count + 1, 0) {}

  DirectedGraph(std::size_t node_count, std::vector<Edge> edges) : node_count_(node_count) {
    for (const auto& e : edges) {
      if (e.from >= node_count || e.to >= node_count)
        throw std::out_of_range("edge endpoint " + std::to_string(std::max(e.from, e.to)) +
                                " outside node range " + std::to_string(node_count));
      if (e.from == e.to)
        throw std::invalid_argument("self-loop on node " + std::to_string(e.from));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    build_adjacency();
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return node_count_ == 0; }

  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    check_node(v);
    return {out_targets_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }

  std::span<const NodeId> in_neighbors(NodeId v) const {
    check_node(v);
    return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }

  std::size_t out_degree(NodeId v) const { return out_neighbors(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }

  bool has_edge(NodeId from, NodeId to) const {
    auto nbrs = out_neighbors(from);
    return std::binary_search(nbrs.begin(), nbrs.end(), to);
  }

  /// M / (N(N-1)); zero for graphs with fewer than two nodes.
  double density() const noexcept {
    if (node_count_ < 2) return 0.0;
    return static_cast<double>(edges_.size()) /
           (static_cast<double>(node_count_) * static_cast<double>(node_count_ - 1));
  }

  /// Sparse means M / M_max <= 0.05.
  bool is_sparse() const noexcept { return density() <= 0.05; }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  void check_node(NodeId v) const {
    if (v >= node_count_)
      throw std::out_of_range("node id " + std::to_string(v) + " outside range " +
                              std::to_string(node_count_));
  }

  void build_adjacency() {
    out_offsets_.assign(node_count_ + 1, 0);
    in_offsets_.assign(node_count_ + 1, 0);
    for (const auto& e : edges_) {
      ++out_offsets_[e.from + 1];
      ++in_offsets_[e.to + 1];
    }
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
    std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      out_targets_[k] = edges_[k].to;  // edges_ is sorted by tail, so CSR order matches
      in_sources_[in_fill[edges_[k].to]++] = edges_[k].from;
    }
  }

  std::size_t node_count_{0};
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
};

inline DegreeVector degrees(const DirectedGraph& g) {
  DegreeVector d{std::vector<std::size_t>(g.node_count(), 0),
                 std::vector<std::size_t>(g.node_count(), 0)};
  for (const auto& e : g.edges()) {
    ++d.out[e.from];
    ++d.in[e.to];
  }
  return d;
}

/// Induced subgraph on the nodes with keep[v] != 0, re-indexed densely in id order.
inline DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const char> keep) {
  if (keep.size() != g.node_count()) throw std::invalid_argument("keep mask size mismatch");
  std::vector<NodeId> new_id(g.node_count(), 0);
  NodeId next = 0;
  for (std::size_t v = 0; v < keep.size(); ++v)
    if (keep[v]) new_id[v] = next++;
  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (keep[e.from] && keep[e.to]) edges.push_back({new_id[e.from], new_id[e.to]});
  return DirectedGraph(next, std::move(edges));
}

/// Deletes v and its incident edges; ids above v shift down by one.
inline DirectedGraph remove_node(const DirectedGraph& g, NodeId v) {
  if (v >= g.node_count())
    throw std::out_of_range("remove_node: node " + std::to_string(v) + " not in graph of size " +
                            std::to_string(g.node_count()));
  std::vector<char> keep(g.node_count(), 1);
  keep[v] = 0;
  return induced_subgraph(g, keep);
}

/// Applies new_label[v] to every node.
inline DirectedGraph relabel(const DirectedGraph& g, std::span<const NodeId> new_label) {
  if (new_label.size() != g.node_count()) throw std::invalid_argument("relabel: size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({new_label[e.from], new_label[e.to]});
  return DirectedGraph(g.node_count(), std::move(edges));
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --sets_;
    return true;
  }
  std::size_t set_count() const noexcept { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t sets_;
};

}  // namespace detail

/// Number of connected components of the undirected shadow.
inline std::size_t weak_component_count(const DirectedGraph& g) {
  detail::UnionFind uf(g.node_count());
  for (const auto& e : g.edges()) uf.unite(e.from, e.to);
  return uf.set_count();
}

inline bool is_weakly_connected(const DirectedGraph& g) {
  if (g.empty()) throw std::invalid_argument("is_weakly_connected: graph has no nodes");
  return weak_component_count(g) == 1;
}

// ---------------------------------------------------------------------------
// Canonical forms for small graphs
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxCanonicalNodes = 8;

/**
 * Isomorphism-class key for graphs with at most 8 nodes.
 *
 * `code` packs the off-diagonal adjacency rows (N-1 bits each) of the
 * relabeling that minimizes the packed value, row 0 most significant.
 */
struct CanonicalForm {
  std::uint8_t nodes{0};
  std::uint64_t code{0};

  friend constexpr auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;

  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out{nodes};
    for (int shift = 56; shift >= 0; shift -= 8)
      out.push_back(static_cast<std::uint8_t>((code >> shift) & 0xFF));
    return out;
  }

  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (auto b : bytes()) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xF]);
    }
    return s;
  }
};

struct CanonicalFormHash {
  std::size_t operator()(const CanonicalForm& f) const noexcept {
    return std::hash<std::uint64_t>{}(f.code * 0x9E3779B97F4A7C15ULL ^ f.nodes);
  }
};

namespace detail {

/// Row of the relabeled adjacency with the diagonal column squeezed out.
inline std::uint64_t squeeze_diagonal(std::uint64_t row, unsigned diag) {
  const std::uint64_t low = row & ((std::uint64_t{1} << diag) - 1);
  return ((row >> (diag + 1)) << diag) | low;
}

/**
 * Minimum packed adjacency code over all n! relabelings.
 *
 * out_masks[v] has bit w set iff v -> w. On return `best_order[r]` is the
 * original node that receives label r in the minimizing relabeling.
 */
inline std::uint64_t min_adjacency_code(std::size_t n, const std::array<std::uint8_t, 8>& out_masks,
                                        std::array<std::uint8_t, 8>& best_order) {
  if (n <= 1) {
    best_order[0] = 0;
    return 0;
  }
  const unsigned row_bits = static_cast<unsigned>(n - 1);
  std::array<std::uint8_t, 8> order{};  // order[r] = original node placed at row r
  std::array<std::uint8_t, 8> label{};  // label[v]  = new id of original node v
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint8_t>(i);
  std::array<std::uint64_t, 8> best_rows{};
  bool have_best = false;

  do {
    for (std::size_t r = 0; r < n; ++r) label[order[r]] = static_cast<std::uint8_t>(r);
    // 0: equal to best so far, 1: strictly smaller
    int state = have_best ? 0 : 1;
    std::array<std::uint64_t, 8> rows{};
    bool aborted = false;
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t row = 0;
      for (std::uint8_t m = out_masks[order[r]]; m != 0; m &= static_cast<std::uint8_t>(m - 1))
        row |= std::uint64_t{1} << label[std::countr_zero(static_cast<unsigned>(m))];
      row = squeeze_diagonal(row, static_cast<unsigned>(r));
      rows[r] = row;
      if (state == 0) {
        if (row > best_rows[r]) {
          aborted = true;
          break;
        }
        if (row < best_rows[r]) state = 1;
      }
    }
    if (!aborted && state == 1) {
      best_rows = rows;
      best_order = order;
      have_best = true;
    }
  } while (std::next_permutation(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n)));

  std::uint64_t code = 0;
  for (std::size_t r = 0; r < n; ++r) code = (code << row_bits) | best_rows[r];
  return code;
}

inline std::array<std::uint8_t, 8> out_masks_of(const DirectedGraph& g) {
  std::array<std::uint8_t, 8> masks{};
  for (const auto& e : g.edges()) masks[e.from] |= static_cast<std::uint8_t>(1u << e.to);
  return masks;
}

inline void check_canonical_size(const DirectedGraph& g) {
  if (g.node_count() > kMaxCanonicalNodes)
    throw std::invalid_argument("canonical_form: " + std::to_string(g.node_count()) +
                                " nodes exceeds the brute-force limit of 8");
}

}  // namespace detail

inline CanonicalForm canonical_form(const DirectedGraph& g) {
  detail::check_canonical_size(g);
  std::array<std::uint8_t, 8> order{};
  return {static_cast<std::uint8_t>(g.node_count()),
          detail::min_adjacency_code(g.node_count(), detail::out_masks_of(g), order)};
}

/// The graph relabeled into its canonical ordering.
inline DirectedGraph canonical_representative(const DirectedGraph& g) {
  detail::check_canonical_size(g);
  std::array<std::uint8_t, 8> order{};
  detail::min_adjacency_code(g.node_count(), detail::out_masks_of(g), order);
  std::vector<NodeId> label(g.node_count());
  for (std::size_t r = 0; r < g.node_count(); ++r) label[order[r]] = static_cast<NodeId>(r);
  return relabel(g, label);
}

/// Rebuilds the canonical representative from its packed code.
inline DirectedGraph from_canonical_form(const CanonicalForm& form) {
  const std::size_t n = form.nodes;
  if (n > kMaxCanonicalNodes) throw std::invalid_argument("canonical form node count exceeds 8");
  std::vector<Edge> edges;
  if (n >= 2) {
    const unsigned row_bits = static_cast<unsigned>(n - 1);
    for (std::size_t r = 0; r < n; ++r) {
      const unsigned shift = static_cast<unsigned>((n - 1 - r) * row_bits);
      const std::uint64_t row = (form.code >> shift) & ((std::uint64_t{1} << row_bits) - 1);
      for (unsigned b = 0; b < row_bits; ++b) {
        if (!((row >> b) & 1)) continue;
        const NodeId col = b < r ? b : b + 1;
        edges.push_back({static_cast<NodeId>(r), col});
      }
    }
  }
  return DirectedGraph(n, std::move(edges));
}

// A few fixtures used across the toolkit and its tests.

inline DirectedGraph directed_cycle(std::size_t n) {
  std::vector<Edge> edges;
  if (n >= 2)
    for (std::size_t i = 0; i < n; ++i)
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)});
  return DirectedGraph(n, std::move(edges));
}

inline DirectedGraph directed_chain(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  return DirectedGraph(n, std::move(edges));
}

/// Node 0 points at every other node.
inline DirectedGraph out_star(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, static_cast<NodeId>(i)});
  return DirectedGraph(n, std::move(edges));
}

inline DirectedGraph complete_digraph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  return DirectedGraph(n, std::move(edges));
}

}  // namespace ctrlrob
